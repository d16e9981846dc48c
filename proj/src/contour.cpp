// Copyright the pepv authors.
// SPDX-License-Identifier: Apache-2.0

#include "pepv/contour.hpp"

#include <cmath>

namespace pepv
{

Contour::Contour(ContourKind kind, Complex center, double rx, double ry, double rotation)
  : kind(kind), center(center), rx(rx), ry(ry), rotation(rotation)
{
  if (!(rx > 0.0) || !(ry > 0.0) || !std::isfinite(rx) || !std::isfinite(ry))
  {
    ThrowValidation("InvalidContour", "radii must be positive and finite");
  }
}

Contour Contour::Circle(Complex center, double radius)
{
  return Contour(ContourKind::Circle, center, radius, radius, 0.0);
}

Contour Contour::Ellipse(Complex center, double rx, double ry, double rotation)
{
  return Contour(ContourKind::Ellipse, center, rx, ry, rotation);
}

Complex Contour::Point(double t) const
{
  const Complex local(rx * std::cos(t), ry * std::sin(t));
  return rotation == 0.0 ? center + local : center + std::polar(1.0, rotation) * local;
}

Complex Contour::Derivative(double t) const
{
  const Complex local(-rx * std::sin(t), ry * std::cos(t));
  return rotation == 0.0 ? local : std::polar(1.0, rotation) * local;
}

bool Contour::Contains(Complex z) const
{
  Complex w = z - center;
  if (rotation != 0.0)
  {
    w *= std::polar(1.0, -rotation);
  }
  const double u = w.real() / rx, v = w.imag() / ry;
  return u * u + v * v < 1.0;
}

NodeGrid::NodeGrid(const Contour &contour, int count) : contour(contour)
{
  if (count < 4)
  {
    ThrowValidation("TooFewNodes", "need at least 4 quadrature nodes, got " +
                                       std::to_string(count));
  }
  nodes.reserve(count);
  for (int l = 0; l < count; l++)
  {
    const double t = 2.0 * kPi * l / count;
    nodes.push_back(Node{t, contour.Point(t), contour.Derivative(t)});
  }
}

double NodeGrid::Parameter(int l) const
{
  return 2.0 * kPi * l / Count();
}

NodeGrid MakeGrid(const Contour &contour, int count)
{
  return NodeGrid(contour, count);
}

}  // namespace pepv
