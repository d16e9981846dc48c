// Copyright the pepv authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PEPV_CONTOUR_HPP
#define PEPV_CONTOUR_HPP

#include <algorithm>
#include <string>
#include <vector>

#include "pepv/common.hpp"

namespace pepv
{

enum class ContourKind
{
  Circle,
  Ellipse
};

// phi(t) = center + e^{i rotation} (rx cos t + i ry sin t), t in [0, 2pi).
class Contour
{
public:
  static Contour Circle(Complex center, double radius);
  static Contour Ellipse(Complex center, double rx, double ry, double rotation = 0.0);

  ContourKind Kind() const { return kind; }
  Complex Center() const { return center; }
  double RadiusX() const { return rx; }
  double RadiusY() const { return ry; }
  double Rotation() const { return rotation; }
  // Radius used to normalize moments: max(rx, ry).
  double Scale() const { return std::max(rx, ry); }

  Complex Point(double t) const;
  Complex Derivative(double t) const;

  // Strictly inside; boundary points report false.
  bool Contains(Complex z) const;

private:
  Contour(ContourKind kind, Complex center, double rx, double ry, double rotation);

  ContourKind kind;
  Complex center;
  double rx, ry, rotation;
};

struct Node
{
  double t;
  Complex z;
  Complex dz;
};

// Equidistant trapezoidal nodes t_l = 2 pi l / N, l = 0..N-1.
class NodeGrid
{
public:
  NodeGrid(const Contour &contour, int count);

  int Count() const { return static_cast<int>(nodes.size()); }
  const Contour &Path() const { return contour; }
  const std::vector<Node> &Nodes() const { return nodes; }
  const Node &operator[](int l) const { return nodes[l]; }
  // Parameter of node l for l in [0, N]; l = N closes the loop at t = 2 pi.
  double Parameter(int l) const;

private:
  Contour contour;
  std::vector<Node> nodes;
};

// Throws TooFewNodes if count < 4.
NodeGrid MakeGrid(const Contour &contour, int count);

}  // namespace pepv

#endif  // PEPV_CONTOUR_HPP
