// Copyright the pepv authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PEPV_PROBLEM_IO_HPP
#define PEPV_PROBLEM_IO_HPP

#include <string>

#include <json.hpp>

#include "pepv/contour.hpp"
#include "pepv/poly_core.hpp"
#include "pepv/repv.hpp"

namespace pepv
{

enum class ProblemKind
{
  Pepv,
  Repv
};

struct Problem
{
  ProblemKind kind = ProblemKind::Pepv;
  PolyMatrixT pepv;
  RepvProblem repv;
};

// Parses a problem document. Validation errors inside rows[i] carry
// "<source>:<line>" of that row in the detail. Malformed JSON throws
// ParseError with the parser's position.
Problem ParseProblem(const std::string &text, const std::string &source = "<input>");
Problem LoadProblem(const std::string &path);

nlohmann::json PepvToJson(const PolyMatrixT &t);

// {"kind": "circle"|"ellipse", "center": [re, im], "radius": r} or
// {..., "radii": [rx, ry], "rotation": theta}.
Contour ParseContour(const nlohmann::json &j);
nlohmann::json ContourToJson(const Contour &c);

// A complex number given as [re, im] or a real number.
Complex ParseComplex(const nlohmann::json &j);
nlohmann::json ComplexToJson(Complex c);

// Ascending coefficients as a JSON array, or an object with "coeffs".
CVector ParseCoefficients(const std::string &text);

std::string ReadFile(const std::string &path);

}  // namespace pepv

#endif  // PEPV_PROBLEM_IO_HPP
