// Copyright the pepv authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PEPV_POLY_CORE_HPP
#define PEPV_POLY_CORE_HPP

#include <cstdint>
#include <vector>

#include "pepv/common.hpp"
#include "pepv/linalg.hpp"

namespace pepv
{

// Univariate polynomial in z, ascending coefficients. The zero polynomial is
// the empty list; otherwise the leading coefficient is nonzero.
class ZPoly
{
public:
  ZPoly() = default;
  explicit ZPoly(CVector ascending);
  static ZPoly Constant(Complex c) { return ZPoly(CVector{c}); }

  // -1 for the zero polynomial.
  int Degree() const { return static_cast<int>(coeffs.size()) - 1; }
  bool IsZero() const { return coeffs.empty(); }
  const CVector &Coefficients() const { return coeffs; }

  // Horner recurrence.
  Complex operator()(Complex z) const;
  Complex Derivative(Complex z) const;

  ZPoly &operator+=(const ZPoly &o);
  ZPoly operator*(const ZPoly &o) const;
  ZPoly operator*(Complex s) const;
  ZPoly operator-() const;
  bool operator==(const ZPoly &o) const { return coeffs == o.coeffs; }

private:
  void Trim();
  CVector coeffs;
};

using Exponent = std::vector<int>;

int TotalDegree(const Exponent &e);

struct XTerm
{
  Exponent exponent;
  ZPoly coeff;
};

// Sorted sparse polynomial in x with z-polynomial coefficients; duplicate
// exponents merged, zero coefficients dropped.
using XPoly = std::vector<XTerm>;

XPoly Normalize(XPoly terms);

// The n x n matrix T(x, z). Entry (i, j) is homogeneous of degree
// row_degrees[i] in x with z-coefficients of degree <= z_degree.
struct PolyMatrixT
{
  int n = 0;
  std::vector<int> row_degrees;
  std::vector<std::vector<XPoly>> entries;
  int z_degree = 0;

  const XPoly &Entry(int i, int j) const { return entries[i][j]; }

  // Throws InhomogeneousRow(i) / ZDegreeExceeded(i) / DimensionMismatch.
  // Row indices in error codes are 1-based.
  void Validate() const;

  CMatrix Evaluate(const CVector &x, Complex z) const;
};

enum class ShiftStyle
{
  Dense,
  Monomial
};

const char *ToString(ShiftStyle s);
ShiftStyle ShiftStyleFromString(const std::string &s);

// Shift polynomials a_1..a_n, a_i homogeneous of degree d_i.
struct ShiftVector
{
  std::vector<XPoly> polys;
  ShiftStyle style = ShiftStyle::Dense;
  std::uint64_t seed = 0;

  static ShiftVector Zero(int n);
};

// Polynomial system in nvars variables whose coefficients are polynomials in z.
// Rows need not be homogeneous. Holds the assembled F(x, z) = T(x, z) x - a(x)
// and any other square system the tracker is asked to follow.
class SquareSystem
{
public:
  SquareSystem() = default;
  SquareSystem(int nvars, std::vector<XPoly> rows);

  int NumVars() const { return nvars; }
  int NumRows() const { return static_cast<int>(rows.size()); }
  const std::vector<XPoly> &Rows() const { return rows; }
  const XPoly &Row(int i) const { return rows[i]; }
  // Total x-degree of each row.
  const std::vector<int> &RowDegrees() const { return row_degree; }

  CVector Evaluate(const CVector &x, Complex z) const;
  CMatrix JacobianX(const CVector &x, Complex z) const;
  CVector DerivativeZ(const CVector &x, Complex z) const;

  // Value, x-Jacobian and z-derivative in one pass; dz may be null.
  void EvaluateAll(const CVector &x, Complex z, CVector &f, CMatrix &jac, CVector *dz) const;

private:
  int nvars = 0;
  std::vector<XPoly> rows;
  std::vector<int> row_degree;
  std::vector<int> max_power;
};

// Row i of the result is sum_j T_ij(x, z) x_j - a_i(x). Throws
// InhomogeneousRow(i) for inhomogeneous T rows and DegreeMismatch(i) when
// deg a_i != d_i.
SquareSystem AssemblePepv(const PolyMatrixT &t, const ShiftVector &a);

}  // namespace pepv

#endif  // PEPV_POLY_CORE_HPP
