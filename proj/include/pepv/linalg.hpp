// Copyright the pepv authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PEPV_LINALG_HPP
#define PEPV_LINALG_HPP

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "pepv/common.hpp"

namespace pepv
{

// Dense row-major complex matrix.
class CMatrix
{
public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols, Complex fill = 0.0);
  CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static CMatrix Identity(std::size_t n);
  static CMatrix Diagonal(const CVector &d);

  std::size_t Rows() const { return nrows; }
  std::size_t Cols() const { return ncols; }
  bool Empty() const { return data.empty(); }

  Complex &operator()(std::size_t i, std::size_t j) { return data[i * ncols + j]; }
  const Complex &operator()(std::size_t i, std::size_t j) const { return data[i * ncols + j]; }

  const std::vector<Complex> &Data() const { return data; }

  CVector Col(std::size_t j) const;
  void SetCol(std::size_t j, const CVector &v);
  CMatrix Block(std::size_t i0, std::size_t j0, std::size_t rows, std::size_t cols) const;
  void SetBlock(std::size_t i0, std::size_t j0, const CMatrix &b);

  CMatrix Adjoint() const;
  double FrobeniusNorm() const;
  double MaxAbs() const;
  bool AllFinite() const;

  CMatrix &operator+=(const CMatrix &o);
  CMatrix &operator-=(const CMatrix &o);
  CMatrix &operator*=(Complex s);

private:
  std::size_t nrows = 0, ncols = 0;
  std::vector<Complex> data;
};

CMatrix operator+(CMatrix a, const CMatrix &b);
CMatrix operator-(CMatrix a, const CMatrix &b);
CMatrix operator*(CMatrix a, Complex s);
CMatrix operator*(Complex s, CMatrix a);
CMatrix operator*(const CMatrix &a, const CMatrix &b);
CVector operator*(const CMatrix &a, const CVector &x);

// LU factorization with partial pivoting, P*A = L*U. Throws Singular when a
// pivot falls below 1e-14 times the max modulus of its original row.
class LuDecomposition
{
public:
  explicit LuDecomposition(const CMatrix &a);

  CMatrix Solve(const CMatrix &b) const;
  CVector Solve(const CVector &b) const;
  Complex Determinant() const;

  // Unit lower factor, upper factor and permutation (row i of P*A is row perm[i] of A).
  CMatrix L() const;
  CMatrix U() const;
  const std::vector<std::size_t> &Permutation() const { return perm; }

private:
  CMatrix lu;
  std::vector<std::size_t> perm;
  int sign = 1;
};

CMatrix LuSolve(const CMatrix &a, const CMatrix &b);

// Reduced SVD A = U diag(sigma) V^H with k = min(rows, cols) columns in U and V
// and sigma nonincreasing. One-sided Jacobi.
struct Svd
{
  CMatrix u;
  std::vector<double> sigma;
  CMatrix v;
};

Svd ComputeSvd(const CMatrix &a, int max_sweeps = 80);

struct EigenDecomposition
{
  CVector values;
  // Column j is the unit-2-norm eigenvector for values[j].
  CMatrix vectors;
  bool converged = true;
};

// Hessenberg reduction, shifted complex QR with Wilkinson shifts, and
// eigenvectors by inverse iteration on the Hessenberg form. Throws
// NoConvergence when the iteration cap is hit.
EigenDecomposition EigDense(const CMatrix &a, bool want_vectors = true);

// All roots of sum_k coeffs[k] z^k (ascending), via the companion matrix,
// each polished by Newton steps on the polynomial.
CVector PolyRoots(const CVector &coeffs);

}  // namespace pepv

#endif  // PEPV_LINALG_HPP
