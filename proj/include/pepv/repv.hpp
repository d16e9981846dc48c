// Copyright the pepv authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PEPV_REPV_HPP
#define PEPV_REPV_HPP

#include <vector>

#include "pepv/extraction.hpp"
#include "pepv/linalg.hpp"
#include "pepv/poly_core.hpp"
#include "pepv/solver.hpp"

namespace pepv
{

// T(x, z) = A + z B + sum_k (r_k . x)/(s_k . x) T_k, bilinear dots.
struct RepvProblem
{
  int n = 0;
  int m = 0;
  CMatrix a, b;
  std::vector<CMatrix> t;
  std::vector<CVector> r, s;

  // Throws DimensionMismatch or ZeroDenominator.
  void Validate() const;
};

// Variables (x_1..x_n, lambda_1..lambda_m). Rows 1..n are
// (A + z B + sum_k lambda_k T_k) x - shift; rows n+k are
// (s_k . x) lambda_k - r_k . x.
SquareSystem Lift(const RepvProblem &p, const CVector &shift);

class RepvModel : public EigenModel
{
public:
  explicit RepvModel(RepvProblem p);
  int Dimension() const override { return p.n; }
  CVector Apply(const CVector &x, Complex z) const override;
  void Linearize(const CVector &x, Complex z, CVector &f, CMatrix &jx,
                 CVector &dz) const override;

private:
  RepvProblem p;
};

// A point is denominator-degenerate when |s_k . x| < 1e-8 ||x|| for some k.
bool DenominatorDegenerate(const RepvProblem &p, const CVector &x);

// Trace pipeline on the lifted system with n random constant shifts; only
// x coordinates are summed. Residuals use the rational T.
SolveReport SolveRepv(const RepvProblem &p, const Contour &c, const SolveConfig &cfg);

}  // namespace pepv

#endif  // PEPV_REPV_HPP
