// Copyright the pepv authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PEPV_EXTRACTION_HPP
#define PEPV_EXTRACTION_HPP

#include <functional>
#include <string>
#include <vector>

#include "pepv/contour.hpp"
#include "pepv/linalg.hpp"
#include "pepv/poly_core.hpp"
#include "pepv/trace_engine.hpp"

namespace pepv
{

// Blocks (i, j) of b0 and b1 are A_{i+j} and A_{i+j+1}. Moments taken in
// w = (z - center)/scale keep that map so eigenvalues can be mapped back.
struct HankelPair
{
  CMatrix b0, b1;
  int block_rows = 0;
  Complex center = 0.0;
  double scale = 1.0;
  double sample_norm = 0.0;
};

HankelPair MakeHankelPair(const MomentSet &moms);

struct Eigenpair
{
  Complex z;
  // Infinity-norm 1, first max-modulus entry real positive.
  CVector x;
  double residual = 0.0;
  bool inside = false;
  double sigma_gap = 0.0;
  // Values straight out of the Hankel pencil, before refinement.
  Complex extracted_z;
  double extracted_residual = 0.0;
  std::vector<std::string> flags;

  bool HasFlag(const std::string &f) const;
};

// T(x, z) x with its x-Jacobian and z-derivative. Residuals and refinement
// only see the problem through this interface.
class EigenModel
{
public:
  virtual ~EigenModel() = default;
  virtual int Dimension() const = 0;
  virtual CVector Apply(const CVector &x, Complex z) const = 0;
  virtual void Linearize(const CVector &x, Complex z, CVector &f, CMatrix &jx,
                         CVector &dz) const = 0;
};

class PepvModel : public EigenModel
{
public:
  explicit PepvModel(const PolyMatrixT &t);
  int Dimension() const override { return system.NumVars(); }
  CVector Apply(const CVector &x, Complex z) const override;
  void Linearize(const CVector &x, Complex z, CVector &f, CMatrix &jx,
                 CVector &dz) const override;

private:
  PolyMatrixT t;
  SquareSystem system;
};

struct Extraction
{
  std::vector<Eigenpair> pairs;
  int rank = 0;
  std::vector<double> sigma;
  std::vector<std::string> warnings;
};

// Rank cut at the largest l with sigma_l / sigma_1 > tol_rank. Throws
// RankZero when sigma_1 <= max(1e-14, 1e-11 * sample_norm). Residuals are
// filled in when a model is given, else left at zero. Pairs outside c are
// dropped unless keep_outside.
Extraction Extract(const HankelPair &hp, const Contour &c, double tol_rank, bool keep_outside,
                   const EigenModel *model = nullptr);

// ||T(x, z) x||_2 / ||x||_2. Throws ZeroVector.
double Residual(const EigenModel &model, const CVector &x, Complex z);
double Residual(const PolyMatrixT &t, const CVector &x, Complex z);

// Newton on {T(x, z) x = 0, x_k = 1}, k the max-modulus entry. Best effort:
// on failure returns the input with the refine_failed flag.
Eigenpair RefineEigenpair(const EigenModel &model, const Eigenpair &pair, double tol = 1e-13,
                          int maxit = 30);
Eigenpair RefineEigenpair(const PolyMatrixT &t, const Eigenpair &pair, double tol = 1e-13);

// Scales to infinity-norm 1 with the first max-modulus entry real positive.
CVector NormalizeEigenvector(const CVector &x);

}  // namespace pepv

#endif  // PEPV_EXTRACTION_HPP
