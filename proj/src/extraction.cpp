// Copyright the pepv authors.
// SPDX-License-Identifier: Apache-2.0

#include "pepv/extraction.hpp"

#include <algorithm>
#include <cmath>

namespace pepv
{

namespace
{

constexpr double kNoiseFloor = 1e-11;

}  // namespace

HankelPair MakeHankelPair(const MomentSet &moms)
{
  const int m = moms.blocks;
  if (static_cast<int>(moms.matrices.size()) != 2 * m || m < 1)
  {
    ThrowValidation("InvalidMoments", "moment set must hold 2M matrices");
  }
  const std::size_t r = moms.matrices[0].Rows(), c = moms.matrices[0].Cols();
  HankelPair hp;
  hp.block_rows = static_cast<int>(r);
  hp.center = moms.center;
  hp.scale = moms.scale;
  hp.sample_norm = moms.sample_norm;
  hp.b0 = CMatrix(m * r, m * c);
  hp.b1 = CMatrix(m * r, m * c);
  for (int i = 0; i < m; i++)
  {
    for (int j = 0; j < m; j++)
    {
      hp.b0.SetBlock(i * r, j * c, moms.matrices[i + j]);
      hp.b1.SetBlock(i * r, j * c, moms.matrices[i + j + 1]);
    }
  }
  return hp;
}

bool Eigenpair::HasFlag(const std::string &f) const
{
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

CVector NormalizeEigenvector(const CVector &x)
{
  std::size_t k = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < x.size(); i++)
  {
    // Ties resolve to the first index; the relative slack keeps that stable
    // under rounding.
    if (std::abs(x[i]) > best * (1.0 + 1e-12))
    {
      best = std::abs(x[i]);
      k = i;
    }
  }
  if (!(best > 0.0))
  {
    ThrowNumerical("ZeroVector", "eigenvector is zero");
  }
  const Complex s = std::conj(x[k]) / (best * best);
  CVector y(x.size());
  for (std::size_t i = 0; i < x.size(); i++)
  {
    y[i] = x[i] * s;
  }
  y[k] = 1.0;
  return y;
}

// ---------------------------------------------------------------------------

PepvModel::PepvModel(const PolyMatrixT &t) : t(t), system(AssemblePepv(t, ShiftVector::Zero(t.n)))
{
}

CVector PepvModel::Apply(const CVector &x, Complex z) const
{
  return t.Evaluate(x, z) * x;
}

void PepvModel::Linearize(const CVector &x, Complex z, CVector &f, CMatrix &jx, CVector &dz) const
{
  system.EvaluateAll(x, z, f, jx, &dz);
}

double Residual(const EigenModel &model, const CVector &x, Complex z)
{
  const double nx = Norm2(x);
  if (!(nx > 0.0))
  {
    ThrowValidation("ZeroVector", "residual of a zero vector is undefined");
  }
  return Norm2(model.Apply(x, z)) / nx;
}

double Residual(const PolyMatrixT &t, const CVector &x, Complex z)
{
  const double nx = Norm2(x);
  if (!(nx > 0.0))
  {
    ThrowValidation("ZeroVector", "residual of a zero vector is undefined");
  }
  return Norm2(t.Evaluate(x, z) * x) / nx;
}

Extraction Extract(const HankelPair &hp, const Contour &c, double tol_rank, bool keep_outside,
                   const EigenModel *model)
{
  const Svd sv = ComputeSvd(hp.b0);
  Extraction out;
  out.sigma = sv.sigma;
  // Traces carry tracking noise near 1e-14 relative to their size; moments
  // below that level hold no eigenvalue information.
  const double floor = std::max(1e-14, kNoiseFloor * hp.sample_norm);
  if (sv.sigma.empty() || !(sv.sigma[0] > floor))
  {
    ThrowNumerical("RankZero", "no eigenvalues detected inside the contour");
  }
  int rank = 0;
  while (rank < static_cast<int>(sv.sigma.size()) && sv.sigma[rank] / sv.sigma[0] > tol_rank)
  {
    rank++;
  }
  out.rank = rank;
  const std::size_t dim = hp.b0.Rows();
  if (rank == static_cast<int>(std::min(dim, hp.b0.Cols())))
  {
    out.warnings.push_back("RankSaturated(" + std::to_string(rank) + ")");
  }
  const double gap = rank < static_cast<int>(sv.sigma.size()) && sv.sigma[rank] > 0.0
                         ? sv.sigma[rank - 1] / sv.sigma[rank]
                         : std::numeric_limits<double>::infinity();

  const CMatrix v0 = sv.u.Block(0, 0, dim, rank);
  const CMatrix w0 = sv.v.Block(0, 0, hp.b0.Cols(), rank);
  CMatrix reduced = v0.Adjoint() * hp.b1 * w0;
  for (int k = 0; k < rank; k++)
  {
    const double inv = 1.0 / sv.sigma[k];
    for (int i = 0; i < rank; i++)
    {
      reduced(i, k) *= inv;
    }
  }
  const EigenDecomposition eig = EigDense(reduced);
  if (!eig.converged)
  {
    out.warnings.push_back("EigenNoConvergence");
  }
  const CMatrix vs = v0 * eig.vectors;
  const int n = hp.block_rows;

  for (int k = 0; k < rank; k++)
  {
    Eigenpair p;
    p.z = hp.center + hp.scale * eig.values[k];
    p.extracted_z = p.z;
    CVector x(n);
    for (int i = 0; i < n; i++)
    {
      x[i] = vs(i, k);
    }
    if (!(Norm2(x) > 0.0))
    {
      continue;
    }
    p.x = NormalizeEigenvector(x);
    p.inside = c.Contains(p.z);
    p.sigma_gap = gap;
    if (model)
    {
      p.residual = Residual(*model, p.x, p.z);
      p.extracted_residual = p.residual;
    }
    if (!p.inside)
    {
      if (!keep_outside)
      {
        continue;
      }
      p.flags.push_back("outside");
    }
    out.pairs.push_back(std::move(p));
  }
  std::sort(out.pairs.begin(), out.pairs.end(),
            [](const Eigenpair &a, const Eigenpair &b)
            {
              return a.z.real() != b.z.real() ? a.z.real() < b.z.real() : a.z.imag() < b.z.imag();
            });
  return out;
}

Eigenpair RefineEigenpair(const EigenModel &model, const Eigenpair &pair, double tol, int maxit)
{
  const int n = model.Dimension();
  Eigenpair best = pair;
  const double start_res = Residual(model, pair.x, pair.z);
  best.residual = start_res;
  if (start_res <= tol)
  {
    return best;
  }
  std::size_t k = 0;
  for (int i = 1; i < n; i++)
  {
    if (std::abs(pair.x[i]) > std::abs(pair.x[k]))
    {
      k = i;
    }
  }
  CVector x = pair.x;
  for (auto &v : x)
  {
    v /= pair.x[k];
  }
  Complex z = pair.z;
  CVector f, dz;
  CMatrix jx;
  bool ok = false;
  double res = start_res;
  for (int it = 0; it < maxit; it++)
  {
    model.Linearize(x, z, f, jx, dz);
    CMatrix j(n + 1, n + 1);
    CVector rhs(n + 1);
    for (int r = 0; r < n; r++)
    {
      for (int col = 0; col < n; col++)
      {
        j(r, col) = jx(r, col);
      }
      j(r, n) = dz[r];
      rhs[r] = f[r];
    }
    j(n, k) = 1.0;
    rhs[n] = x[k] - 1.0;
    CVector step;
    try
    {
      step = LuDecomposition(j).Solve(rhs);
    }
    catch (const Error &)
    {
      break;
    }
    for (int r = 0; r < n; r++)
    {
      x[r] -= step[r];
    }
    z -= step[n];
    if (!std::isfinite(std::abs(z)) || !std::isfinite(NormInf(x)))
    {
      break;
    }
    res = Residual(model, x, z);
    if (res <= tol)
    {
      ok = true;
      break;
    }
    if (Norm2(step) <= 1e-15 * (1.0 + NormInf(x) + std::abs(z)))
    {
      ok = res < start_res;
      break;
    }
  }
  if (!ok && !(res < 1e-3 * start_res))
  {
    best.flags.push_back("refine_failed");
    return best;
  }
  best.x = NormalizeEigenvector(x);
  best.z = z;
  best.residual = Residual(model, best.x, best.z);
  if (std::abs(z - pair.z) > 10.0 * std::sqrt(start_res))
  {
    best.flags.push_back("unstable");
  }
  return best;
}

Eigenpair RefineEigenpair(const PolyMatrixT &t, const Eigenpair &pair, double tol)
{
  return RefineEigenpair(PepvModel(t), pair, tol);
}

}  // namespace pepv
