// Copyright the pepv authors.
// SPDX-License-Identifier: Apache-2.0

#include "pepv/repv.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "pepv/path_count.hpp"

namespace pepv
{

namespace
{

Complex Dot(const CVector &u, const CVector &x)
{
  Complex s = 0.0;
  for (std::size_t i = 0; i < u.size(); i++)
  {
    s += u[i] * x[i];
  }
  return s;
}

Exponent Unit(int nvars, int i, int j = -1)
{
  Exponent e(nvars, 0);
  e[i] += 1;
  if (j >= 0)
  {
    e[j] += 1;
  }
  return e;
}

}  // namespace

void RepvProblem::Validate() const
{
  auto square = [&](const CMatrix &mat)
  { return static_cast<int>(mat.Rows()) == n && static_cast<int>(mat.Cols()) == n; };
  if (n < 1 || m < 0 || !square(a) || !square(b) || static_cast<int>(t.size()) != m ||
      static_cast<int>(r.size()) != m || static_cast<int>(s.size()) != m ||
      !std::all_of(t.begin(), t.end(), square))
  {
    ThrowValidation("DimensionMismatch", "REPv needs n x n A, B and m matrices T_k");
  }
  for (int k = 0; k < m; k++)
  {
    if (static_cast<int>(r[k].size()) != n || static_cast<int>(s[k].size()) != n)
    {
      ThrowValidation("DimensionMismatch", "r_k and s_k must have n coefficients");
    }
    if (NormInf(s[k]) == 0.0)
    {
      ThrowValidation("ZeroDenominator(" + std::to_string(k + 1) + ")",
                      "denominator s_" + std::to_string(k + 1) + " is identically zero");
    }
  }
}

SquareSystem Lift(const RepvProblem &p, const CVector &shift)
{
  p.Validate();
  if (static_cast<int>(shift.size()) != p.n)
  {
    ThrowValidation("DimensionMismatch", "shift must have n entries");
  }
  const int nv = p.n + p.m;
  std::vector<XPoly> rows(nv);
  for (int i = 0; i < p.n; i++)
  {
    for (int j = 0; j < p.n; j++)
    {
      rows[i].push_back(XTerm{Unit(nv, j), ZPoly(CVector{p.a(i, j), p.b(i, j)})});
      for (int k = 0; k < p.m; k++)
      {
        rows[i].push_back(XTerm{Unit(nv, p.n + k, j), ZPoly::Constant(p.t[k](i, j))});
      }
    }
    rows[i].push_back(XTerm{Exponent(nv, 0), ZPoly::Constant(-shift[i])});
  }
  for (int k = 0; k < p.m; k++)
  {
    XPoly &row = rows[p.n + k];
    for (int j = 0; j < p.n; j++)
    {
      row.push_back(XTerm{Unit(nv, p.n + k, j), ZPoly::Constant(p.s[k][j])});
      row.push_back(XTerm{Unit(nv, j), ZPoly::Constant(-p.r[k][j])});
    }
  }
  return SquareSystem(nv, std::move(rows));
}

RepvModel::RepvModel(RepvProblem p) : p(std::move(p))
{
  this->p.Validate();
}

CVector RepvModel::Apply(const CVector &x, Complex z) const
{
  CVector f(p.n, 0.0);
  for (int i = 0; i < p.n; i++)
  {
    for (int j = 0; j < p.n; j++)
    {
      f[i] += (p.a(i, j) + z * p.b(i, j)) * x[j];
    }
  }
  for (int k = 0; k < p.m; k++)
  {
    const Complex rho = Dot(p.r[k], x) / Dot(p.s[k], x);
    const CVector tx = p.t[k] * x;
    for (int i = 0; i < p.n; i++)
    {
      f[i] += rho * tx[i];
    }
  }
  return f;
}

void RepvModel::Linearize(const CVector &x, Complex z, CVector &f, CMatrix &jx, CVector &dz) const
{
  f = Apply(x, z);
  jx = p.a + z * p.b;
  dz = p.b * x;
  for (int k = 0; k < p.m; k++)
  {
    const Complex rx = Dot(p.r[k], x), sx = Dot(p.s[k], x);
    const Complex rho = rx / sx;
    const CVector tx = p.t[k] * x;
    // grad rho = (r sx - rx s) / sx^2
    for (int i = 0; i < p.n; i++)
    {
      for (int j = 0; j < p.n; j++)
      {
        const Complex grad = (p.r[k][j] * sx - rx * p.s[k][j]) / (sx * sx);
        jx(i, j) += rho * p.t[k](i, j) + tx[i] * grad;
      }
    }
  }
}

bool DenominatorDegenerate(const RepvProblem &p, const CVector &x)
{
  double nx = 0.0;
  for (int i = 0; i < p.n; i++)
  {
    nx += std::norm(x[i]);
  }
  nx = std::sqrt(nx);
  for (int k = 0; k < p.m; k++)
  {
    if (std::abs(Dot(p.s[k], x)) < 1e-8 * nx)
    {
      return true;
    }
  }
  return false;
}

SolveReport SolveRepv(const RepvProblem &p, const Contour &c, const SolveConfig &cfg)
{
  using Clock = std::chrono::steady_clock;
  auto seconds = [](Clock::time_point t0)
  { return std::chrono::duration<double>(Clock::now() - t0).count(); };

  cfg.Validate();
  p.Validate();
  SolveReport report;
  report.config = cfg;
  auto t0 = Clock::now();

  std::vector<SquareSystem> systems;
  for (int j = 0; j < p.n; j++)
  {
    ShiftVector a = ShiftVector::Zero(p.n);
    a.seed = CounterRng::Derive(cfg.seed, static_cast<std::uint64_t>(j));
    CounterRng rng(a.seed, 1);
    CVector shift(p.n);
    for (int i = 0; i < p.n; i++)
    {
      shift[i] = rng.UnitComplex();
      a.polys[i].push_back(XTerm{Exponent(p.n, 0), ZPoly::Constant(shift[i])});
    }
    systems.push_back(Lift(p, shift));
    report.shifts.push_back(std::move(a));
  }
  const CountReport counts = RepvCount(p.n, p.m);
  report.predicted_delta = static_cast<int>(counts.delta);
  const NodeGrid grid(c, cfg.nodes);
  report.timing.setup = seconds(t0);

  t0 = Clock::now();
  ColumnOptions co;
  co.track = cfg.track;
  co.expected_delta = cfg.expected_delta ? cfg.expected_delta : report.predicted_delta;
  co.trace_vars = p.n;
  // Start solutions on a denominator zero set solve the lift but not the
  // rational problem; they are dropped. Paths reaching it later are flagged.
  co.accept = [&p](const CVector &x) { return !DenominatorDegenerate(p, x); };
  co.flag_point = [&p](const CVector &x) { return DenominatorDegenerate(p, x); };
  co.flag_code = "DenominatorDegenerate";
  const std::vector<TraceColumn> columns = EvaluateColumns(systems, grid, cfg.seed, co, cfg.threads);
  report.timing.tracking = seconds(t0);

  for (const auto &col : columns)
  {
    ColumnReport cr;
    cr.shift_index = col.shift_index;
    cr.path_count = col.path_count;
    cr.start = col.start_set.start;
    cr.substeps = col.total_substeps;
    for (std::size_t i = 0; i < col.closure.size(); i++)
    {
      cr.closure_gap = std::max(cr.closure_gap, std::abs(col.closure[i] - col.values[0][i]));
    }
    cr.warnings = col.warnings;
    if (cr.start.rejected > 0)
    {
      cr.warnings.push_back("DenominatorDegenerate(" + std::to_string(cr.start.rejected) +
                            " start solutions rejected)");
    }
    for (const auto &w : cr.warnings)
    {
      report.warnings.push_back("column " + std::to_string(col.shift_index) + ": " + w);
    }
    report.columns.push_back(std::move(cr));
  }

  t0 = Clock::now();
  const MomentSet moms = ScaledMoments(AssembleU(columns), grid, cfg.moments);
  report.timing.moments = seconds(t0);
  FinishFromMoments(report, moms, c, RepvModel(p), cfg);
  return report;
}

}  // namespace pepv
