// Copyright the pepv authors.
// SPDX-License-Identifier: Apache-2.0

#include "pepv/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pepv
{

void TrackOptions::Validate() const
{
  if (!(newton_tol > 0.0) || newton_maxit < 2 || max_substeps < 1 || !(divergence_norm > 0.0) ||
      !(min_step > 0.0) || !(jump_tol > 0.0))
  {
    ThrowValidation("InvalidTrackOptions", "tolerances must be positive and newton_maxit >= 2");
  }
}

const char *ToString(PathStatus s)
{
  switch (s)
  {
    case PathStatus::Tracked:
      return "tracked";
    case PathStatus::Diverged:
      return "diverged";
    case PathStatus::StepUnderflow:
      return "step_underflow";
    case PathStatus::Jumped:
      return "jumped";
  }
  return "unknown";
}

bool SolutionSet::AllTracked() const
{
  return std::all_of(diagnostics.begin(), diagnostics.end(),
                     [](const PathDiagnostics &d) { return d.status == PathStatus::Tracked; });
}

namespace
{

constexpr double kEps = std::numeric_limits<double>::epsilon();
// First Newton update larger than this (relative to 1 + ||x||) rejects the step.
constexpr double kMaxFirstCorrection = 0.05;
// Successive Newton updates must shrink at least by this factor.
constexpr double kContraction = 0.3;

// H(x, p) for a real path parameter p.
class Homotopy
{
public:
  virtual ~Homotopy() = default;
  virtual void Eval(const CVector &x, double p, CVector &f, CMatrix &jac, CVector *dfdp) const = 0;
};

// F(x, phi(t)) with dF/dt = dF/dz phi'(t).
class ContourHomotopy : public Homotopy
{
public:
  ContourHomotopy(const SquareSystem &sys, const Contour &contour) : sys(sys), contour(contour) {}

  void Eval(const CVector &x, double t, CVector &f, CMatrix &jac, CVector *dfdp) const override
  {
    sys.EvaluateAll(x, contour.Point(t), f, jac, dfdp);
    if (dfdp)
    {
      const Complex dphi = contour.Derivative(t);
      for (auto &c : *dfdp)
      {
        c *= dphi;
      }
    }
  }

private:
  const SquareSystem &sys;
  const Contour &contour;
};

// gamma (1 - s) G(x) + s F(x, z0), G_i = x_i^{D_i} - 1.
class StartHomotopy : public Homotopy
{
public:
  StartHomotopy(const SquareSystem &sys, Complex z0, Complex gamma, std::vector<int> degrees)
    : sys(sys), z0(z0), gamma(gamma), degrees(std::move(degrees))
  {
  }

  void Eval(const CVector &x, double s, CVector &f, CMatrix &jac, CVector *dfdp) const override
  {
    sys.EvaluateAll(x, z0, f, jac, nullptr);
    const std::size_t n = f.size();
    if (dfdp)
    {
      dfdp->resize(n);
    }
    for (std::size_t i = 0; i < n; i++)
    {
      const int d = degrees[i];
      const Complex xd1 = d >= 1 ? std::pow(x[i], d - 1) : Complex(0.0);
      const Complex g = xd1 * x[i] - 1.0;
      const Complex dg = static_cast<double>(d) * xd1;
      if (dfdp)
      {
        (*dfdp)[i] = f[i] - gamma * g;
      }
      f[i] = gamma * (1.0 - s) * g + s * f[i];
      for (std::size_t k = 0; k < n; k++)
      {
        jac(i, k) *= s;
      }
      jac(i, i) += gamma * (1.0 - s) * dg;
    }
  }

private:
  const SquareSystem &sys;
  Complex z0;
  Complex gamma;
  std::vector<int> degrees;
};

struct CorrectorResult
{
  bool converged = false;
  double residual = 0.0;
};

// Newton on H(., p) from x (updated in place). With guard set, an oversized
// first update or a non-contracting sequence counts as failure so the step
// controller can shrink the step rather than let the iterate jump paths.
CorrectorResult Correct(const Homotopy &h, CVector &x, double p, double tol, int maxit, bool guard)
{
  CVector f;
  CMatrix jac;
  double prev = std::numeric_limits<double>::infinity();
  CorrectorResult out;
  for (int it = 0; it <= maxit; it++)
  {
    h.Eval(x, p, f, jac, nullptr);
    const double scale = 1.0 + NormInf(x);
    out.residual = Norm2(f);
    if (!std::isfinite(out.residual))
    {
      return out;
    }
    if (out.residual <= tol * scale)
    {
      out.converged = true;
      return out;
    }
    if (it == maxit)
    {
      break;
    }
    CVector dx;
    try
    {
      dx = LuDecomposition(jac).Solve(f);
    }
    catch (const Error &)
    {
      return out;
    }
    const double nd = Norm2(dx);
    // Update below tolerance: accept even if rounding in large terms keeps
    // the residual above tol * scale.
    if (nd <= tol * scale)
    {
      for (std::size_t k = 0; k < x.size(); k++)
      {
        x[k] -= dx[k];
      }
      out.converged = true;
      return out;
    }
    if (guard && ((it == 0 && nd > kMaxFirstCorrection * scale) || (it > 0 && nd > kContraction * prev)))
    {
      return out;
    }
    for (std::size_t k = 0; k < x.size(); k++)
    {
      x[k] -= dx[k];
    }
    // Update at rounding level: residual cannot improve further.
    if (it > 0 && nd <= 8.0 * kEps * scale)
    {
      h.Eval(x, p, f, jac, nullptr);
      out.residual = Norm2(f);
      out.converged = std::isfinite(out.residual);
      return out;
    }
    prev = nd;
  }
  return out;
}

struct SegmentResult
{
  CVector x;
  PathDiagnostics diag;
};

// Tracks x from parameter p0 to p1 with Euler predictor / Newton corrector.
SegmentResult TrackSegment(const Homotopy &h, CVector x, double p0, double p1, double step,
                           double max_step, const TrackOptions &opts)
{
  SegmentResult r;
  const double span = p1 - p0;
  double p = p0;
  step = std::min({step > 0.0 ? step : span, span, max_step});
  int successes = 0;
  CVector f, dfdp;
  CMatrix jac;
  while (p1 - p > 1e-14 * std::abs(span))
  {
    if (r.diag.substeps >= opts.max_substeps)
    {
      r.diag.status = PathStatus::StepUnderflow;
      break;
    }
    const double hstep = std::min(step, p1 - p);
    const bool last = p + hstep >= p1 - 1e-14 * std::abs(span);
    const double target = last ? p1 : p + hstep;

    bool accepted = false;
    CVector xp = x;
    h.Eval(x, p, f, jac, &dfdp);
    try
    {
      const CVector v = LuDecomposition(jac).Solve(dfdp);
      for (std::size_t k = 0; k < x.size(); k++)
      {
        xp[k] = x[k] - v[k] * (target - p);
      }
      const CorrectorResult c = Correct(h, xp, target, opts.newton_tol, opts.newton_maxit, true);
      accepted = c.converged;
      r.diag.residual = c.residual;
    }
    catch (const Error &)
    {
      accepted = false;
    }

    if (accepted)
    {
      x = std::move(xp);
      r.diag.substeps++;
      r.diag.step = hstep;
      p = target;
      if (NormInf(x) > opts.divergence_norm)
      {
        r.diag.status = PathStatus::Diverged;
        break;
      }
      if (++successes >= 5)
      {
        step = std::min(2.0 * step, max_step);
        successes = 0;
      }
    }
    else
    {
      step *= 0.5;
      successes = 0;
      r.diag.substeps++;
      if (step < opts.min_step)
      {
        r.diag.status = PathStatus::StepUnderflow;
        break;
      }
    }
  }
  r.x = std::move(x);
  return r;
}

// One unguarded Newton step at a node endpoint, kept only if it does not
// raise the residual. The corrector stops at newton_tol; this step carries
// node values to rounding level so traces are not limited by that tolerance.
void Polish(const Homotopy &h, CVector &x, double p, double &residual)
{
  CVector f;
  CMatrix jac;
  h.Eval(x, p, f, jac, nullptr);
  const double before = Norm2(f);
  CVector y = x;
  try
  {
    const CVector dx = LuDecomposition(jac).Solve(f);
    for (std::size_t k = 0; k < y.size(); k++)
    {
      y[k] -= dx[k];
    }
  }
  catch (const Error &)
  {
    residual = before;
    return;
  }
  h.Eval(y, p, f, jac, nullptr);
  const double after = Norm2(f);
  if (std::isfinite(after) && after <= before)
  {
    x = std::move(y);
    residual = after;
  }
  else
  {
    residual = before;
  }
}

double SetDistance(const CVector &a, const CVector &b)
{
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); k++)
  {
    d = std::max(d, std::abs(a[k] - b[k]));
  }
  return d;
}

void CheckCollisions(SolutionSet &out, const TrackOptions &opts,
                     std::vector<std::pair<std::size_t, std::size_t>> &pairs)
{
  pairs.clear();
  for (std::size_t a = 0; a < out.Size(); a++)
  {
    if (out.diagnostics[a].status != PathStatus::Tracked)
    {
      continue;
    }
    for (std::size_t b = a + 1; b < out.Size(); b++)
    {
      if (out.diagnostics[b].status != PathStatus::Tracked)
      {
        continue;
      }
      const double scale = 1.0 + std::max(NormInf(out.points[a]), NormInf(out.points[b]));
      if (SetDistance(out.points[a], out.points[b]) <= opts.jump_tol * scale)
      {
        pairs.emplace_back(a, b);
      }
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------

namespace
{

// Singularity test on the Jacobian scaled to relative perturbations of x
// and unit rows, so large but regular endpoints are not rejected.
bool IllConditioned(CMatrix jac, const CVector &x)
{
  for (std::size_t j = 0; j < jac.Cols(); j++)
  {
    const double s = std::max(1.0, std::abs(x[j]));
    for (std::size_t i = 0; i < jac.Rows(); i++)
    {
      jac(i, j) *= s;
    }
  }
  for (std::size_t i = 0; i < jac.Rows(); i++)
  {
    double norm = 0.0;
    for (std::size_t j = 0; j < jac.Cols(); j++)
    {
      norm += std::norm(jac(i, j));
    }
    norm = std::sqrt(norm);
    if (!(norm > 0.0))
    {
      return true;
    }
    for (std::size_t j = 0; j < jac.Cols(); j++)
    {
      jac(i, j) /= norm;
    }
  }
  const Svd sv = ComputeSvd(jac);
  return sv.sigma.back() <= 1e-10 * sv.sigma.front();
}

}  // namespace

SolutionSet SolveStart(const SquareSystem &sys, const NodeGrid &grid, int node_index,
                       std::uint64_t seed, const StartOptions &opts)
{
  opts.track.Validate();
  const int n = sys.NumVars();
  if (sys.NumRows() != n)
  {
    ThrowValidation("NotSquare", "system must have as many rows as variables");
  }
  if (node_index < 0 || node_index > grid.Count())
  {
    ThrowValidation("InvalidNode", "node index out of range");
  }
  const std::vector<int> &degrees = sys.RowDegrees();
  std::int64_t bezout = 1;
  for (int d : degrees)
  {
    if (d < 1)
    {
      ThrowNumerical("StartSystemDegenerate", "a row of the system has total degree 0");
    }
    bezout *= d;
    if (bezout > (1LL << 26))
    {
      ThrowValidation("BezoutTooLarge", "total-degree homotopy would track more than 2^26 paths");
    }
  }

  const double t0 = grid.Parameter(node_index);
  const Complex z0 = grid.Path().Point(t0);
  CounterRng rng(seed, 0x57a27ULL);
  const Complex gamma = rng.UnitComplex();
  StartHomotopy homotopy(sys, z0, gamma, degrees);
  const int toric = opts.toric_vars < 0 ? n : std::min(opts.toric_vars, n);

  SolutionSet out;
  out.node_index = node_index;
  out.start.bezout_paths = static_cast<int>(bezout);

  std::vector<int> digit(n, 0);
  int start_failures = 0;
  CVector f, df;
  CMatrix jac;
  for (std::int64_t path = 0; path < bezout; path++)
  {
    // Mixed-radix enumeration of the roots of unity.
    CVector x(n);
    for (int i = 0; i < n; i++)
    {
      x[i] = std::polar(1.0, 2.0 * kPi * digit[i] / degrees[i]);
    }
    for (int i = n - 1; i >= 0; i--)
    {
      if (++digit[i] < degrees[i])
      {
        break;
      }
      digit[i] = 0;
    }

    if (!Correct(homotopy, x, 0.0, 1e-14, 3, false).converged)
    {
      start_failures++;
      continue;
    }

    SegmentResult seg = TrackSegment(homotopy, x, 0.0, 1.0, 0.02, 0.1, opts.track);
    if (seg.diag.status == PathStatus::Diverged)
    {
      out.start.diverged++;
      continue;
    }
    if (seg.diag.status != PathStatus::Tracked)
    {
      out.start.failed++;
      continue;
    }

    CVector end = seg.x;
    try
    {
      end = NewtonRefine(sys, end, z0, opts.track.newton_tol, 4 * opts.track.newton_maxit);
    }
    catch (const Error &)
    {
      out.start.singular++;
      continue;
    }
    const double xnorm = NormInf(end);
    if (!std::isfinite(xnorm) || xnorm > opts.track.divergence_norm)
    {
      out.start.diverged++;
      continue;
    }
    sys.EvaluateAll(end, z0, f, jac, nullptr);
    if (IllConditioned(jac, end))
    {
      out.start.singular++;
      continue;
    }
    const double floor = 1e-8 * std::max(1.0, xnorm);
    bool is_toric = true;
    for (int i = 0; i < toric; i++)
    {
      is_toric = is_toric && std::abs(end[i]) > floor;
    }
    if (!is_toric)
    {
      out.start.non_toric++;
      continue;
    }
    if (opts.accept && !opts.accept(end))
    {
      out.start.rejected++;
      continue;
    }
    bool duplicate = false;
    for (const auto &p : out.points)
    {
      duplicate = duplicate ||
                  SetDistance(p, end) <= 1e-8 * (1.0 + std::max(xnorm, NormInf(p)));
    }
    if (duplicate)
    {
      out.start.duplicates++;
      continue;
    }

    PathDiagnostics d;
    d.substeps = seg.diag.substeps;
    d.residual = Norm2(f);
    d.status = PathStatus::Tracked;
    d.step = 0.0;
    out.path_ids.push_back(static_cast<int>(out.points.size()));
    out.points.push_back(std::move(end));
    out.diagnostics.push_back(d);
  }

  if (start_failures > 0.01 * static_cast<double>(bezout))
  {
    ThrowNumerical("StartSystemDegenerate",
                   std::to_string(start_failures) + " start roots failed to converge");
  }
  out.start.retained = static_cast<int>(out.points.size());
  if (out.start.duplicates > 0)
  {
    out.warnings.push_back("DuplicateEndpoints(" + std::to_string(out.start.duplicates) + ")");
  }
  if (opts.expected_count && *opts.expected_count != out.start.retained)
  {
    out.warnings.push_back("CountMismatch(expected " + std::to_string(*opts.expected_count) +
                           ", retained " + std::to_string(out.start.retained) + ")");
  }
  return out;
}

SolutionSet ContinueNode(const SquareSystem &sys, const SolutionSet &sols, const NodeGrid &grid,
                         int to_node, const TrackOptions &opts)
{
  opts.Validate();
  if (to_node != sols.node_index + 1 || to_node > grid.Count())
  {
    ThrowValidation("InvalidNode", "continuation must advance exactly one node, at most to N");
  }
  const double t0 = grid.Parameter(sols.node_index);
  const double t1 = grid.Parameter(to_node);
  const double interval = t1 - t0;
  ContourHomotopy homotopy(sys, grid.Path());

  SolutionSet out;
  out.node_index = to_node;
  out.path_ids = sols.path_ids;
  out.warnings = sols.warnings;
  out.start = sols.start;
  out.points.resize(sols.Size());
  out.diagnostics.resize(sols.Size());

  auto track = [&](std::size_t m, double step, double max_step)
  {
    const PathDiagnostics &prev = sols.diagnostics[m];
    if (prev.status != PathStatus::Tracked)
    {
      out.points[m] = sols.points[m];
      out.diagnostics[m] = prev;
      return;
    }
    SegmentResult seg = TrackSegment(homotopy, sols.points[m], t0, t1, step, max_step, opts);
    if (seg.diag.status == PathStatus::Tracked)
    {
      Polish(homotopy, seg.x, t1, seg.diag.residual);
    }
    out.points[m] = std::move(seg.x);
    out.diagnostics[m] = seg.diag;
    if (seg.diag.status == PathStatus::Diverged)
    {
      out.warnings.push_back("PathDiverged(" + std::to_string(sols.path_ids[m]) + ") at node " +
                             std::to_string(to_node));
    }
    else if (seg.diag.status == PathStatus::StepUnderflow)
    {
      out.warnings.push_back("StepUnderflow(" + std::to_string(sols.path_ids[m]) + ") at node " +
                             std::to_string(to_node));
    }
  };

  for (std::size_t m = 0; m < sols.Size(); m++)
  {
    const double carried = sols.diagnostics[m].step;
    track(m, carried > 0.0 ? std::min(2.0 * carried, interval) : interval, interval);
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  CheckCollisions(out, opts, pairs);
  if (!pairs.empty())
  {
    // Re-track the offending interval once with at least 16 substeps.
    const double fine = interval / 16.0;
    for (const auto &[a, b] : pairs)
    {
      track(a, fine, fine);
      track(b, fine, fine);
    }
    CheckCollisions(out, opts, pairs);
    for (const auto &[a, b] : pairs)
    {
      out.diagnostics[a].status = PathStatus::Jumped;
      out.diagnostics[b].status = PathStatus::Jumped;
      out.warnings.push_back("PathsCollided(" + std::to_string(sols.path_ids[a]) + ", " +
                             std::to_string(sols.path_ids[b]) + ") at node " +
                             std::to_string(to_node));
    }
  }
  return out;
}

CVector NewtonRefine(const SquareSystem &sys, CVector x, Complex z, double tol, int maxit)
{
  CVector f;
  CMatrix jac;
  double residual = 0.0;
  for (int it = 0; it <= maxit; it++)
  {
    sys.EvaluateAll(x, z, f, jac, nullptr);
    residual = Norm2(f);
    const double scale = 1.0 + NormInf(x);
    if (!std::isfinite(residual))
    {
      break;
    }
    if (residual <= tol * scale)
    {
      return x;
    }
    if (it == maxit)
    {
      break;
    }
    CVector dx;
    try
    {
      dx = LuDecomposition(jac).Solve(f);
    }
    catch (const Error &)
    {
      ThrowNumerical("SingularJacobian", "Jacobian singular during Newton refinement");
    }
    for (std::size_t k = 0; k < x.size(); k++)
    {
      x[k] -= dx[k];
    }
    // Far from the origin rounding in F grows like |x|^degree, so a step
    // below tol is the attainable test there.
    if (Norm2(dx) <= tol * scale)
    {
      return x;
    }
    if (Norm2(dx) <= 8.0 * kEps * scale)
    {
      sys.EvaluateAll(x, z, f, jac, nullptr);
      residual = Norm2(f);
      if (residual <= std::max(tol, 1e3 * kEps) * scale * 10.0)
      {
        return x;
      }
      break;
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "final residual %.3e", residual);
  ThrowNumerical("NoConvergence", buf);
}

}  // namespace pepv
