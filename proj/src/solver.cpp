// Copyright the pepv authors.
// SPDX-License-Identifier: Apache-2.0

#include "pepv/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "pepv/path_count.hpp"

namespace pepv
{

namespace
{

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since)
{
  return std::chrono::duration<double>(Clock::now() - since).count();
}

}  // namespace

void SolveConfig::Validate() const
{
  if (nodes < 4)
  {
    ThrowValidation("TooFewNodes", "need at least 4 quadrature nodes, got " + std::to_string(nodes));
  }
  if (moments < 1)
  {
    ThrowValidation("InvalidConfig", "moments (M) must be at least 1");
  }
  if (!(tol_rank > 0.0 && tol_rank < 1.0))
  {
    ThrowValidation("InvalidConfig", "rank tolerance must lie in (0, 1)");
  }
  if (!(residual_threshold > 0.0))
  {
    ThrowValidation("InvalidConfig", "residual threshold must be positive");
  }
  if (threads < 0)
  {
    ThrowValidation("InvalidConfig", "threads must be nonnegative");
  }
  track.Validate();
}

std::optional<int> PredictedDelta(const PolyMatrixT &t, ShiftStyle style)
{
  if (t.row_degrees.empty() ||
      std::any_of(t.row_degrees.begin(), t.row_degrees.end(),
                  [&](int d) { return d != t.row_degrees[0]; }))
  {
    return std::nullopt;
  }
  const int d = t.row_degrees[0];
  const CountReport r = style == ShiftStyle::Dense ? DenseCounts(t.n, d, 1) : PyramidCount(t.n, d);
  if (r.delta > 1 << 30)
  {
    return std::nullopt;
  }
  return static_cast<int>(r.delta);
}

void FinishFromMoments(SolveReport &report, const MomentSet &moms, const Contour &c,
                       const EigenModel &model, const SolveConfig &cfg)
{
  auto t0 = Clock::now();
  for (const auto &a : moms.matrices)
  {
    report.moment_norms.push_back(a.FrobeniusNorm());
  }
  Extraction ex;
  try
  {
    ex = Extract(MakeHankelPair(moms), c, cfg.tol_rank, cfg.keep_outside, &model);
  }
  catch (const Error &e)
  {
    if (e.Code() != "RankZero")
    {
      throw;
    }
    report.notes.push_back("RankZero: no eigenvalues detected inside the contour");
    report.timing.extraction = Seconds(t0);
    return;
  }
  report.sigma = ex.sigma;
  report.rank = ex.rank;
  for (auto &w : ex.warnings)
  {
    report.warnings.push_back(w);
  }
  report.timing.extraction = Seconds(t0);

  t0 = Clock::now();
  int moved_out = 0;
  for (auto &p : ex.pairs)
  {
    if (cfg.refine)
    {
      p = RefineEigenpair(model, p);
      p.inside = c.Contains(p.z);
      if (!p.inside && !p.HasFlag("outside"))
      {
        // Refinement carried the pair across the contour.
        if (!cfg.keep_outside)
        {
          moved_out++;
          continue;
        }
        p.flags.push_back("outside");
      }
    }
    if (cfg.residual_filter && !(p.residual <= cfg.residual_threshold))
    {
      if (!cfg.keep_outside)
      {
        report.filtered.push_back(std::move(p));
        continue;
      }
      p.flags.push_back("residual_above_threshold");
    }
    report.eigenpairs.push_back(std::move(p));
  }
  if (moved_out > 0)
  {
    report.warnings.push_back("RefinedOutside(" + std::to_string(moved_out) + ")");
  }
  if (!report.filtered.empty())
  {
    report.warnings.push_back("ResidualFiltered(" + std::to_string(report.filtered.size()) + ")");
  }
  if (report.eigenpairs.empty() && report.notes.empty())
  {
    report.notes.push_back("no eigenpair passed the residual filter");
  }
  report.timing.refinement = Seconds(t0);
}

SolveReport Solve(const PolyMatrixT &t, const Contour &c, const SolveConfig &cfg)
{
  cfg.Validate();
  SolveReport report;
  report.config = cfg;

  auto t0 = Clock::now();
  report.shifts = MakeShifts(t, cfg.shift_style, cfg.seed);
  std::vector<SquareSystem> systems;
  for (const auto &a : report.shifts)
  {
    systems.push_back(AssemblePepv(t, a));
  }
  const NodeGrid grid(c, cfg.nodes);
  report.predicted_delta = PredictedDelta(t, cfg.shift_style);
  report.timing.setup = Seconds(t0);

  t0 = Clock::now();
  ColumnOptions co;
  co.track = cfg.track;
  co.expected_delta = cfg.expected_delta;
  const std::vector<TraceColumn> columns =
      EvaluateColumns(systems, grid, cfg.seed, co, cfg.threads);
  report.timing.tracking = Seconds(t0);

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
    for (const auto &w : col.warnings)
    {
      report.warnings.push_back("column " + std::to_string(col.shift_index) + ": " + w);
    }
    if (report.predicted_delta && col.path_count != *report.predicted_delta)
    {
      report.warnings.push_back("column " + std::to_string(col.shift_index) +
                                ": retained " + std::to_string(col.path_count) +
                                " paths, closed-form count is " +
                                std::to_string(*report.predicted_delta));
    }
    report.columns.push_back(std::move(cr));
  }
  for (std::size_t j = 1; j < columns.size(); j++)
  {
    if (columns[j].path_count != columns[0].path_count)
    {
      report.warnings.push_back("PathCountVaries: columns retained different path counts");
      break;
    }
  }

  t0 = Clock::now();
  const MomentSet moms = ScaledMoments(AssembleU(columns), grid, cfg.moments);
  report.timing.moments = Seconds(t0);

  FinishFromMoments(report, moms, c, PepvModel(t), cfg);
  return report;
}

}  // namespace pepv
