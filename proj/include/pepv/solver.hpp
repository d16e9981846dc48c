// Copyright the pepv authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PEPV_SOLVER_HPP
#define PEPV_SOLVER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pepv/contour.hpp"
#include "pepv/extraction.hpp"
#include "pepv/poly_core.hpp"
#include "pepv/trace_engine.hpp"
#include "pepv/tracker.hpp"

namespace pepv
{

inline constexpr std::uint64_t kDefaultSeed = 20240917;

struct SolveConfig
{
  int nodes = 200;
  int moments = 2;
  std::uint64_t seed = kDefaultSeed;
  ShiftStyle shift_style = ShiftStyle::Dense;
  double tol_rank = 1e-8;
  double residual_threshold = 1e-6;
  bool residual_filter = true;
  bool keep_outside = false;
  bool refine = true;
  std::optional<int> expected_delta;
  // 0 = hardware concurrency.
  int threads = 1;
  TrackOptions track;

  // Throws InvalidConfig.
  void Validate() const;
};

struct ColumnReport
{
  int shift_index = 0;
  int path_count = 0;
  StartSummary start;
  int substeps = 0;
  // max |trace(node 0) - trace(node N)|.
  double closure_gap = 0.0;
  std::vector<std::string> warnings;
};

struct PhaseTiming
{
  double setup = 0.0;
  double tracking = 0.0;
  double moments = 0.0;
  double extraction = 0.0;
  double refinement = 0.0;
};

struct SolveReport
{
  std::vector<Eigenpair> eigenpairs;
  // Pairs removed by the residual filter.
  std::vector<Eigenpair> filtered;
  std::vector<ColumnReport> columns;
  std::vector<double> moment_norms;
  std::vector<double> sigma;
  int rank = 0;
  std::optional<int> predicted_delta;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;
  std::vector<ShiftVector> shifts;
  PhaseTiming timing;
  SolveConfig config;
};

// Shifts, n trace columns, moments, Hankel extraction, optional refinement,
// residual filter and classification.
SolveReport Solve(const PolyMatrixT &t, const Contour &c, const SolveConfig &cfg);

// Shared tail of every pipeline: extraction from moments through filtering.
// A RankZero outcome becomes a note with an empty result.
void FinishFromMoments(SolveReport &report, const MomentSet &moms, const Contour &c,
                       const EigenModel &model, const SolveConfig &cfg);

// delta predicted by the closed-form counts when all row degrees agree.
std::optional<int> PredictedDelta(const PolyMatrixT &t, ShiftStyle style);

}  // namespace pepv

#endif  // PEPV_SOLVER_HPP
