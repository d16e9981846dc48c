// Copyright the pepv authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PEPV_TRACE_ENGINE_HPP
#define PEPV_TRACE_ENGINE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pepv/contour.hpp"
#include "pepv/linalg.hpp"
#include "pepv/poly_core.hpp"
#include "pepv/tracker.hpp"

namespace pepv
{

// n shift vectors with independent seeds derived from the master seed.
// Monomial style shares one exponent per shift vector across its rows and
// throws MixedDegrees when row degrees differ.
std::vector<ShiftVector> MakeShifts(const PolyMatrixT &t, ShiftStyle style, std::uint64_t seed);

struct ColumnOptions
{
  TrackOptions track;
  std::optional<int> expected_delta;
  // Only the first trace_vars coordinates are summed and toric-filtered;
  // -1 means all.
  int trace_vars = -1;
  // Endpoint predicate for the start solve.
  std::function<bool(const CVector &)> accept;
  // Points for which this returns true at any node raise flag_code(path).
  std::function<bool(const CVector &)> flag_point;
  std::string flag_code;
};

struct TraceColumn
{
  int shift_index = 0;
  // values[l] is the trace vector at node l, l = 0..N-1.
  std::vector<CVector> values;
  int path_count = 0;
  // Trace after the full loop (node N); equals values[0] when paths close.
  CVector closure;
  SolutionSet start_set;
  SolutionSet end_set;
  std::vector<std::string> warnings;
  int total_substeps = 0;
};

// Tracks the start solutions of sys around the grid and sums coordinates at
// every node. Unrecoverable path failures throw with node and path context.
TraceColumn EvaluateColumn(const SquareSystem &sys, int shift_index, const NodeGrid &grid,
                           std::uint64_t seed, const ColumnOptions &opts = {});

TraceColumn EvaluateColumn(const PolyMatrixT &t, const ShiftVector &a, int shift_index,
                           const NodeGrid &grid, std::uint64_t seed,
                           const ColumnOptions &opts = {});

// Runs one column per system on up to `threads` workers (0 = hardware
// concurrency). Results are ordered by column index.
std::vector<TraceColumn> EvaluateColumns(const std::vector<SquareSystem> &systems,
                                         const NodeGrid &grid, std::uint64_t seed,
                                         const ColumnOptions &opts, int threads);

// U(phi(t_l)) samples; column j holds the trace of shift j.
struct USamples
{
  std::vector<CMatrix> nodes;
};

USamples AssembleU(const std::vector<TraceColumn> &columns);

// A_k = (1/(i N)) sum_l U_l phi'(t_l) w_l^k, w = (z - center)/scale.
// center = 0, scale = 1 gives the unscaled moments.
struct MomentSet
{
  std::vector<CMatrix> matrices;
  int nodes = 0;
  int blocks = 0;
  Complex center = 0.0;
  double scale = 1.0;
  // max_l ||U_l||_F, the magnitude against which moment noise is judged.
  double sample_norm = 0.0;
};

MomentSet Moments(const USamples &u, const NodeGrid &grid, int blocks, Complex center = 0.0,
                  double scale = 1.0);

// Moments in the contour-centered variable (center, Scale()).
MomentSet ScaledMoments(const USamples &u, const NodeGrid &grid, int blocks);

}  // namespace pepv

#endif  // PEPV_TRACE_ENGINE_HPP
