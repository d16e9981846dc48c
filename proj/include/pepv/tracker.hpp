// Copyright the pepv authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PEPV_TRACKER_HPP
#define PEPV_TRACKER_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pepv/common.hpp"
#include "pepv/contour.hpp"
#include "pepv/poly_core.hpp"

namespace pepv
{

struct TrackOptions
{
  double newton_tol = 1e-12;
  int newton_maxit = 6;
  int max_substeps = 1 << 14;
  double divergence_norm = 1e8;
  double min_step = 1e-10;
  double jump_tol = 1e-8;

  void Validate() const;
};

enum class PathStatus
{
  Tracked,
  Diverged,
  StepUnderflow,
  Jumped
};

const char *ToString(PathStatus s);

struct PathDiagnostics
{
  int substeps = 0;
  double residual = 0.0;
  PathStatus status = PathStatus::Tracked;
  // Last accepted substep length; seeds the next interval.
  double step = 0.0;
};

// Outcome of the start-system solve, per discarded category.
struct StartSummary
{
  int bezout_paths = 0;
  int retained = 0;
  int diverged = 0;
  int failed = 0;
  int singular = 0;
  int non_toric = 0;
  int rejected = 0;
  int duplicates = 0;
};

// delta tracked points at one contour node, ordered by path id.
struct SolutionSet
{
  std::vector<CVector> points;
  std::vector<int> path_ids;
  int node_index = 0;
  std::vector<PathDiagnostics> diagnostics;
  std::vector<std::string> warnings;
  StartSummary start;

  std::size_t Size() const { return points.size(); }
  bool AllTracked() const;
};

struct StartOptions
{
  TrackOptions track;
  // Retained count differing from this adds a CountMismatch warning.
  std::optional<int> expected_count;
  // Only the first toric_vars coordinates must be nonzero; -1 means all.
  int toric_vars = -1;
  // Extra endpoint predicate (e.g. denominators away from zero).
  std::function<bool(const CVector &)> accept;
};

// Solves F(x, phi(t_node)) = 0 by the gamma-trick total-degree homotopy
// gamma (1 - s) G(x) + s F(x), G_i = x_i^{D_i} - 1, keeping finite,
// nonsingular, toric endpoints.
SolutionSet SolveStart(const SquareSystem &sys, const NodeGrid &grid, int node_index,
                       std::uint64_t seed, const StartOptions &opts = {});

// Advances every path from node sols.node_index to to_node (<= N; N closes the
// loop) with Euler prediction along the Davidenko equation and Newton
// correction. Failures are recorded per path in the diagnostics.
SolutionSet ContinueNode(const SquareSystem &sys, const SolutionSet &sols, const NodeGrid &grid,
                         int to_node, const TrackOptions &opts = {});

// Newton iteration on sys(., z) until ||F|| <= tol (1 + ||x||), or until a
// step after the first is below tol (1 + ||x||). Throws
// SingularJacobian or NoConvergence (with the final residual in the message).
CVector NewtonRefine(const SquareSystem &sys, CVector x, Complex z, double tol = 1e-12,
                     int maxit = 20);

}  // namespace pepv

#endif  // PEPV_TRACKER_HPP
