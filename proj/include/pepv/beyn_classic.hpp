// Copyright the pepv authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PEPV_BEYN_CLASSIC_HPP
#define PEPV_BEYN_CLASSIC_HPP

#include <cstdint>

#include "pepv/contour.hpp"
#include "pepv/linalg.hpp"
#include "pepv/poly_core.hpp"
#include "pepv/solver.hpp"
#include "pepv/trace_engine.hpp"

namespace pepv
{

// Random n x q probe with unit-modulus entries, reproducible from seed.
CMatrix MakeProbe(int n, int q, std::uint64_t seed);

// Samples T(phi(t_l))^{-1} probe as a USamples object. T must have all row
// degrees zero. Throws SingularNode(l) when T is singular at a node.
USamples BeynSamples(const PolyMatrixT &t, const NodeGrid &grid, const CMatrix &probe,
                     int threads = 1);

// Classical contour solve with LU solves; q = 0 means q = n.
SolveReport BeynSolve(const PolyMatrixT &t, const Contour &c, const SolveConfig &cfg, int q = 0);

}  // namespace pepv

#endif  // PEPV_BEYN_CLASSIC_HPP
