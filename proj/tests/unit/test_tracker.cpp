// Copyright the pepv authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "pepv/trace_engine.hpp"
#include "pepv/tracker.hpp"
#include "test_support.hpp"

using namespace pepv;
using pepv::test::SetDistance;
using pepv::test::Term;

namespace
{

// x1^2 - z, x2 - 1
SquareSystem SqrtSystem()
{
  return SquareSystem(2, {{Term({2, 0}, {1.0}), Term({0, 0}, {0.0, -1.0})},
                          {Term({0, 1}, {1.0}), Term({0, 0}, {-1.0})}});
}

// Tracks every node of the grid, returning one set per node 0..N.
std::vector<SolutionSet> FullLoop(const SquareSystem &s, const NodeGrid &g, std::uint64_t seed,
                                  const StartOptions &opts = {})
{
  std::vector<SolutionSet> out{SolveStart(s, g, 0, seed, opts)};
  for (int l = 1; l <= g.Count(); l++)
  {
    out.push_back(ContinueNode(s, out.back(), g, l, opts.track));
  }
  return out;
}

}  // namespace

TEST_CASE("solve_start: decoupled quadratic")
{
  const NodeGrid g(Contour::Circle(4.0, 1.0), 32);
  const SolutionSet s = SolveStart(SqrtSystem(), g, 0, 1);
  CHECK(s.Size() == 2);
  CHECK(s.start.bezout_paths == 2);
  const double r5 = std::sqrt(5.0);
  CHECK(SetDistance(s.points, {{r5, 1.0}, {-r5, 1.0}}) <= 1e-12);
}

TEST_CASE("continue_node: closure without an enclosed branch point")
{
  const NodeGrid g(Contour::Circle(4.0, 1.0), 32);
  const auto sets = FullLoop(SqrtSystem(), g, 2);
  const SolutionSet &start = sets.front(), &end = sets.back();
  CHECK(SetDistance(start.points, end.points) <= 1e-10);
  for (std::size_t m = 0; m < start.Size(); m++)
  {
    CHECK(pepv::test::MaxDiff(start.points[m], end.points[m]) <= 1e-10);
  }
}

TEST_CASE("continue_node: monodromy around the square-root branch point")
{
  const NodeGrid g(Contour::Circle(0.0, 1.0), 32);
  const auto sets = FullLoop(SqrtSystem(), g, 3);
  const SolutionSet &start = sets.front(), &end = sets.back();
  CHECK(SetDistance(start.points, end.points) <= 1e-10);
  // Each path ends where the other began.
  CHECK(pepv::test::MaxDiff(end.points[0], start.points[1]) <= 1e-10);
  CHECK(pepv::test::MaxDiff(end.points[1], start.points[0]) <= 1e-10);
}

TEST_CASE("continue_node: identity path follows the contour")
{
  const SquareSystem lin(1, {{Term({1}, {1.0}), Term({0}, {0.0, -1.0})}});
  const NodeGrid g(Contour::Ellipse(Complex(0.2, 0.1), 1.5, 0.5, 0.3), 24);
  const auto sets = FullLoop(lin, g, 4);
  for (int l = 0; l < g.Count(); l++)
  {
    REQUIRE(sets[l].Size() == 1);
    CHECK(std::abs(sets[l].points[0][0] - g[l].z) <= 1e-13);
  }
}

TEST_CASE("newton_refine: examples")
{
  const SquareSystem q(1, {{Term({2}, {1.0}), Term({0}, {-4.0})}});
  CHECK(std::abs(NewtonRefine(q, {3.0}, 0.0)[0] - 2.0) <= 1e-12);

  const SquareSystem r(1, {{Term({2}, {1.0}), Term({0}, {0.0, -1.0})}});
  CHECK(std::abs(NewtonRefine(r, {2.2}, 5.0)[0] - std::sqrt(5.0)) <= 1e-12);

  CHECK_THROWS_AS(NewtonRefine(q, {0.0}, 0.0), Error);
}

TEST_CASE("tracked points satisfy the residual bound at every node")
{
  const PolyMatrixT t = pepv::test::RandomT(3, {1, 1, 1}, 2, 31);
  const SquareSystem s = AssemblePepv(t, MakeShifts(t, ShiftStyle::Dense, 31)[0]);
  const NodeGrid g(Contour::Circle(Complex(0.1, -0.2), 0.8), 40);
  const auto sets = FullLoop(s, g, 31);
  const TrackOptions opts;
  for (int l = 0; l <= g.Count(); l++)
  {
    const Complex z = g.Path().Point(g.Parameter(l));
    CHECK(sets[l].AllTracked());
    for (const auto &x : sets[l].points)
    {
      CHECK(Norm2(s.Evaluate(x, z)) <= opts.newton_tol * (1.0 + NormInf(x)));
    }
  }
  CHECK(SetDistance(sets.front().points, sets.back().points) <= 1e-8);
}

TEST_CASE("node consistency: continuation agrees with a fresh start solve")
{
  const PolyMatrixT t = pepv::test::RandomT(3, {2, 1, 1}, 2, 32);
  const SquareSystem s = AssemblePepv(t, MakeShifts(t, ShiftStyle::Dense, 32)[1]);
  const NodeGrid g(Contour::Circle(0.3, 0.9), 30);
  const auto sets = FullLoop(s, g, 32);
  CounterRng rng(32);
  for (int k = 0; k < 5; k++)
  {
    const int l = static_cast<int>(rng.Below(30));
    const SolutionSet fresh = SolveStart(s, g, l, 900 + k);
    INFO("node " << l);
    CHECK(SetDistance(sets[l].points, fresh.points) <= 1e-8);
  }
}

TEST_CASE("determinism: identical seeds give bitwise identical results")
{
  const PolyMatrixT t = pepv::test::RandomT(2, {2, 2}, 1, 33);
  const SquareSystem s = AssemblePepv(t, MakeShifts(t, ShiftStyle::Monomial, 33)[0]);
  const NodeGrid g(Contour::Circle(0.0, 1.0), 16);
  const auto a = FullLoop(s, g, 33), b = FullLoop(s, g, 33);
  for (std::size_t l = 0; l < a.size(); l++)
  {
    REQUIRE(a[l].Size() == b[l].Size());
    for (std::size_t m = 0; m < a[l].Size(); m++)
    {
      CHECK(a[l].points[m] == b[l].points[m]);
      CHECK(a[l].diagnostics[m].substeps == b[l].diagnostics[m].substeps);
      CHECK(a[l].diagnostics[m].residual == b[l].diagnostics[m].residual);
    }
  }
}

TEST_CASE("solve_start: pyramid shifts retain (d+1)^(n-1) solutions per column")
{
  const PolyMatrixT t = pepv::test::RandomT(3, {2, 2, 2}, 4, 34);
  const NodeGrid g(Contour::Circle(0.0, 1.0), 16);
  int total = 0;
  for (const auto &a : MakeShifts(t, ShiftStyle::Monomial, 34))
  {
    const SolutionSet s = SolveStart(AssemblePepv(t, a), g, 0, 34);
    CHECK(s.Size() == 9);
    total += static_cast<int>(s.Size());
  }
  CHECK(total == 27);
}

TEST_CASE("solve_start: the printed 3 x 3 system with dense linear shifts")
{
  // Eight Bezout paths; seven end in the torus, one at the origin, for
  // every seed tried. The origin solves F for any shift of degree 1 because
  // both T(x) x and a(x) vanish there.
  const NodeGrid g(Contour::Ellipse(0.6, 0.4, 0.3), 16);
  for (std::uint64_t seed = 1; seed <= 12; seed++)
  {
    const ShiftVector a = MakeShifts(pepv::test::ExampleIntro(), ShiftStyle::Dense, seed)[0];
    StartOptions opts;
    opts.expected_count = 8;
    const SolutionSet s = SolveStart(AssemblePepv(pepv::test::ExampleIntro(), a), g, 0, seed, opts);
    INFO("seed " << seed);
    CHECK(s.start.bezout_paths == 8);
    CHECK(s.Size() == 7);
    CHECK(s.start.non_toric + s.start.failed + s.start.singular == 1);
    REQUIRE(s.warnings.size() == 1);
    CHECK(s.warnings[0] == "CountMismatch(expected 8, retained 7)");
  }
}

TEST_CASE("solve_start: errors")
{
  const SquareSystem constant_row(2, {{Term({1, 0}, {1.0})}, {Term({0, 0}, {1.0})}});
  const NodeGrid g(Contour::Circle(0.0, 1.0), 8);
  CHECK_THROWS_WITH_AS(SolveStart(constant_row, g, 0, 1), doctest::Contains("StartSystemDegenerate"),
                       Error);
  StartOptions bad;
  bad.track.newton_maxit = 1;
  CHECK_THROWS_WITH_AS(SolveStart(SqrtSystem(), g, 0, 1, bad),
                       doctest::Contains("InvalidTrackOptions"), Error);
  const SolutionSet s = SolveStart(SqrtSystem(), g, 0, 1);
  CHECK_THROWS_WITH_AS(ContinueNode(SqrtSystem(), s, g, 2), doctest::Contains("InvalidNode"), Error);
}
