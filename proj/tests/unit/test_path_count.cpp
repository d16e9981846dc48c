// Copyright the pepv authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "pepv/path_count.hpp"
#include "pepv/repv.hpp"
#include "pepv/tracker.hpp"
#include "pepv/trace_engine.hpp"
#include "test_support.hpp"

using namespace pepv;

TEST_CASE("dense_counts")
{
  const CountReport r = DenseCounts(3, 2, 4);
  CHECK(r.total_paths == 57);
  CHECK(r.total_eigs == 108);
  const CountReport s = DenseCounts(1, 0, 1);
  CHECK(s.total_paths == 1);
  CHECK(s.total_eigs == 1);
}

TEST_CASE("pyramid_count")
{
  CHECK(PyramidCount(3, 2).total_paths == 27);
  const CountReport r = PyramidCount(10, 1, 5);
  CHECK(r.total_paths == 5120);
  CHECK(r.total_eigs == 25600);
  CHECK(PyramidCount(1, 5).total_paths == 1);
}

TEST_CASE("repv_count")
{
  const CountReport r = RepvCount(10, 2);
  CHECK(r.total_paths == 550);
  CHECK(r.total_eigs == 220);
  CHECK(RepvCount(7, 0).delta == 1);
  CHECK(RepvCount(3, 2).delta == 6);
}

TEST_CASE("big integers do not overflow")
{
  const CountReport r = DenseCounts(40, 9, 3);
  BigInt expect = 1;
  for (int k = 0; k < 40; k++)
  {
    expect *= 10;
  }
  BigInt nine = 1;
  for (int k = 0; k < 40; k++)
  {
    nine *= 9;
  }
  CHECK(r.delta == expect - nine);
  CHECK(r.total_paths == r.delta * 40);
}

TEST_CASE("monotonicity over a grid")
{
  for (int n = 1; n <= 6; n++)
  {
    for (int d = 0; d <= 4; d++)
    {
      CHECK(DenseCounts(n, d + 1, 1).delta >= DenseCounts(n, d, 1).delta);
      CHECK(DenseCounts(n + 1, d, 1).delta >= DenseCounts(n, d, 1).delta);
      CHECK(PyramidCount(n, d + 1).delta >= PyramidCount(n, d).delta);
      CHECK(PyramidCount(n + 1, d).delta >= PyramidCount(n, d).delta);
    }
    for (int m = 0; m <= 4; m++)
    {
      CHECK(RepvCount(n, m + 1).delta >= RepvCount(n, m).delta);
      CHECK(RepvCount(n + 1, m).delta >= RepvCount(n, m).delta);
    }
  }
}

TEST_CASE("repv count symmetry delta(n, m) = delta(m + 1, n - 1)")
{
  for (int n = 1; n <= 8; n++)
  {
    for (int m = 0; m <= 8; m++)
    {
      CHECK(RepvCount(n, m).delta == RepvCount(m + 1, n - 1).delta);
      // Vandermonde: the sum collapses to C(n - 1 + m, m).
      CHECK(RepvCount(n, m).delta == Binomial(n - 1 + m, m));
    }
  }
}

TEST_CASE("family names")
{
  CHECK(CountFamilyFromString("pyramid") == CountFamily::Pyramid);
  CHECK_THROWS_WITH_AS(CountFamilyFromString("mixed"), doctest::Contains("InvalidFamily"), Error);
  CHECK_THROWS_AS(DenseCounts(0, 1, 1), Error);
}

TEST_CASE("empirical agreement: tracked solution counts equal the closed forms")
{
  const NodeGrid grid(Contour::Circle(0.3, 0.7), 8);
  for (int n = 1; n <= 3; n++)
  {
    for (int d = 0; d <= 2; d++)
    {
      for (int s = 0; s < 10; s++)
      {
        const std::uint64_t seed = 1000 * n + 100 * d + s;
        const PolyMatrixT t = pepv::test::RandomT(n, std::vector<int>(n, d), 1, seed);
        for (ShiftStyle style : {ShiftStyle::Dense, ShiftStyle::Monomial})
        {
          const ShiftVector a = MakeShifts(t, style, seed)[0];
          const SolutionSet sols = SolveStart(AssemblePepv(t, a), grid, 0, seed);
          const BigInt want = style == ShiftStyle::Dense ? DenseCounts(n, d, 1).delta
                                                         : PyramidCount(n, d).delta;
          INFO("n=" << n << " d=" << d << " seed=" << seed << " " << ToString(style));
          CHECK(BigInt(sols.Size()) == want);
        }
      }
    }
  }
}
