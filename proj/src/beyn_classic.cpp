// Copyright the pepv authors.
// SPDX-License-Identifier: Apache-2.0

#include "pepv/beyn_classic.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <thread>

namespace pepv
{

CMatrix MakeProbe(int n, int q, std::uint64_t seed)
{
  if (q < 1 || q > n)
  {
    ThrowValidation("InvalidProbe", "probe width q must satisfy 1 <= q <= n");
  }
  CounterRng rng(seed, 0xbe1aULL);
  CMatrix v(n, q);
  for (int i = 0; i < n; i++)
  {
    for (int j = 0; j < q; j++)
    {
      v(i, j) = rng.UnitComplex();
    }
  }
  return v;
}

USamples BeynSamples(const PolyMatrixT &t, const NodeGrid &grid, const CMatrix &probe, int threads)
{
  t.Validate();
  if (std::any_of(t.row_degrees.begin(), t.row_degrees.end(), [](int d) { return d != 0; }))
  {
    ThrowValidation("NotEigenvectorIndependent", "classical mode needs every row degree to be 0");
  }
  const int count = grid.Count();
  USamples u;
  u.nodes.resize(count);
  std::vector<std::exception_ptr> errors(count);
  const CVector unused(t.n, 0.0);
  auto run = [&](int l)
  {
    try
    {
      u.nodes[l] = LuDecomposition(t.Evaluate(unused, grid[l].z)).Solve(probe);
    }
    catch (const Error &)
    {
      errors[l] = std::make_exception_ptr(
          Error(ErrorKind::Numerical, "SingularNode(" + std::to_string(l) + ")",
                "T is singular at a quadrature node; the contour passes through an eigenvalue"));
    }
  };
  const int workers =
      std::clamp(threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency()), 1,
                 count);
  if (workers == 1)
  {
    for (int l = 0; l < count; l++)
    {
      run(l);
    }
  }
  else
  {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; w++)
    {
      pool.emplace_back(
          [&]
          {
            for (int l = next++; l < count; l = next++)
            {
              run(l);
            }
          });
    }
    for (auto &th : pool)
    {
      th.join();
    }
  }
  for (auto &e : errors)
  {
    if (e)
    {
      std::rethrow_exception(e);
    }
  }
  return u;
}

SolveReport BeynSolve(const PolyMatrixT &t, const Contour &c, const SolveConfig &cfg, int q)
{
  using Clock = std::chrono::steady_clock;
  auto seconds = [](Clock::time_point t0)
  { return std::chrono::duration<double>(Clock::now() - t0).count(); };

  cfg.Validate();
  SolveReport report;
  report.config = cfg;
  auto t0 = Clock::now();
  const CMatrix probe = MakeProbe(t.n, q == 0 ? t.n : q, cfg.seed);
  const NodeGrid grid(c, cfg.nodes);
  report.timing.setup = seconds(t0);

  t0 = Clock::now();
  const USamples u = BeynSamples(t, grid, probe, cfg.threads);
  report.timing.tracking = seconds(t0);

  t0 = Clock::now();
  const MomentSet moms = ScaledMoments(u, grid, cfg.moments);
  report.timing.moments = seconds(t0);
  FinishFromMoments(report, moms, c, PepvModel(t), cfg);
  return report;
}

}  // namespace pepv
