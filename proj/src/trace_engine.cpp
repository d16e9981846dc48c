// Copyright the pepv authors.
// SPDX-License-Identifier: Apache-2.0

#include "pepv/trace_engine.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <set>
#include <thread>

namespace pepv
{

namespace
{

// All exponent vectors of length n and total degree d, lexicographic.
void Monomials(int n, int d, Exponent &cur, int k, std::vector<Exponent> &out)
{
  if (k == n - 1)
  {
    cur[k] = d;
    out.push_back(cur);
    return;
  }
  for (int e = d; e >= 0; e--)
  {
    cur[k] = e;
    Monomials(n, d - e, cur, k + 1, out);
  }
}

std::vector<Exponent> Monomials(int n, int d)
{
  std::vector<Exponent> out;
  Exponent cur(n, 0);
  Monomials(n, d, cur, 0, out);
  return out;
}

CVector TraceOf(const SolutionSet &s, int vars)
{
  CVector tr(vars, 0.0);
  for (const auto &p : s.points)
  {
    for (int i = 0; i < vars; i++)
    {
      tr[i] += p[i];
    }
  }
  return tr;
}

}  // namespace

std::vector<ShiftVector> MakeShifts(const PolyMatrixT &t, ShiftStyle style, std::uint64_t seed)
{
  t.Validate();
  const int n = t.n;
  if (style == ShiftStyle::Monomial &&
      std::any_of(t.row_degrees.begin(), t.row_degrees.end(),
                  [&](int d) { return d != t.row_degrees[0]; }))
  {
    ThrowValidation("MixedDegrees", "monomial shifts require equal row degrees");
  }
  std::vector<ShiftVector> shifts;
  for (int j = 0; j < n; j++)
  {
    ShiftVector a;
    a.style = style;
    a.seed = CounterRng::Derive(seed, static_cast<std::uint64_t>(j));
    a.polys.resize(n);
    CounterRng rng(a.seed, 1);
    if (style == ShiftStyle::Dense)
    {
      for (int i = 0; i < n; i++)
      {
        for (auto &e : Monomials(n, t.row_degrees[i]))
        {
          a.polys[i].push_back(XTerm{std::move(e), ZPoly::Constant(rng.UnitComplex())});
        }
      }
    }
    else
    {
      const std::vector<Exponent> all = Monomials(n, t.row_degrees[0]);
      const Exponent &beta = all[rng.Below(all.size())];
      for (int i = 0; i < n; i++)
      {
        a.polys[i].push_back(XTerm{beta, ZPoly::Constant(rng.UnitComplex())});
      }
    }
    shifts.push_back(std::move(a));
  }
  return shifts;
}

TraceColumn EvaluateColumn(const SquareSystem &sys, int shift_index, const NodeGrid &grid,
                           std::uint64_t seed, const ColumnOptions &opts)
{
  const int vars = opts.trace_vars < 0 ? sys.NumVars() : opts.trace_vars;
  StartOptions so;
  so.track = opts.track;
  so.expected_count = opts.expected_delta;
  so.toric_vars = vars;
  so.accept = opts.accept;

  TraceColumn col;
  col.shift_index = shift_index;
  SolutionSet cur = SolveStart(sys, grid, 0, seed, so);
  col.path_count = static_cast<int>(cur.Size());
  col.start_set = cur;
  col.values.reserve(grid.Count());
  col.values.push_back(TraceOf(cur, vars));

  std::set<int> flagged;
  auto flag = [&](const SolutionSet &s)
  {
    if (!opts.flag_point)
    {
      return;
    }
    for (std::size_t m = 0; m < s.Size(); m++)
    {
      if (!flagged.count(s.path_ids[m]) && opts.flag_point(s.points[m]))
      {
        flagged.insert(s.path_ids[m]);
        col.warnings.push_back(opts.flag_code + "(" + std::to_string(s.path_ids[m]) +
                               ") at node " + std::to_string(s.node_index));
      }
    }
  };
  flag(cur);

  for (int l = 1; l <= grid.Count(); l++)
  {
    cur = ContinueNode(sys, cur, grid, l, opts.track);
    for (std::size_t m = 0; m < cur.Size(); m++)
    {
      const PathDiagnostics &d = cur.diagnostics[m];
      col.total_substeps += d.substeps;
      if (d.status == PathStatus::Diverged || d.status == PathStatus::StepUnderflow)
      {
        ThrowNumerical(std::string(d.status == PathStatus::Diverged ? "PathDiverged"
                                                                    : "StepUnderflow") +
                           "(" + std::to_string(cur.path_ids[m]) + ")",
                       "column " + std::to_string(shift_index) + ", node " + std::to_string(l));
      }
    }
    flag(cur);
    if (l < grid.Count())
    {
      col.values.push_back(TraceOf(cur, vars));
    }
  }
  col.closure = TraceOf(cur, vars);
  col.end_set = cur;
  for (auto &w : cur.warnings)
  {
    col.warnings.push_back(w);
  }
  return col;
}

TraceColumn EvaluateColumn(const PolyMatrixT &t, const ShiftVector &a, int shift_index,
                           const NodeGrid &grid, std::uint64_t seed, const ColumnOptions &opts)
{
  return EvaluateColumn(AssemblePepv(t, a), shift_index, grid, seed, opts);
}

std::vector<TraceColumn> EvaluateColumns(const std::vector<SquareSystem> &systems,
                                         const NodeGrid &grid, std::uint64_t seed,
                                         const ColumnOptions &opts, int threads)
{
  const int count = static_cast<int>(systems.size());
  std::vector<TraceColumn> out(count);
  std::vector<std::exception_ptr> errors(count);
  auto run = [&](int j)
  {
    try
    {
      out[j] = EvaluateColumn(systems[j], j, grid,
                              CounterRng::Derive(seed, 0x1000u + static_cast<unsigned>(j)), opts);
    }
    catch (...)
    {
      errors[j] = std::current_exception();
    }
  };
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, std::max(count, 1));
  if (workers == 1)
  {
    for (int j = 0; j < count; j++)
    {
      run(j);
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
            for (int j = next++; j < count; j = next++)
            {
              run(j);
            }
          });
    }
    for (auto &th : pool)
    {
      th.join();
    }
  }
  // First failing column in index order wins.
  for (auto &e : errors)
  {
    if (e)
    {
      std::rethrow_exception(e);
    }
  }
  return out;
}

USamples AssembleU(const std::vector<TraceColumn> &columns)
{
  USamples u;
  if (columns.empty())
  {
    return u;
  }
  const std::size_t nodes = columns[0].values.size();
  const std::size_t rows = columns[0].values[0].size();
  u.nodes.assign(nodes, CMatrix(rows, columns.size()));
  for (std::size_t j = 0; j < columns.size(); j++)
  {
    if (columns[j].values.size() != nodes)
    {
      ThrowValidation("DimensionMismatch", "trace columns sampled on different grids");
    }
    for (std::size_t l = 0; l < nodes; l++)
    {
      u.nodes[l].SetCol(j, columns[j].values[l]);
    }
  }
  return u;
}

MomentSet Moments(const USamples &u, const NodeGrid &grid, int blocks, Complex center,
                  double scale)
{
  if (blocks < 1)
  {
    ThrowValidation("InvalidMoments", "need at least one Hankel block");
  }
  if (static_cast<int>(u.nodes.size()) != grid.Count())
  {
    ThrowValidation("DimensionMismatch", "U samples do not match the node grid");
  }
  MomentSet ms;
  ms.nodes = grid.Count();
  ms.blocks = blocks;
  ms.center = center;
  ms.scale = scale;
  const std::size_t rows = u.nodes[0].Rows(), cols = u.nodes[0].Cols();
  ms.matrices.assign(2 * blocks, CMatrix(rows, cols));
  const Complex factor = 1.0 / (Complex(0.0, 1.0) * static_cast<double>(grid.Count()));
  for (int l = 0; l < grid.Count(); l++)
  {
    const Node &node = grid[l];
    ms.sample_norm = std::max(ms.sample_norm, u.nodes[l].FrobeniusNorm());
    const Complex w = (node.z - center) / scale;
    // dw = dz / scale
    Complex weight = factor * node.dz / scale;
    for (int k = 0; k < 2 * blocks; k++)
    {
      ms.matrices[k] += u.nodes[l] * weight;
      weight *= w;
    }
  }
  return ms;
}

MomentSet ScaledMoments(const USamples &u, const NodeGrid &grid, int blocks)
{
  return Moments(u, grid, blocks, grid.Path().Center(), grid.Path().Scale());
}

}  // namespace pepv
