// Copyright the pepv authors.
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pepv/beyn_classic.hpp"
#include "pepv/linalg.hpp"
#include "pepv/path_count.hpp"
#include "pepv/problem_io.hpp"
#include "pepv/repv.hpp"
#include "pepv/solver.hpp"

namespace pepv::cli
{

namespace
{

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char *kVersion = "1.0.0";

enum class Pipeline
{
  Trace,
  Beyn,
  Repv
};

const char *PipelineName(Pipeline p)
{
  switch (p)
  {
    case Pipeline::Trace:
      return "solve";
    case Pipeline::Beyn:
      return "beyn";
    case Pipeline::Repv:
      return "repv";
  }
  return "solve";
}

// Flag values as parsed; unset optionals fall back to the config file, then
// to the SolveConfig defaults.
struct SolveFlags
{
  std::string problem;
  std::string config;
  std::string out_dir = ".";
  std::optional<std::string> contour_kind;
  std::optional<std::vector<double>> contour_center;
  std::optional<double> contour_radius;
  std::optional<std::vector<double>> contour_radii;
  std::optional<double> contour_rotation;
  std::optional<int> nodes, moments, threads, expected_delta;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> shift;
  std::optional<double> rank_tol, residual_tol;
  bool keep_outside = false;
  bool refine = false;
  bool no_refine = false;
  bool no_residual_filter = false;
  int probe_width = 0;
};

void AddSolveFlags(CLI::App &cmd, SolveFlags &f, bool beyn)
{
  cmd.add_option("--problem,problem", f.problem, "problem JSON file")->required();
  cmd.add_option("--config", f.config, "JSON file with contour, N, M and solver settings");
  cmd.add_option("--contour-kind", f.contour_kind, "circle or ellipse");
  cmd.add_option("--contour-center", f.contour_center, "center as RE IM")->expected(2);
  cmd.add_option("--contour-radius", f.contour_radius, "circle radius");
  cmd.add_option("--contour-radii", f.contour_radii, "ellipse radii RX RY")->expected(2);
  cmd.add_option("--contour-rotation", f.contour_rotation, "ellipse rotation in radians");
  cmd.add_option("--nodes,-N", f.nodes, "quadrature node count N");
  cmd.add_option("--moments,-M", f.moments, "Hankel block count M");
  cmd.add_option("--seed", f.seed, "master seed");
  cmd.add_option("--rank-tol", f.rank_tol, "relative singular value cut");
  cmd.add_option("--residual-tol", f.residual_tol, "residual filter threshold");
  cmd.add_flag("--no-residual-filter", f.no_residual_filter, "report pairs regardless of residual");
  cmd.add_flag("--keep-outside", f.keep_outside, "report eigenvalues outside the contour");
  cmd.add_flag("--refine", f.refine, "Newton-refine extracted pairs (default)");
  cmd.add_flag("--no-refine", f.no_refine, "report raw extracted pairs");
  cmd.add_option("--threads", f.threads, "worker threads, 0 = all cores");
  cmd.add_option("--out-dir", f.out_dir, "directory for result files");
  if (beyn)
  {
    cmd.add_option("--probe-width,-q", f.probe_width, "probe columns q (default n)");
  }
  else
  {
    cmd.add_option("--shift", f.shift, "dense or monomial");
    cmd.add_option("--expected-delta", f.expected_delta, "expected paths per column");
  }
}

struct Resolved
{
  SolveConfig cfg;
  std::optional<Contour> contour;
};

Resolved Resolve(const SolveFlags &f)
{
  Resolved r;
  json file = json::object();
  if (!f.config.empty())
  {
    try
    {
      file = json::parse(ReadFile(f.config));
    }
    catch (const json::parse_error &e)
    {
      ThrowValidation("ParseError", f.config + ": " + e.what());
    }
  }
  try
  {
    SolveConfig &c = r.cfg;
    auto take = [&](const char *key, auto &dst)
    {
      if (file.contains(key))
      {
        dst = file[key].get<std::decay_t<decltype(dst)>>();
      }
    };
    take("N", c.nodes);
    take("M", c.moments);
    take("seed", c.seed);
    take("rank_tol", c.tol_rank);
    take("residual_tol", c.residual_threshold);
    take("keep_outside", c.keep_outside);
    take("refine", c.refine);
    take("residual_filter", c.residual_filter);
    take("threads", c.threads);
    if (file.contains("shift"))
    {
      c.shift_style = ShiftStyleFromString(file["shift"].get<std::string>());
    }
    if (file.contains("expected_delta"))
    {
      c.expected_delta = file["expected_delta"].get<int>();
    }
    if (file.contains("contour"))
    {
      r.contour = ParseContour(file["contour"]);
    }
  }
  catch (const json::exception &e)
  {
    ThrowValidation("InvalidConfig", f.config + ": " + e.what());
  }

  SolveConfig &c = r.cfg;
  if (f.nodes) c.nodes = *f.nodes;
  if (f.moments) c.moments = *f.moments;
  if (f.seed) c.seed = *f.seed;
  if (f.rank_tol) c.tol_rank = *f.rank_tol;
  if (f.residual_tol) c.residual_threshold = *f.residual_tol;
  if (f.threads) c.threads = *f.threads;
  if (f.expected_delta) c.expected_delta = *f.expected_delta;
  if (f.shift) c.shift_style = ShiftStyleFromString(*f.shift);
  if (f.keep_outside) c.keep_outside = true;
  if (f.refine) c.refine = true;
  if (f.no_refine) c.refine = false;
  if (f.no_residual_filter) c.residual_filter = false;

  if (f.contour_kind || f.contour_center || f.contour_radius || f.contour_radii)
  {
    json cj = r.contour ? ContourToJson(*r.contour) : json::object();
    if (f.contour_kind) cj["kind"] = *f.contour_kind;
    if (f.contour_center) cj["center"] = *f.contour_center;
    if (f.contour_radius) cj["radius"] = *f.contour_radius;
    if (f.contour_radii) cj["radii"] = *f.contour_radii;
    if (f.contour_rotation) cj["rotation"] = *f.contour_rotation;
    if (!cj.contains("kind"))
    {
      cj["kind"] = cj.contains("radii") ? "ellipse" : "circle";
    }
    if (!cj.contains("center"))
    {
      cj["center"] = json::array({0.0, 0.0});
    }
    r.contour = ParseContour(cj);
  }
  if (!r.contour)
  {
    ThrowValidation("MissingContour", "give a contour via --config or --contour-* flags");
  }
  c.Validate();
  return r;
}

json PairToJson(const Eigenpair &p)
{
  json x = json::array();
  for (const auto &v : p.x)
  {
    x.push_back(ComplexToJson(v));
  }
  return {{"z", ComplexToJson(p.z)},
          {"x", x},
          {"residual", p.residual},
          {"inside", p.inside},
          {"flags", p.flags},
          {"extracted_z", ComplexToJson(p.extracted_z)},
          {"extracted_residual", p.extracted_residual}};
}

json ShiftToJson(const ShiftVector &a)
{
  json polys = json::array();
  for (const auto &poly : a.polys)
  {
    json terms = json::array();
    for (const auto &t : poly)
    {
      terms.push_back({{"xexp", t.exponent}, {"coeff", ComplexToJson(t.coeff.Coefficients().at(0))}});
    }
    polys.push_back(terms);
  }
  return {{"style", ToString(a.style)}, {"seed", a.seed}, {"polys", polys}};
}

json ConfigToJson(const SolveConfig &c)
{
  json j = {{"N", c.nodes},
            {"M", c.moments},
            {"seed", c.seed},
            {"shift", ToString(c.shift_style)},
            {"rank_tol", c.tol_rank},
            {"residual_tol", c.residual_threshold},
            {"residual_filter", c.residual_filter},
            {"keep_outside", c.keep_outside},
            {"refine", c.refine},
            {"threads", c.threads}};
  if (c.expected_delta)
  {
    j["expected_delta"] = *c.expected_delta;
  }
  return j;
}

std::string Fmt(const char *fmt, double a)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, a);
  return buf;
}

void WriteText(const fs::path &p, const std::string &s)
{
  std::ofstream out(p, std::ios::binary);
  if (!out)
  {
    ThrowValidation("OutputError", "cannot write '" + p.string() + "'");
  }
  out << s;
}

void WriteResults(const SolveReport &rep, Pipeline pipeline, const SolveFlags &flags,
                  const Contour &contour, const std::vector<std::string> &args, std::ostream &out)
{
  const fs::path dir(flags.out_dir);
  fs::create_directories(dir);

  json pairs = json::array();
  for (const auto &p : rep.eigenpairs)
  {
    pairs.push_back(PairToJson(p));
  }
  WriteText(dir / "eigenpairs.json", pairs.dump(2) + "\n");

  std::ostringstream csv;
  csv << "re,im,residual,inside\n";
  csv << std::setprecision(17);
  for (const auto &p : rep.eigenpairs)
  {
    csv << p.z.real() << "," << p.z.imag() << "," << p.residual << "," << (p.inside ? 1 : 0)
        << "\n";
  }
  WriteText(dir / "eigenvalues.csv", csv.str());

  json columns = json::array();
  for (const auto &c : rep.columns)
  {
    columns.push_back({{"shift_index", c.shift_index},
                       {"paths", c.path_count},
                       {"substeps", c.substeps},
                       {"closure_gap", c.closure_gap},
                       {"start",
                        {{"bezout_paths", c.start.bezout_paths},
                         {"retained", c.start.retained},
                         {"diverged", c.start.diverged},
                         {"failed", c.start.failed},
                         {"singular", c.start.singular},
                         {"non_toric", c.start.non_toric},
                         {"rejected", c.start.rejected},
                         {"duplicates", c.start.duplicates}}},
                       {"warnings", c.warnings}});
  }
  json shifts = json::array();
  for (const auto &a : rep.shifts)
  {
    shifts.push_back(ShiftToJson(a));
  }
  json filtered = json::array();
  for (const auto &p : rep.filtered)
  {
    filtered.push_back(PairToJson(p));
  }
  json manifest = {
      {"tool", "pepv"},
      {"version", kVersion},
      {"command", PipelineName(pipeline)},
      {"argv", args},
      {"input", flags.problem},
      {"contour", ContourToJson(contour)},
      {"config", ConfigToJson(rep.config)},
      {"seed", rep.config.seed},
      {"shifts", shifts},
      {"columns", columns},
      {"moment_norms", rep.moment_norms},
      {"sigma", rep.sigma},
      {"rank", rep.rank},
      {"warnings", rep.warnings},
      {"notes", rep.notes},
      {"filtered", filtered},
      {"timing",
       {{"setup", rep.timing.setup},
        {"tracking", rep.timing.tracking},
        {"moments", rep.timing.moments},
        {"extraction", rep.timing.extraction},
        {"refinement", rep.timing.refinement}}},
      {"outputs", {(dir / "eigenpairs.json").string(), (dir / "eigenvalues.csv").string()}}};
  if (rep.predicted_delta)
  {
    manifest["predicted_delta"] = *rep.predicted_delta;
  }
  WriteText(dir / "manifest.json", manifest.dump(2) + "\n");

  out << "eigenpairs: " << rep.eigenpairs.size() << "  (rank " << rep.rank << ")\n";
  if (!rep.eigenpairs.empty())
  {
    out << "  #  re(z)                   im(z)                   residual    inside  flags\n";
  }
  int k = 0;
  for (const auto &p : rep.eigenpairs)
  {
    std::string f;
    for (const auto &s : p.flags)
    {
      f += (f.empty() ? "" : ",") + s;
    }
    out << std::setw(3) << ++k << "  " << std::left << std::setw(24)
        << Fmt("%.16g", p.z.real()) << std::setw(24) << Fmt("%.16g", p.z.imag()) << std::setw(12)
        << Fmt("%.3e", p.residual) << std::setw(8) << (p.inside ? "yes" : "no") << std::right << f
        << "\n";
  }
  for (const auto &c : rep.columns)
  {
    out << "column " << c.shift_index << ": " << c.path_count << " paths";
    if (c.start.bezout_paths > 0)
    {
      out << " of " << c.start.bezout_paths << " start paths";
    }
    out << "\n";
  }
  for (const auto &n : rep.notes)
  {
    out << "note: " << n << "\n";
  }
  bool mismatch = false;
  for (const auto &w : rep.warnings)
  {
    out << "warning: " << w << "\n";
    mismatch = mismatch || w.find("CountMismatch") != std::string::npos;
  }
  if (mismatch)
  {
    out << "hint: a path count mismatch often means the start node sits near a branch point; "
           "try --contour-rotation with a small angle\n";
  }
  out << "wrote " << (dir / "eigenpairs.json").string() << ", " << (dir / "eigenvalues.csv").string()
      << ", " << (dir / "manifest.json").string() << "\n";
}

int RunPipeline(Pipeline pipeline, const SolveFlags &flags, const std::vector<std::string> &args,
                std::ostream &out)
{
  const Resolved r = Resolve(flags);
  const Problem problem = LoadProblem(flags.problem);
  SolveReport rep;
  switch (pipeline)
  {
    case Pipeline::Trace:
      if (problem.kind != ProblemKind::Pepv)
      {
        ThrowValidation("WrongProblemKind", "solve expects a pepv problem; use the repv command");
      }
      rep = Solve(problem.pepv, *r.contour, r.cfg);
      break;
    case Pipeline::Beyn:
      if (problem.kind != ProblemKind::Pepv)
      {
        ThrowValidation("WrongProblemKind", "beyn expects a pepv problem with degree_x = 0");
      }
      rep = BeynSolve(problem.pepv, *r.contour, r.cfg, flags.probe_width);
      break;
    case Pipeline::Repv:
      if (problem.kind != ProblemKind::Repv)
      {
        ThrowValidation("WrongProblemKind", "repv expects a problem with kind = repv");
      }
      rep = SolveRepv(problem.repv, *r.contour, r.cfg);
      break;
  }
  WriteResults(rep, pipeline, flags, *r.contour, args, out);
  return kExitOk;
}

int RunCount(const std::string &family, int n, int d, int e, int m, std::ostream &out)
{
  CountReport r;
  switch (CountFamilyFromString(family))
  {
    case CountFamily::Dense:
      r = DenseCounts(n, d, e);
      break;
    case CountFamily::Pyramid:
      r = PyramidCount(n, d, e);
      break;
    case CountFamily::Repv:
      r = RepvCount(n, m);
      break;
  }
  // Counts are emitted as JSON numbers when they fit, else as strings.
  auto num = [](const BigInt &v) -> json
  {
    if (v <= BigInt(std::numeric_limits<std::int64_t>::max()))
    {
      return static_cast<std::int64_t>(v);
    }
    return v.str();
  };
  json j = {{"family", ToString(r.family)},
            {"n", r.n},
            {"d", r.d},
            {"e", r.e},
            {"m", r.m},
            {"delta", num(r.delta)},
            {"total_paths", num(r.total_paths)},
            {"total_eigs", num(r.total_eigs)}};
  out << j.dump(2) << "\n";
  return kExitOk;
}

int RunRoots(const std::string &path, std::ostream &out)
{
  const CVector roots = PolyRoots(ParseCoefficients(ReadFile(path)));
  out << "re,im\n" << std::setprecision(17);
  for (const auto &r : roots)
  {
    out << r.real() << "," << r.imag() << "\n";
  }
  return kExitOk;
}

int RunReplay(const std::string &manifest_path, const std::string &out_dir, std::ostream &out,
              std::ostream &err)
{
  json manifest;
  try
  {
    manifest = json::parse(ReadFile(manifest_path));
  }
  catch (const json::parse_error &e)
  {
    ThrowValidation("ParseError", manifest_path + ": " + e.what());
  }
  if (!manifest.contains("argv") || !manifest["argv"].is_array())
  {
    ThrowValidation("InvalidManifest", "manifest has no argv");
  }
  std::vector<std::string> args = manifest["argv"].get<std::vector<std::string>>();
  // Drop any previous output directory; the replay writes to out_dir.
  for (std::size_t i = 0; i < args.size(); i++)
  {
    if (args[i] == "--out-dir" && i + 1 < args.size())
    {
      args.erase(args.begin() + i, args.begin() + i + 2);
      break;
    }
    if (args[i].rfind("--out-dir=", 0) == 0)
    {
      args.erase(args.begin() + i);
      break;
    }
  }
  args.push_back("--out-dir");
  args.push_back(out_dir);
  const int code = Run(args, out, err);
  if (code != kExitOk)
  {
    return code;
  }
  const fs::path original = fs::path(manifest_path).parent_path() / "eigenpairs.json";
  if (fs::exists(original))
  {
    const bool same = ReadFile(original.string()) == ReadFile((fs::path(out_dir) / "eigenpairs.json").string());
    out << (same ? "replay: identical eigenpairs.json\n" : "replay: eigenpairs.json differs\n");
    return same ? kExitOk : kExitNumerical;
  }
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Contour-integral solver for polynomial eigenvalue problems with eigenvector "
               "nonlinearities"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  SolveFlags solve_flags, beyn_flags, repv_flags;
  auto *solve = app.add_subcommand("solve", "trace pipeline on a pepv problem");
  AddSolveFlags(*solve, solve_flags, false);
  auto *beyn = app.add_subcommand("beyn", "classical contour solver for degree_x = 0 problems");
  AddSolveFlags(*beyn, beyn_flags, true);
  auto *repv = app.add_subcommand("repv", "trace pipeline on a lifted rational problem");
  AddSolveFlags(*repv, repv_flags, false);

  std::string family;
  int cn = 1, cd = 0, ce = 1, cm = 0;
  auto *count = app.add_subcommand("count", "closed-form path and eigenvalue counts");
  count->add_option("--family", family, "dense, pyramid or repv")->required();
  count->add_option("-n", cn, "dimension n");
  count->add_option("-d", cd, "x-degree d");
  count->add_option("-e", ce, "z-degree e");
  count->add_option("-m", cm, "number of rational terms m");

  std::string coeff_path;
  auto *roots = app.add_subcommand("roots", "roots of a univariate polynomial");
  roots->add_option("--coeffs,coeffs", coeff_path, "JSON file with ascending coefficients")
      ->required();

  std::string manifest_path, replay_dir = "replay";
  auto *replay = app.add_subcommand("replay", "re-run a solve from its manifest and compare");
  replay->add_option("--manifest,manifest", manifest_path, "manifest.json of a previous run")
      ->required();
  replay->add_option("--out-dir", replay_dir, "directory for the replayed results");

  try
  {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try
  {
    if (*solve)
    {
      return RunPipeline(Pipeline::Trace, solve_flags, args, out);
    }
    if (*beyn)
    {
      return RunPipeline(Pipeline::Beyn, beyn_flags, args, out);
    }
    if (*repv)
    {
      return RunPipeline(Pipeline::Repv, repv_flags, args, out);
    }
    if (*count)
    {
      return RunCount(family, cn, cd, ce, cm, out);
    }
    if (*roots)
    {
      return RunRoots(coeff_path, out);
    }
    if (*replay)
    {
      return RunReplay(manifest_path, replay_dir, out, err);
    }
  }
  catch (const Error &e)
  {
    err << "error: " << e.what() << "\n";
    return e.Kind() == ErrorKind::Validation ? kExitValidation : kExitNumerical;
  }
  catch (const std::exception &e)
  {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitValidation;
}

}  // namespace pepv::cli
