// Copyright the pepv authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "pepv/problem_io.hpp"
#include "test_support.hpp"

using namespace pepv;
using nlohmann::json;
using pepv::test::Fixture;
namespace fs = std::filesystem;

namespace
{

struct Outcome
{
  int code = -1;
  std::string out, err;
};

Outcome RunCli(const std::vector<std::string> &args)
{
  std::ostringstream out, err;
  Outcome o;
  o.code = cli::Run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

// Fresh scratch directory per call; removed by the next run of the same tag.
fs::path Scratch(const std::string &tag)
{
  const fs::path p = fs::temp_directory_path() / ("pepv_cli_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

json ReadJson(const fs::path &p)
{
  return json::parse(ReadFile(p.string()));
}

std::vector<double> Column(const std::string &csv, int col)
{
  std::vector<double> v;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line))
  {
    std::istringstream row(line);
    std::string cell;
    for (int k = 0; k <= col; k++)
    {
      std::getline(row, cell, ',');
    }
    v.push_back(std::stod(cell));
  }
  return v;
}

}  // namespace

TEST_CASE("cli count: closed forms")
{
  Outcome o = RunCli({"count", "--family", "dense", "-n", "3", "-d", "2", "-e", "4"});
  REQUIRE(o.code == cli::kExitOk);
  CHECK(json::parse(o.out)["total_paths"] == 57);

  o = RunCli({"count", "--family", "pyramid", "-n", "10", "-d", "1", "-e", "5"});
  REQUIRE(o.code == cli::kExitOk);
  CHECK(json::parse(o.out)["total_paths"] == 5120);
  CHECK(json::parse(o.out)["total_eigs"] == 25600);

  o = RunCli({"count", "--family", "repv", "-n", "10", "-m", "2"});
  REQUIRE(o.code == cli::kExitOk);
  CHECK(json::parse(o.out)["total_paths"] == 550);
  CHECK(json::parse(o.out)["total_eigs"] == 220);

  o = RunCli({"count", "--family", "sparse", "-n", "2"});
  CHECK(o.code == cli::kExitValidation);
}

TEST_CASE("cli roots: quadratics and the intro resultant")
{
  const fs::path dir = Scratch("roots");
  const fs::path q1 = dir / "q1.json", q2 = dir / "q2.json";
  { std::ofstream(q1) << "[-4, 0, 1]"; }
  { std::ofstream(q2) << "[-2, 2, 1]"; }

  Outcome o = RunCli({"roots", q1.string()});
  REQUIRE(o.code == cli::kExitOk);
  std::vector<double> re = Column(o.out, 0);
  std::sort(re.begin(), re.end());
  REQUIRE(re.size() == 2);
  CHECK(re[0] == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(re[1] == doctest::Approx(2.0).epsilon(1e-14));

  o = RunCli({"roots", "--coeffs", q2.string()});
  re = Column(o.out, 0);
  std::sort(re.begin(), re.end());
  REQUIRE(re.size() == 2);
  CHECK(std::abs(re[0] - (-1.0 - std::sqrt(3.0))) <= 1e-13);
  CHECK(std::abs(re[1] - (-1.0 + std::sqrt(3.0))) <= 1e-13);

  o = RunCli({"roots", Fixture("example_1_1_resultant.json")});
  REQUIRE(o.code == cli::kExitOk);
  re = Column(o.out, 0);
  const std::vector<double> im = Column(o.out, 1);
  CHECK(re.size() == 12);
  int hits = 0;
  for (std::size_t i = 0; i < re.size(); i++)
  {
    hits += std::abs(re[i] - 2.3845154852) <= 1e-9 && std::abs(im[i]) <= 1e-9;
  }
  CHECK(hits == 1);
}

TEST_CASE("cli solve: intro problem over the ellipse")
{
  const fs::path dir = Scratch("solve");
  const Outcome o = RunCli({"solve", "--problem", Fixture("example_1_1.json"), "--config",
                            Fixture("ellipse_config.json"), "--out-dir", dir.string()});
  INFO(o.err);
  REQUIRE(o.code == cli::kExitOk);
  const std::string csv = ReadFile((dir / "eigenvalues.csv").string());
  CHECK(csv.find("0.5919305292") != std::string::npos);
  const json pairs = ReadJson(dir / "eigenpairs.json");
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0]["inside"] == true);
  const json manifest = ReadJson(dir / "manifest.json");
  CHECK(manifest["command"] == "solve");
  CHECK(manifest["config"]["N"] == 200);
  CHECK(manifest["rank"] == 1);
  CHECK(o.out.find("eigenpairs: 1") != std::string::npos);
}

TEST_CASE("cli solve: stored residuals round-trip through the residual operation")
{
  const fs::path dir = Scratch("roundtrip");
  const Outcome o = RunCli({"solve", Fixture("example_1_1.json"), "--contour-radius", "3", "-N",
                            "400", "-M", "4", "--out-dir", dir.string()});
  REQUIRE(o.code == cli::kExitOk);
  const PolyMatrixT t = LoadProblem(Fixture("example_1_1.json")).pepv;
  const json pairs = ReadJson(dir / "eigenpairs.json");
  CHECK(pairs.size() == 12);
  for (const auto &p : pairs)
  {
    CVector x;
    for (const auto &v : p["x"])
    {
      x.push_back(ParseComplex(v));
    }
    const double stored = p["residual"].get<double>();
    CHECK(std::abs(Residual(t, x, ParseComplex(p["z"])) - stored) <= 1e-12);
  }
}

TEST_CASE("cli solve: empty contour and invalid input")
{
  const fs::path dir = Scratch("empty");
  Outcome o = RunCli({"solve", Fixture("example_1_1.json"), "--contour-center", "10", "10",
                      "--contour-radius", "0.5", "-N", "64", "--out-dir", dir.string()});
  REQUIRE(o.code == cli::kExitOk);
  CHECK(ReadJson(dir / "eigenpairs.json").empty());
  CHECK(o.out.find("RankZero") != std::string::npos);
  CHECK(ReadJson(dir / "manifest.json")["notes"][0].get<std::string>().find("RankZero") == 0);

  o = RunCli({"solve", Fixture("inhomogeneous_row2.json"), "--contour-radius", "1", "--out-dir",
              dir.string()});
  CHECK(o.code == cli::kExitValidation);
  CHECK(o.err.find("InhomogeneousRow(2)") != std::string::npos);

  o = RunCli({"solve", Fixture("example_1_1.json"), "--out-dir", dir.string()});
  CHECK(o.code == cli::kExitValidation);
  CHECK(o.err.find("MissingContour") != std::string::npos);

  o = RunCli({"solve", Fixture("example_1_1.json"), "--contour-radius", "1", "-N", "3"});
  CHECK(o.code == cli::kExitValidation);

  o = RunCli({"repv", Fixture("example_1_1.json"), "--contour-radius", "1"});
  CHECK(o.code == cli::kExitValidation);
  CHECK(o.err.find("WrongProblemKind") != std::string::npos);
}

TEST_CASE("cli replay: identical eigenpairs from the manifest")
{
  const fs::path dir = Scratch("replay");
  const Outcome first = RunCli({"solve", Fixture("example_1_1.json"), "--config",
                                Fixture("ellipse_config.json"), "--seed", "7", "--out-dir",
                                (dir / "a").string()});
  REQUIRE(first.code == cli::kExitOk);
  const Outcome again = RunCli(
      {"replay", (dir / "a" / "manifest.json").string(), "--out-dir", (dir / "b").string()});
  INFO(again.out << again.err);
  CHECK(again.code == cli::kExitOk);
  CHECK(again.out.find("replay: identical eigenpairs.json") != std::string::npos);
  CHECK(ReadJson(dir / "b" / "manifest.json")["seed"] == 7);
}

TEST_CASE("cli beyn: diagonal pencil")
{
  const fs::path dir = Scratch("beyn");
  const Outcome o = RunCli({"beyn", Fixture("diag_pencil.json"), "--contour-radius", "1", "-N",
                            "64", "-M", "1", "--out-dir", dir.string()});
  REQUIRE(o.code == cli::kExitOk);
  const json pairs = ReadJson(dir / "eigenpairs.json");
  REQUIRE(pairs.size() == 1);
  CHECK(std::abs(ParseComplex(pairs[0]["z"]) - 0.3) <= 1e-12);
  CHECK(std::abs(ParseComplex(pairs[0]["x"][0]) - 1.0) <= 1e-12);
  CHECK(std::abs(ParseComplex(pairs[0]["x"][1])) <= 1e-12);
}

TEST_CASE("cli repv: path counts and the degenerate warning")
{
  const fs::path dir = Scratch("repv");
  Outcome o = RunCli({"repv", Fixture("repv_3x2.json"), "--contour-radius", "2", "-N", "100", "-M",
                      "3", "--out-dir", (dir / "a").string()});
  REQUIRE(o.code == cli::kExitOk);
  const json m = ReadJson(dir / "a" / "manifest.json");
  CHECK(m["predicted_delta"] == 6);
  REQUIRE(m["columns"].size() == 3);
  for (const auto &c : m["columns"])
  {
    CHECK(c["paths"] == 6);
  }

  o = RunCli({"repv", Fixture("repv_degenerate.json"), "--contour-radius", "2", "-N", "100", "-M",
              "1", "--out-dir", (dir / "b").string()});
  REQUIRE(o.code == cli::kExitOk);
  bool warned = false;
  const json degenerate = ReadJson(dir / "b" / "manifest.json");
  for (const auto &w : degenerate["warnings"])
  {
    warned = warned || w.get<std::string>().find("DenominatorDegenerate") != std::string::npos;
  }
  CHECK(warned);
}
