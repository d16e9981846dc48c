// Copyright the pepv authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "pepv/problem_io.hpp"
#include "test_support.hpp"

using namespace pepv;
using pepv::test::Fixture;

TEST_CASE("problem io: intro fixture matches the hand-built matrix")
{
  const Problem p = LoadProblem(Fixture("example_1_1.json"));
  REQUIRE(p.kind == ProblemKind::Pepv);
  const PolyMatrixT want = pepv::test::ExampleIntro();
  REQUIRE(p.pepv.n == want.n);
  CHECK(p.pepv.row_degrees == want.row_degrees);
  CounterRng rng(91);
  const CVector x = pepv::test::RandomVector(3, rng);
  for (Complex z : {Complex(0.3, -0.2), Complex(-1.7, 0.4)})
  {
    CHECK(pepv::test::MaxDiff(p.pepv.Evaluate(x, z) * x, want.Evaluate(x, z) * x) <= 1e-13);
  }
}

TEST_CASE("problem io: json round trip preserves T")
{
  const PolyMatrixT t = pepv::test::RandomT(3, {1, 2, 1}, 2, 92);
  const Problem back = ParseProblem(PepvToJson(t).dump(1));
  CounterRng rng(92);
  const CVector x = pepv::test::RandomVector(3, rng);
  const Complex z(0.6, 0.9);
  CHECK(pepv::test::MaxDiff(back.pepv.Evaluate(x, z) * x, t.Evaluate(x, z) * x) <= 1e-14);
}

TEST_CASE("problem io: inhomogeneous row reports its source line")
{
  const std::string path = Fixture("inhomogeneous_row2.json");
  try
  {
    LoadProblem(path);
    FAIL("expected a validation error");
  }
  catch (const Error &e)
  {
    CHECK(e.Kind() == ErrorKind::Validation);
    CHECK(e.Code() == "InhomogeneousRow(2)");
    // Row 2 starts on line 6 of the fixture.
    CHECK(std::string(e.what()).find(path + ":6:") != std::string::npos);
  }
}

TEST_CASE("problem io: malformed documents")
{
  CHECK_THROWS_WITH_AS(ParseProblem("{\"n\": 2,", "bad.json"), doctest::Contains("ParseError"), Error);
  CHECK_THROWS_WITH_AS(ParseProblem("{\"n\": 2}"), doctest::Contains("MissingField"), Error);
  CHECK_THROWS_WITH_AS(ParseProblem("{\"kind\": \"nep\", \"n\": 1}"),
                       doctest::Contains("InvalidKind"), Error);
  CHECK_THROWS_WITH_AS(LoadProblem("/nonexistent/problem.json"), doctest::Contains("FileNotFound"),
                       Error);
}

TEST_CASE("problem io: repv fixtures")
{
  const Problem p = LoadProblem(Fixture("repv_3x2.json"));
  REQUIRE(p.kind == ProblemKind::Repv);
  CHECK(p.repv.n == 3);
  CHECK(p.repv.m == 2);
  CHECK(p.repv.t.size() == 2);
  CHECK(p.repv.r[1].size() == 3);
  CHECK_NOTHROW(p.repv.Validate());
  CHECK(std::abs(p.repv.a(0, 0) - Complex(1.973605, 0.413119)) == 0.0);
}

TEST_CASE("problem io: contours")
{
  const nlohmann::json circle = {{"kind", "circle"}, {"center", {1.0, -2.0}}, {"radius", 0.5}};
  const Contour c = ParseContour(circle);
  CHECK(c.Kind() == ContourKind::Circle);
  CHECK(c.Center() == Complex(1.0, -2.0));
  CHECK(ContourToJson(c) == circle);

  const Contour e = ParseContour(
      {{"kind", "ellipse"}, {"center", 0.6}, {"radii", {0.4, 0.3}}, {"rotation", 0.1}});
  CHECK(e.Kind() == ContourKind::Ellipse);
  CHECK(e.RadiusY() == 0.3);
  CHECK(e.Rotation() == 0.1);
  CHECK(ParseContour(ContourToJson(e)).Contains(0.9));

  CHECK_THROWS_WITH_AS(ParseContour({{"kind", "square"}, {"center", 0.0}}),
                       doctest::Contains("InvalidContour"), Error);
  CHECK_THROWS_WITH_AS(ParseContour({{"kind", "ellipse"}, {"center", 0.0}, {"radii", {1.0}}}),
                       doctest::Contains("InvalidContour"), Error);
  CHECK_THROWS_AS(ParseContour({{"kind", "circle"}, {"center", 0.0}, {"radius", -1.0}}), Error);
}

TEST_CASE("problem io: complex numbers and coefficients")
{
  CHECK(ParseComplex(2.5) == Complex(2.5, 0.0));
  CHECK(ParseComplex({1.0, -3.0}) == Complex(1.0, -3.0));
  CHECK(ParseComplex(ComplexToJson(Complex(0.25, 7.0))) == Complex(0.25, 7.0));
  CHECK_THROWS_WITH_AS(ParseComplex("x"), doctest::Contains("InvalidComplex"), Error);

  const CVector a = ParseCoefficients("[1, [0, 2], -3]");
  REQUIRE(a.size() == 3);
  CHECK(a[1] == Complex(0.0, 2.0));
  const CVector r = ParseCoefficients(ReadFile(Fixture("example_1_1_resultant.json")));
  CHECK(r.size() == 13);
  CHECK(r[12] == 4.0);
  CHECK_THROWS_WITH_AS(ParseCoefficients("[1,"), doctest::Contains("ParseError"), Error);
}
