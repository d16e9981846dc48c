// Copyright the pepv authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <map>

#include "pepv/poly_core.hpp"
#include "pepv/trace_engine.hpp"
#include "test_support.hpp"

using namespace pepv;
using pepv::test::ExampleIntro;
using pepv::test::RandomT;
using pepv::test::RandomVector;
using pepv::test::Term;

namespace
{

// Brute-force expansion: map exponent -> ascending z-coefficients.
using Expanded = std::map<Exponent, CVector>;

void Accumulate(Expanded &out, const Exponent &e, const CVector &z, Complex sign)
{
  CVector &dst = out[e];
  if (dst.size() < z.size())
  {
    dst.resize(z.size(), 0.0);
  }
  for (std::size_t k = 0; k < z.size(); k++)
  {
    dst[k] += sign * z[k];
  }
}

Expanded ExpandRow(const PolyMatrixT &t, const ShiftVector &a, int i)
{
  Expanded out;
  for (int j = 0; j < t.n; j++)
  {
    for (const auto &term : t.Entry(i, j))
    {
      Exponent e = term.exponent;
      e[j]++;
      Accumulate(out, e, term.coeff.Coefficients(), 1.0);
    }
  }
  for (const auto &term : a.polys[i])
  {
    Accumulate(out, term.exponent, term.coeff.Coefficients(), -1.0);
  }
  for (auto it = out.begin(); it != out.end();)
  {
    while (!it->second.empty() && std::abs(it->second.back()) < 1e-15)
    {
      it->second.pop_back();
    }
    it = it->second.empty() ? out.erase(it) : std::next(it);
  }
  return out;
}

Expanded FromRow(const XPoly &row)
{
  Expanded out;
  for (const auto &t : row)
  {
    Accumulate(out, t.exponent, t.coeff.Coefficients(), 1.0);
  }
  return out;
}

// Naive per-term summation with std::pow.
CVector NaiveEval(const SquareSystem &s, const CVector &x, Complex z)
{
  CVector f(s.NumRows(), 0.0);
  for (int i = 0; i < s.NumRows(); i++)
  {
    for (const auto &t : s.Row(i))
    {
      Complex c = 0.0;
      for (std::size_t k = 0; k < t.coeff.Coefficients().size(); k++)
      {
        c += t.coeff.Coefficients()[k] * std::pow(z, static_cast<double>(k));
      }
      Complex m = 1.0;
      for (int k = 0; k < s.NumVars(); k++)
      {
        m *= std::pow(x[k], static_cast<double>(t.exponent[k]));
      }
      f[i] += c * m;
    }
  }
  return f;
}

}  // namespace

TEST_CASE("ZPoly: trimming and evaluation")
{
  const ZPoly p(CVector{1.0, 2.0, 0.0, 0.0});
  CHECK(p.Degree() == 1);
  CHECK(ZPoly().Degree() == -1);
  CHECK(ZPoly(CVector{0.0}).IsZero());
  CHECK(p(Complex(0.0, 1.0)) == Complex(1.0, 2.0));
  CHECK(p.Derivative(5.0) == Complex(2.0));
  ZPoly q = p * p;
  CHECK(q.Coefficients() == CVector{1.0, 4.0, 4.0});
}

TEST_CASE("assemble_pepv: first intro row with zero shift")
{
  const SquareSystem s = AssemblePepv(ExampleIntro(), ShiftVector::Zero(3));
  // x1^2 + z x1x2 + z x2^2 + x2x3 + x1x3 - x3^2
  const Expanded expected = {{{2, 0, 0}, {1.0}},      {{1, 1, 0}, {0.0, 1.0}},
                             {{0, 2, 0}, {0.0, 1.0}}, {{0, 1, 1}, {1.0}},
                             {{1, 0, 1}, {1.0}},      {{0, 0, 2}, {-1.0}}};
  CHECK(FromRow(s.Row(0)) == expected);
}

TEST_CASE("assemble_pepv: identity 1 x 1")
{
  PolyMatrixT t;
  t.n = 1;
  t.row_degrees = {0};
  t.entries = {{{Term({0}, {1.0})}}};
  const SquareSystem s = AssemblePepv(t, ShiftVector::Zero(1));
  REQUIRE(s.Row(0).size() == 1);
  CHECK(s.Row(0)[0].exponent == Exponent{1});
  CHECK(s.Row(0)[0].coeff == ZPoly::Constant(1.0));
}

TEST_CASE("assemble_pepv: random dense instance against brute-force expansion")
{
  const PolyMatrixT t = RandomT(3, {1, 1, 1}, 2, 11);
  const ShiftVector a = MakeShifts(t, ShiftStyle::Dense, 5)[0];
  const SquareSystem s = AssemblePepv(t, a);
  for (int i = 0; i < 3; i++)
  {
    const Expanded want = ExpandRow(t, a, i);
    const Expanded got = FromRow(s.Row(i));
    REQUIRE(want.size() == got.size());
    for (const auto &[e, c] : want)
    {
      REQUIRE(got.count(e) == 1);
      for (std::size_t k = 0; k < c.size(); k++)
      {
        CHECK(std::abs(got.at(e)[k] - c[k]) <= 1e-14);
      }
    }
  }
}

TEST_CASE("assemble_pepv: validation errors")
{
  PolyMatrixT t = ExampleIntro();
  t.entries[1][0].push_back(Term({2, 0, 0}, {1.0}));
  CHECK_THROWS_WITH_AS(AssemblePepv(t, ShiftVector::Zero(3)),
                       doctest::Contains("InhomogeneousRow(2)"), Error);

  ShiftVector a = ShiftVector::Zero(3);
  a.polys[2].push_back(Term({1, 1, 0}, {1.0}));
  CHECK_THROWS_WITH_AS(AssemblePepv(ExampleIntro(), a), doctest::Contains("DegreeMismatch(3)"),
                       Error);

  PolyMatrixT high = ExampleIntro();
  high.z_degree = 1;
  CHECK_THROWS_WITH_AS(high.Validate(), doctest::Contains("ZDegreeExceeded"), Error);
}

TEST_CASE("evaluate: printed eigenpair is nearly a zero")
{
  const SquareSystem s = AssemblePepv(ExampleIntro(), ShiftVector::Zero(3));
  const CVector f = s.Evaluate({1.0, -1.9218, -1.9646}, 0.5919);
  CHECK(Norm2(f) <= 5e-4);
}

TEST_CASE("evaluate: homogeneous system vanishes at the origin")
{
  const PolyMatrixT t = RandomT(3, {1, 2, 1}, 2, 12);
  const SquareSystem s = AssemblePepv(t, MakeShifts(t, ShiftStyle::Dense, 3)[1]);
  CHECK(NormInf(s.Evaluate(CVector(3, 0.0), Complex(0.3, 0.7))) == 0.0);
}

TEST_CASE("evaluate: matches naive summation, and T(x,z) x for zero shift")
{
  CounterRng rng(13);
  for (int trial = 0; trial < 100; trial++)
  {
    const int n = 2 + trial % 3;
    std::vector<int> deg(n);
    for (auto &d : deg)
    {
      d = static_cast<int>(rng.Below(3));
    }
    const PolyMatrixT t = RandomT(n, deg, 3, 100 + trial, 0.6);
    const SquareSystem s = AssemblePepv(t, ShiftVector::Zero(n));
    const CVector x = RandomVector(n, rng);
    const Complex z = rng.Gaussian();
    const CVector f = s.Evaluate(x, z);
    CVector all;
    CMatrix jac;
    s.EvaluateAll(x, z, all, jac, nullptr);
    const CVector tx = t.Evaluate(x, z) * x;
    const CVector naive = NaiveEval(s, x, z);
    const double scale = std::max(1.0, NormInf(naive));
    CHECK(pepv::test::MaxDiff(f, tx) <= 1e-13 * scale);
    CHECK(pepv::test::MaxDiff(f, naive) <= 1e-13 * scale);
    CHECK(pepv::test::MaxDiff(all, f) <= 1e-13 * scale);
  }
}

TEST_CASE("jacobian_x: examples and hand differentiation")
{
  // x1^2 - z
  const SquareSystem sq(1, {{Term({2}, {1.0}), Term({0}, {0.0, -1.0})}});
  CHECK(sq.JacobianX({3.0}, 0.0)(0, 0) == Complex(6.0));
  CHECK(sq.DerivativeZ({3.0}, 0.7)[0] == Complex(-1.0));

  const SquareSystem s = AssemblePepv(ExampleIntro(), ShiftVector::Zero(3));
  const CMatrix j = s.JacobianX({1.0, 1.0, 1.0}, 0.0);
  CHECK(j(0, 0) == Complex(3.0));
  CHECK(j(0, 1) == Complex(1.0));
  CHECK(j(0, 2) == Complex(0.0));
  CHECK(s.DerivativeZ({1.0, 1.0, 1.0}, 0.4)[0] == Complex(2.0));
}

TEST_CASE("jacobian_x and derivative_z: finite differences with O(h^2) scaling")
{
  CounterRng rng(14);
  const PolyMatrixT t = RandomT(3, {2, 1, 2}, 3, 15);
  const SquareSystem s = AssemblePepv(t, MakeShifts(t, ShiftStyle::Dense, 1)[0]);
  const CVector x = RandomVector(3, rng);
  const Complex z = rng.Gaussian();
  CVector f, dz;
  CMatrix jac;
  s.EvaluateAll(x, z, f, jac, &dz);

  auto fd_error = [&](double h)
  {
    double err = 0.0;
    for (int k = 0; k < 3; k++)
    {
      CVector xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      const CVector fp = s.Evaluate(xp, z), fm = s.Evaluate(xm, z);
      for (int i = 0; i < 3; i++)
      {
        err = std::max(err, std::abs((fp[i] - fm[i]) / (2.0 * h) - jac(i, k)));
      }
    }
    const CVector fp = s.Evaluate(x, z + h), fm = s.Evaluate(x, z - h);
    for (int i = 0; i < 3; i++)
    {
      err = std::max(err, std::abs((fp[i] - fm[i]) / (2.0 * h) - dz[i]));
    }
    return err;
  };
  const double e1 = fd_error(1e-3), e2 = fd_error(5e-4);
  CHECK(fd_error(1e-6) <= 1e-6);
  // Halving h divides the central-difference error by about 4.
  CHECK(e2 < e1 / 3.0);
}

TEST_CASE("Euler identity for homogeneous rows")
{
  CounterRng rng(16);
  for (int d : {0, 1, 2, 3})
  {
    const PolyMatrixT t = RandomT(3, {d, d, d}, 2, 200 + d);
    const SquareSystem s = AssemblePepv(t, ShiftVector::Zero(3));
    const CVector x = RandomVector(3, rng);
    const Complex z = rng.Gaussian();
    CVector f;
    CMatrix jac;
    s.EvaluateAll(x, z, f, jac, nullptr);
    const CVector jx = jac * x;
    for (int i = 0; i < 3; i++)
    {
      CHECK(std::abs(jx[i] - static_cast<double>(d + 1) * f[i]) <=
            1e-12 * std::max(1.0, std::abs(jx[i])));
    }
  }
}

TEST_CASE("Normalize merges duplicate exponents in a fixed order")
{
  const XPoly p = Normalize({Term({0, 1}, {1.0}), Term({1, 0}, {2.0}), Term({0, 1}, {-1.0})});
  REQUIRE(p.size() == 1);
  CHECK(p[0].exponent == Exponent{1, 0});
}

TEST_CASE("shift style names")
{
  CHECK(ShiftStyleFromString("dense") == ShiftStyle::Dense);
  CHECK(std::string(ToString(ShiftStyle::Monomial)) == "monomial");
  CHECK_THROWS_WITH_AS(ShiftStyleFromString("sparse"), doctest::Contains("InvalidShiftStyle"),
                       Error);
}
