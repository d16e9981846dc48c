// Copyright the pepv authors.
// SPDX-License-Identifier: Apache-2.0

#include "pepv/path_count.hpp"

#include <algorithm>

#include "pepv/common.hpp"

namespace pepv
{

namespace
{

BigInt Pow(int base, int exp)
{
  BigInt r = 1;
  for (int k = 0; k < exp; k++)
  {
    r *= base;
  }
  return r;
}

void Require(bool ok, const char *what)
{
  if (!ok)
  {
    ThrowValidation("InvalidCountArguments", what);
  }
}

}  // namespace

const char *ToString(CountFamily f)
{
  switch (f)
  {
    case CountFamily::Dense:
      return "dense";
    case CountFamily::Pyramid:
      return "pyramid";
    case CountFamily::Repv:
      return "repv";
  }
  return "unknown";
}

CountFamily CountFamilyFromString(const std::string &s)
{
  if (s == "dense")
  {
    return CountFamily::Dense;
  }
  if (s == "pyramid")
  {
    return CountFamily::Pyramid;
  }
  if (s == "repv")
  {
    return CountFamily::Repv;
  }
  ThrowValidation("InvalidFamily", "expected dense, pyramid or repv, got '" + s + "'");
}

BigInt Binomial(int n, int k)
{
  if (k < 0 || n < 0 || k > n)
  {
    return 0;
  }
  k = std::min(k, n - k);
  BigInt r = 1;
  for (int i = 1; i <= k; i++)
  {
    // Exact at every step: r is C(n - k + i - 1, i - 1) before the update.
    r = r * (n - k + i) / i;
  }
  return r;
}

CountReport DenseCounts(int n, int d, int e)
{
  Require(n >= 1 && d >= 0 && e >= 1, "dense counts need n >= 1, d >= 0, e >= 1");
  CountReport r;
  r.family = CountFamily::Dense;
  r.n = n;
  r.d = d;
  r.e = e;
  r.delta = Pow(d + 1, n) - Pow(d, n);
  r.total_paths = r.delta * n;
  r.total_eigs = Pow(d + 1, n - 1) * n * e;
  return r;
}

CountReport PyramidCount(int n, int d, int e)
{
  Require(n >= 1 && d >= 0 && e >= 1, "pyramid count needs n >= 1, d >= 0, e >= 1");
  CountReport r;
  r.family = CountFamily::Pyramid;
  r.n = n;
  r.d = d;
  r.e = e;
  r.delta = Pow(d + 1, n - 1);
  r.total_paths = r.delta * n;
  r.total_eigs = Pow(d + 1, n - 1) * n * e;
  return r;
}

CountReport RepvCount(int n, int m)
{
  Require(n >= 1 && m >= 0, "repv count needs n >= 1, m >= 0");
  CountReport r;
  r.family = CountFamily::Repv;
  r.n = n;
  r.m = m;
  r.e = 1;
  r.delta = 0;
  for (int k = 0; k <= std::min(n - 1, m); k++)
  {
    r.delta += Binomial(n - 1, k) * Binomial(m, k);
  }
  r.total_paths = r.delta * n;
  r.total_eigs = Binomial(n + m, m + 1);
  return r;
}

}  // namespace pepv
