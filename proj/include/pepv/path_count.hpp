// Copyright the pepv authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PEPV_PATH_COUNT_HPP
#define PEPV_PATH_COUNT_HPP

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace pepv
{

using BigInt = boost::multiprecision::cpp_int;

enum class CountFamily
{
  Dense,
  Pyramid,
  Repv
};

const char *ToString(CountFamily f);
// Throws InvalidFamily.
CountFamily CountFamilyFromString(const std::string &s);

// total_paths = n * delta exactly. total_eigs is the eigenvalue count of
// the naive approach; it is zero where the family does not define it.
struct CountReport
{
  CountFamily family = CountFamily::Dense;
  int n = 0, d = 0, e = 0, m = 0;
  BigInt delta;
  BigInt total_paths;
  BigInt total_eigs;
};

// delta = (d+1)^n - d^n, total_eigs = e n (d+1)^(n-1).
CountReport DenseCounts(int n, int d, int e);
// delta = (d+1)^(n-1); total_eigs = e n (d+1)^(n-1) as for dense shifts,
// since it depends on the problem only.
CountReport PyramidCount(int n, int d, int e = 1);
// delta = sum_k C(n-1, k) C(m, k), total_eigs = C(n+m, m+1).
CountReport RepvCount(int n, int m);

BigInt Binomial(int n, int k);

}  // namespace pepv

#endif  // PEPV_PATH_COUNT_HPP
