// Copyright the pepv authors.
// SPDX-License-Identifier: Apache-2.0

#include "pepv/common.hpp"

#include <cmath>

namespace pepv
{

double Norm2(const CVector &v)
{
  double scale = 0.0;
  for (const auto &c : v)
  {
    scale = std::max(scale, std::abs(c));
  }
  if (scale == 0.0)
  {
    return 0.0;
  }
  double sum = 0.0;
  for (const auto &c : v)
  {
    sum += std::norm(c / scale);
  }
  return scale * std::sqrt(sum);
}

double NormInf(const CVector &v)
{
  double m = 0.0;
  for (const auto &c : v)
  {
    m = std::max(m, std::abs(c));
  }
  return m;
}

Error::Error(ErrorKind kind, std::string code, const std::string &detail)
  : std::runtime_error(detail.empty() ? code : code + ": " + detail), kind(kind),
    code(std::move(code))
{
}

void ThrowValidation(const std::string &code, const std::string &detail)
{
  throw Error(ErrorKind::Validation, code, detail);
}

void ThrowNumerical(const std::string &code, const std::string &detail)
{
  throw Error(ErrorKind::Numerical, code, detail);
}

namespace
{

// SplitMix64 finalizer.
std::uint64_t Mix(std::uint64_t z)
{
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t CounterRng::NextU64()
{
  const std::uint64_t key = Mix(seed ^ Mix(stream + 0x632be59bd9b4e019ULL));
  return Mix(key + 0x9e3779b97f4a7c15ULL * (++counter));
}

double CounterRng::Uniform()
{
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

Complex CounterRng::UnitComplex()
{
  return std::polar(1.0, 2.0 * kPi * Uniform());
}

Complex CounterRng::Gaussian()
{
  // Box-Muller; 1 - u keeps the logarithm finite.
  const double u = 1.0 - Uniform();
  const double v = Uniform();
  const double r = std::sqrt(-std::log(u));
  return std::polar(r, 2.0 * kPi * v);
}

std::uint64_t CounterRng::Below(std::uint64_t bound)
{
  return bound == 0 ? 0 : NextU64() % bound;
}

std::uint64_t CounterRng::Derive(std::uint64_t seed, std::uint64_t stream)
{
  return Mix(Mix(seed) ^ Mix(stream * 0xd1b54a32d192ed03ULL + 1));
}

}  // namespace pepv
