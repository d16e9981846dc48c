// Copyright the pepv authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PEPV_COMMON_HPP
#define PEPV_COMMON_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pepv
{

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

inline constexpr double kPi = 3.14159265358979323846;

double Norm2(const CVector &v);
double NormInf(const CVector &v);

// Errors carry a machine-readable code (e.g. "InhomogeneousRow(2)") and a
// category that the CLI maps onto exit codes.
enum class ErrorKind
{
  Validation,
  Numerical
};

class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, std::string code, const std::string &detail);

  ErrorKind Kind() const { return kind; }
  const std::string &Code() const { return code; }

private:
  ErrorKind kind;
  std::string code;
};

[[noreturn]] void ThrowValidation(const std::string &code, const std::string &detail = {});
[[noreturn]] void ThrowNumerical(const std::string &code, const std::string &detail = {});

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so independent consumers never share state and
// runs replay exactly from the master seed.
class CounterRng
{
public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) : seed(seed), stream(stream)
  {
  }

  std::uint64_t NextU64();
  // Uniform in [0, 1).
  double Uniform();
  // Unit-modulus complex number with uniform angle.
  Complex UnitComplex();
  // Standard complex normal (independent N(0, 1/2) real and imaginary parts).
  Complex Gaussian();
  std::uint64_t Below(std::uint64_t bound);

  // Seed for a named sub-stream; used to give each column/shift its own generator.
  static std::uint64_t Derive(std::uint64_t seed, std::uint64_t stream);

private:
  std::uint64_t seed;
  std::uint64_t stream;
  std::uint64_t counter = 0;
};

}  // namespace pepv

#endif  // PEPV_COMMON_HPP
