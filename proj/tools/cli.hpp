// Copyright the pepv authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PEPV_TOOLS_CLI_HPP
#define PEPV_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace pepv::cli
{

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

// args excludes the program name.
int Run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace pepv::cli

#endif  // PEPV_TOOLS_CLI_HPP
