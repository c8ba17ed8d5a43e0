/**
 * @file cli.hpp
 * @brief Entry point of the `anderson` command-line tool, callable in-process.
 *
 * Exit codes: 0 success, 2 parameter error, 3 convergence error,
 * 4 verification failure.
 */
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace anderson::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParameter = 2;
inline constexpr int kExitConvergence = 3;
inline constexpr int kExitVerification = 4;

/// args excludes the program name. Reports go to `out` (or --out), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace anderson::cli
