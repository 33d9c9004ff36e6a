#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace noisy_amp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

/// Runs the command line `args` (without the program name). Data goes to the
/// output file, or to `out` for "-o -"; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace noisy_amp::cli
