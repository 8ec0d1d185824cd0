#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace multispec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitGuard = 2;

/// Runs one subcommand. `args` excludes the program name. Tables go to
/// `out` (or the requested files), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace multispec::cli
