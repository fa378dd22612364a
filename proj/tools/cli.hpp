#pragma once

#include <ostream>

namespace spin_stirling::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitData = 4;

/// Runs the `spin_stirling` command line. Normal output goes to `out`,
/// diagnostics and regime warnings to `err`. Never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spin_stirling::cli
