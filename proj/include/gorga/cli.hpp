#pragma once

#include <ostream>

namespace gorga {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitValidation = 3;

// Entry point of the gorga command; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gorga
