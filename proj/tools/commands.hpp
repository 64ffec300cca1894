#pragma once

#include <ostream>

namespace surplus::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCounterexample = 1;
inline constexpr int kExitReference = 2;
inline constexpr int kExitInput = 3;

/// Parses the command line, runs one command and writes its report to
/// `out`. Errors go to `err` as {"error": message}.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace surplus::cli
