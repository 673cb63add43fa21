#pragma once

#include <ostream>

namespace dop::cli {

// Exit codes.
constexpr int kOk = 0;
constexpr int kDataError = 1;
constexpr int kUsageError = 2;
constexpr int kVerificationFailure = 3;

// Parses argv (argv[0] is the program name) and runs one subcommand. Reports
// go to `out` unless --out is given; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dop::cli
