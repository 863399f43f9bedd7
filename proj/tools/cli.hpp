#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace skewkrylov::cli {

// sysexits-style exit codes.
inline constexpr int kOk = 0;
inline constexpr int kNotConverged = 2;
inline constexpr int kCheckFailed = 3;
inline constexpr int kUsage = 64;
inline constexpr int kDataError = 65;
inline constexpr int kNoInput = 66;
inline constexpr int kSoftware = 70;
inline constexpr int kCantCreate = 73;

/// Runs one subcommand (solve, verify, generate, compare). args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace skewkrylov::cli
