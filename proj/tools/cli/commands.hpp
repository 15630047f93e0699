#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace barrierwalk::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitBadArguments = 2;
inline constexpr int kExitComputation = 3;

// Entry point shared by the executable and the tests. args excludes argv[0].
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace barrierwalk::cli
