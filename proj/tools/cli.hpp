#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace soliton::cli {

enum ExitCode { kOk = 0, kInvalid = 1, kVerifyFailed = 2 };

/// Runs one command line. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace soliton::cli
