#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dq::cli {

enum ExitCode : int { ok = 0, check_failed = 1, invalid_input = 2, budget_exceeded = 3 };

/// args excludes the program name. Results go to out, error JSON to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dq::cli
