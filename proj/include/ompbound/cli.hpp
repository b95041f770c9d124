#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ompbound {

/// Dispatches one CLI invocation. argv excludes the program name.
/// Exit codes: 0 success, 1 usage error, 2 validation/domain error,
/// 3 capacity error. On failure a one-line diagnostic goes to err and
/// nothing is written to out.
int run_command(const std::vector<std::string>& argv, std::ostream& out,
                std::ostream& err);

}  // namespace ompbound
