#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace minimax_bid {
namespace cli {

/// Full command-line dispatch. Returns the process exit code: 0 on success,
/// 2 on input validation errors (with a machine-readable error object on
/// stdout), 3 on solver non-convergence, 64 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cli
} // namespace minimax_bid
