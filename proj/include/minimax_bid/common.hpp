#pragma once

#include <stdexcept>
#include <string>

namespace minimax_bid {

// Monotonicity violations up to this absolute size are repaired (clamped) at
// construction; anything larger is a hard input error. Solvers emit values at
// bisection tolerance, so exact monotonicity cannot be expected from them.
inline constexpr double kMonotoneRepairTol = 1e-12;

// Slack allowed when checking range preconditions such as 0 <= a <= b <= Q.
inline constexpr double kRangeSlack = 1e-9;

/// Thrown when an iterative solver fails to converge or a bracket is invalid.
class solver_error : public std::runtime_error {
  public:
    explicit solver_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace minimax_bid
