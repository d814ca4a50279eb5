#pragma once

#include <cstddef>

#include "minimax_bid/regret.hpp"
#include "minimax_bid/values.hpp"

namespace minimax_bid {
namespace frb {

/// Conditional regrets under first-rejected-bid pricing, for k units won,
/// k in 0..M-1. Only the first rejected bid b_{k+1} matters: overbidding
/// regret is k * b_{k+1}, underbidding regret the surplus above b_{k+1} on
/// the remaining units. Requires bids weakly below values; the analysis does
/// not cover bids above value.
ConditionalRegret frb_regrets(const BidVector& b, const ValueVector& v, std::size_t k);

/// Maximal loss of a below-value bid under first-rejected-bid pricing.
double max_loss(const BidVector& b, const ValueVector& v);

/// Unique conditional regret-minimizing bid vector: b_1 = v_1 and each later
/// level equates over- and underbidding regret for its unit.
BidVector solve_frb(const ValueVector& v);

} // namespace frb
} // namespace minimax_bid
