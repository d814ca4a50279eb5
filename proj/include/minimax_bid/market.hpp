#pragma once

#include <cstdint>
#include <vector>

#include "minimax_bid/values.hpp"

namespace minimax_bid {
namespace market {

enum class PricingRule { LAB, FRB };
enum class PaymentRule { PAB, UPA };

/// How marginal quantity at the clearing price is rationed across the bidders
/// tied at that price. ProRata is the default engine behaviour; the random
/// policy exists for the simulator and is seeded, never wall-clock.
struct TiePolicy {
    enum class Kind : std::uint8_t { ProRata, PreferBidder, DisfavorBidder, Random };
    Kind kind = Kind::ProRata;
    std::size_t bidder = 0;     // for PreferBidder / DisfavorBidder
    std::uint64_t seed = 0;     // for Random

    static TiePolicy pro_rata() { return {}; }
    static TiePolicy prefer(std::size_t i) { return {Kind::PreferBidder, i, 0}; }
    static TiePolicy disfavor(std::size_t i) { return {Kind::DisfavorBidder, i, 0}; }
    static TiePolicy random(std::uint64_t seed) { return {Kind::Random, 0, seed}; }
};

struct ClearingOutcome {
    double price = 0.0;      // market price under the chosen pricing rule
    double price_lab = 0.0;  // last accepted bid price
    double price_frb = 0.0;  // first rejected bid price
    std::vector<double> allocations;
    std::vector<double> transfers;
    PricingRule pricing = PricingRule::LAB;
    PaymentRule payment = PaymentRule::PAB;
};

/// Clears the market for quantity q_total among the given step bids. Bids
/// strictly above the market price are fully served, bids strictly below are
/// fully rejected, and quantity bid exactly at the price is rationed per the
/// tie policy.
ClearingOutcome clear(const std::vector<StepBid>& bids, double q_total, PricingRule pricing,
                      PaymentRule payment, TiePolicy tie = TiePolicy::pro_rata());

/// Sum of transfers to the auctioneer.
double revenue(const ClearingOutcome& outcome);

} // namespace market
} // namespace minimax_bid
