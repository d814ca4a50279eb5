#pragma once

#include <cstdint>
#include <vector>

#include "minimax_bid/rng.hpp"
#include "minimax_bid/values.hpp"

namespace minimax_bid {
namespace sim {

/// Truncated lognormal value distribution. The underlying normal shape sigma
/// is fixed and the location mu is solved numerically so the truncated mean
/// hits the target. Draws are by rejection from the untruncated lognormal,
/// one independent substream per draw.
struct TruncatedLognormal {
    double low = 0.5;
    double high = 2.0;
    double target_mean = 1.0;
    double sigma = 0.5;
    double mu = 0.0; // solved at construction

    TruncatedLognormal() = default;
    TruncatedLognormal(double low, double high, double target_mean, double sigma = 0.5);

    double sample(SplitMix64& rng) const;
    double truncated_mean(double mu_trial) const;
};

struct SimConfig {
    std::vector<int> n_bidders = {2, 5, 10};
    std::vector<int> bid_points = {1, 2, 3, 5, 10};
    double total_quantity = 100.0;
    TruncatedLognormal distribution;
    std::size_t draws = 10000;
    std::uint64_t seed = 0;
};

struct RevenueCell {
    int n = 0;
    int bid_points = 0;
    double rev_pab_mean = 0.0;
    double rev_upa_mean = 0.0;
    double share_upa_higher = 0.0;
};

/// Revenue comparison across formats: per (n, M) cell, draw constant marginal
/// values per bidder, bid the constrained minimax-loss bids of each format,
/// clear, and record revenue. Deterministic given the seed; bids are solved
/// once per M at unit value and rescaled, since constrained bid levels scale
/// linearly in the value and the bid points do not depend on it.
std::vector<RevenueCell> run_revenue_study(const SimConfig& cfg);

struct LossRow {
    int bid_points = 0;
    double loss_pab = 0.0; // normalized: loss / (v(0) * Q)
    double loss_upa = 0.0;
};

/// Normalized constrained minimax loss per format as the number of allowed
/// bid points grows.
std::vector<LossRow> run_loss_study(const std::vector<int>& bid_points,
                                    const MarginalValueCurve& v);

} // namespace sim
} // namespace minimax_bid
