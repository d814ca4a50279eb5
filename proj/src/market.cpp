#include "minimax_bid/market.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "minimax_bid/rng.hpp"

namespace minimax_bid {
namespace market {

namespace {

// Quantity bid at each level by each bidder, highest level first.
struct LevelSlice {
    double level;
    std::vector<double> width; // per bidder
};

std::vector<LevelSlice> merge_levels(const std::vector<StepBid>& bids) {
    std::map<double, std::vector<double>, std::greater<double>> slices;
    for (std::size_t i = 0; i < bids.size(); ++i) {
        double prev_q = 0.0;
        for (const auto& p : bids[i].points()) {
            auto& row = slices[p.b];
            if (row.empty()) row.assign(bids.size(), 0.0);
            row[i] += p.q - prev_q;
            prev_q = p.q;
        }
    }
    std::vector<LevelSlice> out;
    out.reserve(slices.size());
    for (auto& [level, width] : slices) out.push_back({level, std::move(width)});
    return out;
}

} // namespace

ClearingOutcome clear(const std::vector<StepBid>& bids, double q_total, PricingRule pricing,
                      PaymentRule payment, TiePolicy tie) {
    if (!(q_total > 0.0)) throw std::invalid_argument("clear: supply must be positive");
    for (const auto& b : bids)
        if (b.max_quantity() > q_total * (1.0 + kRangeSlack))
            throw std::invalid_argument("clear: bid demands more than the available supply");

    ClearingOutcome out;
    out.pricing = pricing;
    out.payment = payment;
    out.allocations.assign(bids.size(), 0.0);
    out.transfers.assign(bids.size(), 0.0);

    const auto slices = merge_levels(bids);

    // p_lab: the lowest accepted level, i.e. the level at which cumulative
    // weak demand first reaches supply. p_frb: the highest rejected level,
    // i.e. the highest level with strict excess demand. Both are 0 when
    // demand never reaches (exceeds) supply.
    double cumulative = 0.0;
    double p_lab = 0.0;
    double p_frb = 0.0;
    bool lab_found = false;
    for (const auto& s : slices) {
        const double width = std::accumulate(s.width.begin(), s.width.end(), 0.0);
        cumulative += width;
        if (!lab_found && cumulative >= q_total) {
            p_lab = s.level;
            lab_found = true;
        }
        if (cumulative > q_total) {
            p_frb = s.level;
            break;
        }
    }
    out.price_lab = p_lab;
    out.price_frb = p_frb;
    out.price = pricing == PricingRule::LAB ? p_lab : p_frb;

    // Serve everything strictly above the marginal level, then ration the
    // marginal level itself.
    const double p_star = out.price;
    double remaining = q_total;
    std::vector<double> marginal(bids.size(), 0.0);
    double marginal_total = 0.0;
    for (const auto& s : slices) {
        if (s.level > p_star) {
            for (std::size_t i = 0; i < bids.size(); ++i) {
                out.allocations[i] += s.width[i];
                remaining -= s.width[i];
            }
        } else if (s.level == p_star) {
            for (std::size_t i = 0; i < bids.size(); ++i) {
                marginal[i] += s.width[i];
                marginal_total += s.width[i];
            }
        }
    }
    remaining = std::max(remaining, 0.0);
    if (marginal_total > 0.0) {
        const double served = std::min(remaining, marginal_total);
        switch (tie.kind) {
            case TiePolicy::Kind::ProRata:
                for (std::size_t i = 0; i < bids.size(); ++i)
                    out.allocations[i] += served * marginal[i] / marginal_total;
                break;
            case TiePolicy::Kind::PreferBidder:
            case TiePolicy::Kind::DisfavorBidder: {
                const bool prefer = tie.kind == TiePolicy::Kind::PreferBidder;
                double left = served;
                // Favoured claimants first, then the rest pro rata.
                auto take = [&](std::size_t i) {
                    const double got = std::min(left, marginal[i]);
                    out.allocations[i] += got;
                    left -= got;
                };
                if (prefer && tie.bidder < bids.size()) take(tie.bidder);
                for (std::size_t i = 0; i < bids.size(); ++i)
                    if (i != tie.bidder) take(i);
                if (!prefer && tie.bidder < bids.size()) take(tie.bidder);
                break;
            }
            case TiePolicy::Kind::Random: {
                SplitMix64 rng(tie.seed);
                std::vector<std::size_t> order(bids.size());
                std::iota(order.begin(), order.end(), std::size_t{0});
                for (std::size_t i = order.size(); i > 1; --i)
                    std::swap(order[i - 1], order[rng.next_below(i)]);
                double left = served;
                for (std::size_t i : order) {
                    const double got = std::min(left, marginal[i]);
                    out.allocations[i] += got;
                    left -= got;
                }
                break;
            }
        }
    }

    for (std::size_t i = 0; i < bids.size(); ++i) {
        out.transfers[i] = payment == PaymentRule::PAB ? bids[i].pay_integral(out.allocations[i])
                                                       : p_star * out.allocations[i];
    }
    return out;
}

double revenue(const ClearingOutcome& outcome) {
    return std::accumulate(outcome.transfers.begin(), outcome.transfers.end(), 0.0);
}

} // namespace market
} // namespace minimax_bid
