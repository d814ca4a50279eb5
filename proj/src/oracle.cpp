#include "minimax_bid/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "minimax_bid/rng.hpp"

namespace minimax_bid {
namespace oracle {

double SupplyCurve::level_at(double x) const {
    for (const auto& s : steps)
        if (x < s.upto) return s.p;
    return 0.0;
}

StepBid SupplyCurve::as_step_bid() const {
    std::vector<StepBid::Point> pts;
    pts.reserve(steps.size());
    for (const auto& s : steps) pts.push_back({s.upto, s.p});
    return StepBid(std::move(pts));
}

SupplyCurve aggregate_demand(const std::vector<StepBid>& bids, double q_total) {
    // Widths per level, served highest level first, cut off at q_total.
    std::map<double, double, std::greater<double>> widths;
    for (const auto& b : bids) {
        double prev_q = 0.0;
        for (const auto& p : b.points()) {
            widths[p.b] += p.q - prev_q;
            prev_q = p.q;
        }
    }
    SupplyCurve out;
    double q = 0.0;
    for (const auto& [level, width] : widths) {
        const double next_q = std::min(q_total, q + width);
        if (next_q > q) out.steps.push_back({next_q, level});
        q = next_q;
        if (q >= q_total) break;
    }
    return out;
}

double best_response_utility(const SupplyCurve& supply, const MarginalValueCurve& v) {
    const double q_total = v.total_quantity();
    std::vector<double> candidates = v.breakpoints();
    for (const auto& s : supply.steps) {
        const double mirrored = q_total - s.upto;
        if (mirrored >= 0.0 && mirrored <= q_total) candidates.push_back(mirrored);
    }
    candidates.push_back(0.0);
    candidates.push_back(q_total);

    double best = 0.0;
    for (double q : candidates) {
        const double price = supply.level_at(q_total - q);
        best = std::max(best, v.value_mass(0.0, q) - q * price);
    }
    return best;
}

namespace {

double realized_utility(const StepBid& bid, const SupplyCurve& supply,
                        const MarginalValueCurve& v, Format format, market::TiePolicy tie) {
    const double q_total = v.total_quantity();
    std::vector<StepBid> bids{bid, supply.as_step_bid()};
    const auto outcome =
        market::clear(bids, q_total,
                      market::PricingRule::LAB,
                      format == Format::PAB ? market::PaymentRule::PAB : market::PaymentRule::UPA,
                      tie);
    return v.value_mass(0.0, outcome.allocations[0]) - outcome.transfers[0];
}

// Regret of the bid against one supply: best-response utility minus realized
// utility under the regret-maximal tie resolution (the sup convention counts
// ties whichever way hurts more).
double regret_against(const StepBid& bid, const SupplyCurve& supply, const MarginalValueCurve& v,
                      Format format) {
    const double best = best_response_utility(supply, v);
    const double u_hi = realized_utility(bid, supply, v, format, market::TiePolicy::prefer(0));
    const double u_lo = realized_utility(bid, supply, v, format, market::TiePolicy::disfavor(0));
    return best - std::min(u_hi, u_lo);
}

// Opponents bid `price` for their first q_kept units and nothing beyond.
// Zero-price steps are kept: they still claim supply when rationed at a zero
// clearing price, which caps the bidder's allocation at Q - q_kept.
SupplyCurve two_step_supply(double q_kept, double price) {
    SupplyCurve s;
    if (q_kept > 0.0) s.steps.push_back({q_kept, price});
    return s;
}

} // namespace

BruteForceResult brute_force_max_loss(const StepBid& bid, const MarginalValueCurve& v,
                                      Format format, std::size_t q_grid, std::size_t p_grid,
                                      std::uint64_t seed) {
    if (q_grid < 8 || p_grid < 8) throw std::domain_error("oracle: grids must have at least 8 points");
    const double q_total = v.total_quantity();
    const double top = v.value_at(0.0);
    BruteForceResult result;

    auto consider = [&](const SupplyCurve& s) {
        const double r = regret_against(bid, s, v, format);
        if (r > result.max_regret) {
            result.max_regret = r;
            result.witness = s;
        }
    };

    // (a) Two-step supplies: opponents bid one price for Q - q units and zero
    // beyond, leaving q for the bidder. Prices probe the bid's right limit
    // and left level at q plus a blocking price nobody outbids.
    std::vector<double> quantities;
    for (std::size_t j = 0; j <= q_grid; ++j)
        quantities.push_back(q_total * static_cast<double>(j) / static_cast<double>(q_grid));
    for (double q : bid.quantities())
        if (q <= q_total) quantities.push_back(q);
    for (double q : v.breakpoints()) quantities.push_back(q);
    std::sort(quantities.begin(), quantities.end());
    quantities.erase(std::unique(quantities.begin(), quantities.end()), quantities.end());

    const double blocking = top + 1.0;
    for (double q : quantities) {
        const double kept = q_total - q;
        for (double price : {bid.level_at(q), bid.level_before(q), blocking}) {
            consider(two_step_supply(kept, price));
        }
    }

    // (b) Random monotone three-step supplies on the price grid.
    SplitMix64 rng(seed);
    const std::size_t draws = 4 * p_grid;
    for (std::size_t d = 0; d < draws; ++d) {
        double p1 = top * static_cast<double>(rng.next_below(p_grid + 1)) / static_cast<double>(p_grid);
        double p2 = top * static_cast<double>(rng.next_below(p_grid + 1)) / static_cast<double>(p_grid);
        double p3 = top * static_cast<double>(rng.next_below(p_grid + 1)) / static_cast<double>(p_grid);
        double q1 = rng.next_double(0.0, q_total);
        double q2 = rng.next_double(0.0, q_total);
        if (p1 < p2) std::swap(p1, p2);
        if (p2 < p3) std::swap(p2, p3);
        if (p1 < p2) std::swap(p1, p2);
        if (q1 > q2) std::swap(q1, q2);
        SupplyCurve s;
        if (q1 > 0.0) s.steps.push_back({q1, p1});
        if (q2 > q1) s.steps.push_back({q2, p2});
        if (q_total > q2) s.steps.push_back({q_total, p3});
        consider(s);
    }

    return result;
}

double default_tolerance(const MarginalValueCurve& v, std::size_t q_grid) {
    return 2.0 * (v.total_quantity() / static_cast<double>(q_grid)) * v.value_at(0.0);
}

VerifyReport verify(const StepBid& bid, const MarginalValueCurve& v, Format format, double tol,
                    std::size_t q_grid, std::size_t p_grid, std::uint64_t seed) {
    VerifyReport report;
    report.analytic = regret::max_loss(format, bid, v);
    auto bf = brute_force_max_loss(bid, v, format, q_grid, p_grid, seed);
    report.brute_force = bf.max_regret;
    report.witness = std::move(bf.witness);
    report.difference = report.analytic - report.brute_force;
    report.tolerance = tol;
    report.pass = std::abs(report.difference) <= tol;
    return report;
}

} // namespace oracle
} // namespace minimax_bid
