#pragma once

#include <algorithm>
#include <vector>

#include "minimax_bid/rng.hpp"
#include "minimax_bid/values.hpp"

namespace test_helpers {

using minimax_bid::MarginalValueCurve;
using minimax_bid::SplitMix64;
using minimax_bid::StepBid;
using minimax_bid::ValueVector;

inline ValueVector random_values(SplitMix64& rng, std::size_t max_units = 4,
                                 double unit_quantity = 1.0) {
    const std::size_t m = 1 + rng.next_below(max_units);
    std::vector<double> v(m);
    for (auto& x : v) x = rng.next_double(0.05, 1.0);
    std::sort(v.rbegin(), v.rend());
    return ValueVector(std::move(v), unit_quantity);
}

inline MarginalValueCurve random_curve(SplitMix64& rng, std::size_t max_segments = 4,
                                       double q_total = 1.0) {
    const std::size_t n = 1 + rng.next_below(max_segments);
    std::vector<double> levels(n);
    for (auto& x : levels) x = rng.next_double(0.05, 1.0);
    std::sort(levels.rbegin(), levels.rend());
    std::vector<double> cuts(n - 1);
    for (auto& c : cuts) c = rng.next_double(0.05, 0.95) * q_total;
    std::sort(cuts.begin(), cuts.end());
    std::vector<MarginalValueCurve::Segment> segs;
    double prev = 0.0;
    std::size_t level_idx = 0;
    for (double c : cuts) {
        if (c - prev > 1e-3 * q_total) {
            segs.push_back({c, levels[level_idx]});
            prev = c;
        }
        ++level_idx;
    }
    segs.push_back({q_total, levels[n - 1]});
    return MarginalValueCurve(std::move(segs));
}

inline StepBid random_step_bid(SplitMix64& rng, double q_total, std::size_t max_points = 4) {
    const std::size_t n = 1 + rng.next_below(max_points);
    std::vector<double> qs(n);
    for (auto& q : qs) q = rng.next_double(0.05, 1.0) * q_total;
    std::sort(qs.begin(), qs.end());
    std::vector<double> bs(n);
    for (auto& b : bs) b = rng.next_double(0.0, 1.0);
    std::sort(bs.rbegin(), bs.rend());
    std::vector<StepBid::Point> pts;
    double prev = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (qs[k] - prev < 1e-6 * q_total) continue;
        pts.push_back({qs[k], bs[k]});
        prev = qs[k];
    }
    if (pts.empty()) pts.push_back({q_total, bs[0]});
    return StepBid(std::move(pts));
}

} // namespace test_helpers
