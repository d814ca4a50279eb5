#include "minimax_bid/upa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "minimax_bid/roots.hpp"

namespace minimax_bid {
namespace upa {

namespace {

double positive_part(double x) { return x > 0.0 ? x : 0.0; }

} // namespace

BidVector solve_cross_conditional(const ValueVector& v) {
    const std::size_t m = v.units();
    const auto& vals = v.entries();
    std::vector<double> b(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double units = static_cast<double>(i + 1);
        auto residual = [&](double x) {
            double under = 0.0;
            for (std::size_t j = i; j < m; ++j) under += positive_part(vals[j] - x);
            return units * x - under;
        };
        b[i] = bisect_increasing(residual, 0.0, vals.empty() ? 0.0 : vals[0]);
    }
    // Clean up bisection-level monotonicity noise before constructing.
    for (std::size_t i = 1; i < m; ++i) b[i] = std::min(b[i], b[i - 1]);
    return BidVector(std::move(b), v.unit_quantity());
}

MinimaxBand multiunit_minimax_band(const ValueVector& v) {
    const std::size_t m = v.units();
    const auto& vals = v.entries();
    const double w = v.unit_quantity();

    // Smallest level whose underbidding regret at q_{k-1} is at most L.
    auto lowest_feasible = [&](std::size_t k, double level_cap, double loss) {
        auto excess = [&](double x) {
            double under = 0.0;
            for (std::size_t j = k; j < m; ++j) under += positive_part(vals[j] - x);
            return under * w - loss;
        };
        if (excess(0.0) <= 0.0) return 0.0;
        return bisect_decreasing(excess, 0.0, level_cap);
    };

    auto feasible = [&](double loss) {
        for (std::size_t k = 0; k < m; ++k) {
            const double q_k = w * static_cast<double>(k + 1);
            if (lowest_feasible(k, vals[0], loss) > loss / q_k + 1e-15) return false;
        }
        return true;
    };

    double lo = 0.0;
    double hi = w * static_cast<double>(m) * std::max(vals[0], 1e-30);
    for (int i = 0; i < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? hi : lo) = mid;
    }

    MinimaxBand band;
    band.loss = hi;
    band.unit_quantity = w;
    band.lo.resize(m);
    band.hi.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double q_k = w * static_cast<double>(k + 1);
        band.lo[k] = lowest_feasible(k, vals[0], band.loss);
        band.hi[k] = std::max(band.loss / q_k, band.lo[k]);
    }
    // Both edges are decreasing in k up to bisection noise; clip to enforce it.
    for (std::size_t k = 1; k < m; ++k) {
        band.lo[k] = std::min(band.lo[k], band.lo[k - 1]);
        band.hi[k] = std::min(band.hi[k], band.hi[k - 1]);
        band.hi[k] = std::max(band.hi[k], band.lo[k]);
    }
    return band;
}

double lower_iso_level(const MarginalValueCurve& v, double loss, double q, bool* clamped) {
    const double q_total = v.total_quantity();
    if (clamped != nullptr) *clamped = false;
    if (v.clipped_surplus(0.0, q, q_total) < loss) {
        if (clamped != nullptr) *clamped = true;
        return 0.0;
    }
    return bisect_decreasing(
        [&](double c) { return v.clipped_surplus(c, q, q_total) - loss; }, 0.0, v.value_at(0.0));
}

IsoLossCurves iso_loss(const MarginalValueCurve& v, double loss, std::size_t grid) {
    const double q_total = v.total_quantity();
    if (!(loss > 0.0) || loss > v.value_mass(0.0, q_total) * (1.0 + kRangeSlack))
        throw std::domain_error("iso_loss: loss must lie in (0, total surplus]");
    if (grid < 2) throw std::domain_error("iso_loss: grid too small");

    IsoLossCurves curves;
    curves.loss = loss;
    curves.q.resize(grid + 1);
    curves.upper.resize(grid + 1);
    curves.lower.resize(grid + 1);
    curves.lower_clamped.resize(grid + 1);
    for (std::size_t j = 0; j <= grid; ++j) {
        const double q = q_total * static_cast<double>(j) / static_cast<double>(grid);
        curves.q[j] = q;
        curves.upper[j] = q > 0.0 ? loss / q : std::numeric_limits<double>::infinity();
        bool clamped = false;
        curves.lower[j] = lower_iso_level(v, loss, q, &clamped);
        curves.lower_clamped[j] = clamped;
    }
    return curves;
}

namespace {

struct Staircase {
    std::vector<double> q;
    std::vector<double> b;
    double terminal_residual = 0.0; // surplus left past q_M minus the loss
};

// Build the iso-loss staircase for a trial loss: each level starts on the
// lower curve at the previous point and extends to the upper curve.
Staircase build_staircase(const MarginalValueCurve& v, std::size_t m, double loss) {
    const double q_total = v.total_quantity();
    Staircase s;
    s.q.reserve(m);
    s.b.reserve(m);
    double prev_q = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double level = lower_iso_level(v, loss, prev_q);
        const double q_k = level > 0.0 ? std::min(q_total, loss / level) : q_total;
        s.q.push_back(q_k);
        s.b.push_back(level);
        prev_q = q_k;
        if (level <= 0.0) break; // bids hit zero before Q; effective M reduced
    }
    s.terminal_residual = v.clipped_surplus(0.0, prev_q, q_total) - loss;
    return s;
}

} // namespace

ConstrainedSolution solve_constrained(const MarginalValueCurve& v, std::size_t points) {
    if (points == 0) throw std::domain_error("upa: need at least one bid point");
    const double q_total = v.total_quantity();
    const double mass = v.value_mass(0.0, q_total);

    auto residual = [&](double loss) { return build_staircase(v, points, loss).terminal_residual; };
    if (!(residual(1e-12 * mass) > 0.0) || !(residual(mass) < 0.0))
        throw solver_error("upa: staircase residual does not bracket a root");

    RootStats stats;
    const double loss = bisect_decreasing(residual, 0.0, mass, &stats);

    Staircase s = build_staircase(v, points, loss);
    ConstrainedSolution sol;
    sol.loss = loss;
    sol.diagnostics.iterations = stats.iterations;
    sol.diagnostics.residual = std::abs(s.terminal_residual);
    if (s.b.size() < points)
        sol.diagnostics.warnings.push_back("bid hit zero before Q; effective bid points reduced");

    std::vector<StepBid::Point> pts;
    pts.reserve(s.q.size());
    double prev_q = 0.0;
    for (std::size_t k = 0; k < s.q.size(); ++k) {
        if (s.b[k] <= 0.0) break;
        if (s.q[k] <= prev_q + 1e-12 * q_total) {
            sol.diagnostics.warnings.push_back("degenerate staircase step dropped");
            continue;
        }
        pts.push_back({s.q[k], s.b[k]});
        prev_q = s.q[k];
    }
    sol.bid = StepBid(std::move(pts));
    return sol;
}

StepBid solve_unconstrained_cross(const MarginalValueCurve& v, std::size_t grid) {
    if (grid < 16) throw std::domain_error("upa: need at least 16 grid points");
    const double q_total = v.total_quantity();
    const double top = v.value_at(0.0);

    auto cross_level = [&](double q) {
        return bisect_increasing(
            [&](double b) { return q * b - v.clipped_surplus(b, q, q_total); }, 0.0, top);
    };

    std::vector<StepBid::Point> pts(grid);
    double prev_level = top;
    for (std::size_t j = 0; j < grid; ++j) {
        const double q_left = q_total * static_cast<double>(j) / static_cast<double>(grid);
        const double q_right = q_total * static_cast<double>(j + 1) / static_cast<double>(grid);
        const double level = std::min(cross_level(q_left), prev_level);
        pts[j] = {q_right, level};
        prev_level = level;
    }
    return StepBid(std::move(pts));
}

UnconstrainedMinimax unconstrained_minimax(const MarginalValueCurve& v, std::size_t grid) {
    if (grid < 16) throw std::domain_error("upa: need at least 16 grid points");
    const double q_total = v.total_quantity();
    const double top = v.value_at(0.0);

    auto cross_level = [&](double q) {
        return bisect_increasing(
            [&](double b) { return q * b - v.clipped_surplus(b, q, q_total); }, 0.0, top);
    };
    auto over_regret = [&](double q) { return q * cross_level(q); };

    double best_q = 0.0;
    double best = 0.0;
    for (std::size_t j = 0; j <= grid; ++j) {
        const double q = q_total * static_cast<double>(j) / static_cast<double>(grid);
        const double r = over_regret(q);
        if (r > best) {
            best = r;
            best_q = q;
        }
    }
    // Refine the grid peak; q * b_cross(q) is smooth and unimodal around it.
    const double h = q_total / static_cast<double>(grid);
    const double lo = std::max(0.0, best_q - h);
    const double hi = std::min(q_total, best_q + h);
    const double q_hat = golden_section_min([&](double q) { return -over_regret(q); }, lo, hi,
                                            1e-12 * q_total);
    if (over_regret(q_hat) > best) {
        best = over_regret(q_hat);
        best_q = q_hat;
    }

    UnconstrainedMinimax result;
    result.loss = best;
    result.tangency_q = best_q;
    result.curves = iso_loss(v, best, grid);
    return result;
}

} // namespace upa
} // namespace minimax_bid
