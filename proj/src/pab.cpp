#include "minimax_bid/pab.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "minimax_bid/rng.hpp"
#include "minimax_bid/roots.hpp"

namespace minimax_bid {
namespace pab {

namespace {

double positive_part(double x) { return x > 0.0 ? x : 0.0; }

// Left-hand minus right-hand side of the multi-unit equal-regret implicit
// equation for b_k given b_{k+1}; increasing in b_k.
double implicit_residual(const std::vector<double>& v, std::size_t k, double b_k, double b_next) {
    const std::size_t m = v.size();
    double rhs = v[k] - b_k;
    for (std::size_t j = k + 1; j < m; ++j)
        rhs += positive_part(v[j] - b_k) - positive_part(v[j] - b_next);
    return (b_k - b_next) * static_cast<double>(k + 1) - rhs;
}

} // namespace

PabSolution solve_multiunit(const ValueVector& v) {
    const std::size_t m = v.units();
    const auto& vals = v.entries();
    std::vector<double> b(m);
    RootStats stats;

    b[m - 1] = vals[m - 1] / static_cast<double>(m + 1);
    for (std::size_t i = m - 1; i-- > 0;) {
        const double lo = b[i + 1];
        const double hi = std::max(vals[i], lo);
        b[i] = bisect_increasing(
            [&](double x) { return implicit_residual(vals, i, x, b[i + 1]); }, lo, hi, &stats);
    }

    PabSolution sol;
    sol.levels = b;
    sol.unit_quantity = v.unit_quantity();
    BidVector bid(b, v.unit_quantity());
    sol.bid = StepBid::from_bid_vector(bid);
    sol.loss = regret::max_loss(Format::PAB, bid, v);
    sol.diagnostics.iterations = stats.iterations;
    double worst = 0.0;
    for (std::size_t k = 0; k <= m; ++k)
        worst = std::max(worst, std::abs(regret::pab_under_regret(bid, v, k) - sol.loss));
    sol.diagnostics.residual = worst;
    return sol;
}

ValueVector invert_multiunit(const BidVector& b) {
    const std::size_t m = b.units();
    const auto& bids = b.entries();
    for (std::size_t k = 0; k + 1 < m; ++k)
        if (!(bids[k] > bids[k + 1]))
            throw std::domain_error("invert: bids must be strictly decreasing");
    if (bids[m - 1] < 0.0) throw std::domain_error("invert: bids must be nonnegative");

    std::vector<double> v(m);
    v[m - 1] = static_cast<double>(m + 1) * bids[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) {
        const double b_k = bids[i];
        const double b_next = bids[i + 1];
        double adjustment = 0.0;
        for (std::size_t j = i + 1; j < m; ++j)
            adjustment += positive_part(v[j] - b_k) - positive_part(v[j] - b_next);
        v[i] = b_k + static_cast<double>(i + 1) * (b_k - b_next) - adjustment;
        const double slack = 1e-9 * std::max(1.0, v[i + 1]);
        if (v[i] < v[i + 1] - slack || v[i] < b_k - slack)
            throw std::domain_error("invert: bid is not rationalizable as a minimax-loss bid");
        v[i] = std::max(v[i], v[i + 1]);
    }
    return ValueVector(std::move(v), b.unit_quantity());
}

namespace {

// Bid levels implied by fixed bid points and a trial loss: b_1 makes the
// zero-allocation regret equal L, and each later level makes the regret at
// the preceding bid point equal L. Returns the (possibly virtual, negative)
// terminal level b_{M+1}; the trial loss is correct exactly when it is zero.
double level_chain(const MarginalValueCurve& v, const std::vector<double>& points, double trial,
                   std::vector<double>& levels, RootStats* stats) {
    const double q_total = v.total_quantity();
    const std::size_t m = points.size();
    levels.assign(m, 0.0);

    levels[0] = bisect_decreasing(
        [&](double x) { return v.clipped_surplus(x, 0.0, q_total) - trial; }, 0.0, v.value_at(0.0),
        stats);

    double pay = 0.0;
    double prev_q = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double q_k = points[k];
        pay += (q_k - prev_q) * levels[k];
        prev_q = q_k;
        auto regret_at = [&](double x) {
            return pay - q_k * x + v.clipped_surplus(x, q_k, q_total) - trial;
        };
        if (k + 1 < m) {
            levels[k + 1] = regret_at(0.0) < 0.0
                                ? 0.0
                                : bisect_decreasing(regret_at, 0.0, levels[k], stats);
        } else {
            if (regret_at(0.0) >= 0.0)
                return bisect_decreasing(regret_at, 0.0, levels[k], stats);
            // Linear extension below zero: no clipping is active there.
            return (pay + v.clipped_surplus(0.0, q_k, q_total) - trial) / q_total;
        }
    }
    return 0.0; // unreachable; m >= 1
}

} // namespace

double constrained_loss_at(const MarginalValueCurve& v, const std::vector<double>& points,
                           std::vector<double>* levels_out, SolveDiagnostics* diag) {
    if (points.empty()) throw std::domain_error("pab: need at least one bid point");
    const double q_total = v.total_quantity();
    double prev = 0.0;
    for (double q : points) {
        if (!(q > prev) || q > q_total * (1.0 + kRangeSlack))
            throw std::domain_error("pab: bid points must be strictly increasing within (0, Q]");
        prev = q;
    }
    RootStats stats;
    std::vector<double> levels;
    const double mass = v.value_mass(0.0, q_total);
    const double loss = bisect_decreasing(
        [&](double trial) { return level_chain(v, points, trial, levels, nullptr); }, 0.0, mass,
        &stats);
    level_chain(v, points, loss, levels, &stats);
    if (levels_out != nullptr) *levels_out = levels;
    if (diag != nullptr) {
        diag->iterations += stats.iterations;
        diag->residual = std::max(diag->residual, std::abs(stats.residual));
    }
    return loss;
}

namespace {

struct Candidate {
    double loss = 0.0;
    std::vector<double> points;
};

bool lexicographically_smaller(const std::vector<double>& a, const std::vector<double>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// One coordinate-descent refinement from a starting set of bid points.
Candidate refine_points(const MarginalValueCurve& v, std::vector<double> points, double x_tol,
                        double improvement_tol, int max_sweeps) {
    const double q_total = v.total_quantity();
    const double margin = 1e-9 * q_total;
    const std::size_t m = points.size();

    auto loss_of = [&](const std::vector<double>& q) { return constrained_loss_at(v, q); };

    double best = loss_of(points);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        const double before = best;
        double moved = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double lo = (k == 0 ? 0.0 : points[k - 1]) + margin;
            const double hi = (k + 1 == m ? q_total : points[k + 1] - margin);
            if (hi <= lo) continue;
            std::vector<double> trial = points;
            auto slice = [&](double x) {
                trial[k] = x;
                return loss_of(trial);
            };
            const double x = golden_section_min(slice, lo, hi, x_tol);
            const double fx = slice(x);
            if (fx < best) {
                best = fx;
                moved = std::max(moved, std::abs(x - points[k]));
                points[k] = x;
            }
        }
        // The last point often belongs exactly at Q; golden section cannot
        // reach the endpoint, so test it explicitly.
        {
            std::vector<double> trial = points;
            trial[m - 1] = q_total;
            if (trial[m - 1] > (m > 1 ? trial[m - 2] : 0.0)) {
                const double fq = loss_of(trial);
                if (fq <= best + 1e-13 * std::max(1.0, best)) {
                    best = std::min(best, fq);
                    moved = std::max(moved, q_total - points[m - 1]);
                    points = trial;
                }
            }
        }
        // Loss is locally quadratic in the points, so a loss-only stopping
        // rule stalls an order of magnitude short of the achievable point
        // accuracy; require the sweep to have stopped moving as well.
        if (sweep > 0 && before - best < improvement_tol && moved < 10.0 * x_tol) break;
    }
    return {best, points};
}

// Push each coordinate to the left edge of any exactly-flat region of the
// loss, so equal-loss solution sets resolve to the lexicographically smallest
// bid points. Plateaus occur for kinked value curves; for strictly unimodal
// losses the probe fails immediately and nothing moves.
void lexicographic_pass(const MarginalValueCurve& v, Candidate& cand) {
    const double q_total = v.total_quantity();
    const double margin = 1e-9 * q_total;
    const double flat_tol = 1e-12 * std::max(1.0, cand.loss);
    auto loss_with = [&](std::size_t k, double x) {
        std::vector<double> trial = cand.points;
        trial[k] = x;
        return pab::constrained_loss_at(v, trial);
    };
    for (std::size_t k = 0; k < cand.points.size(); ++k) {
        const double lo_bound = (k == 0 ? 0.0 : cand.points[k - 1]) + margin;
        const double probe = std::max(lo_bound, cand.points[k] - 1e-3 * q_total);
        if (probe >= cand.points[k]) continue;
        if (loss_with(k, probe) > cand.loss + flat_tol) continue; // no plateau
        auto flat = [&](double x) { return loss_with(k, x) <= cand.loss + flat_tol; };
        double lo = lo_bound, hi = cand.points[k];
        if (flat(lo)) {
            cand.points[k] = lo;
            continue;
        }
        for (int i = 0; i < 60 && hi - lo > margin; ++i) {
            const double mid = 0.5 * (lo + hi);
            (flat(mid) ? hi : lo) = mid;
        }
        cand.points[k] = hi;
    }
    cand.loss = pab::constrained_loss_at(v, cand.points);
}

} // namespace

PabSolution solve_constrained(const MarginalValueCurve& v, std::size_t points,
                              const ConstrainedOptions& options) {
    if (points == 0) throw std::domain_error("pab: need at least one bid point");
    const double q_total = v.total_quantity();
    const std::size_t m = points;

    std::vector<std::vector<double>> starts;
    std::vector<double> uniform(m);
    for (std::size_t k = 0; k < m; ++k)
        uniform[k] = q_total * static_cast<double>(k + 1) / static_cast<double>(m);
    starts.push_back(uniform);

    SplitMix64 rng(options.seed);
    while (starts.size() < static_cast<std::size_t>(std::max(1, options.starts))) {
        // Random gaps, half the starts ending strictly inside (0, Q).
        const bool interior = starts.size() % 2 == 0;
        std::vector<double> gaps(m + (interior ? 1 : 0));
        double total = 0.0;
        for (auto& g : gaps) {
            g = -std::log(1.0 - rng.next_double());
            total += g;
        }
        std::vector<double> q(m);
        double acc = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            acc += gaps[k];
            q[k] = q_total * acc / total;
        }
        starts.push_back(std::move(q));
    }

    // Coarse multi-start pass, then a fine polish of the winner only.
    const double coarse_tol = std::max(1e-5 * q_total, options.coordinate_tol * q_total);
    Candidate best;
    bool have_best = false;
    long evals = 0;
    for (auto& start : starts) {
        Candidate cand = refine_points(v, start, coarse_tol, 1e-8, std::min(30, options.max_sweeps));
        ++evals;
        const double tie = 1e-7 * std::max(1.0, std::abs(cand.loss));
        if (!have_best || cand.loss < best.loss - tie ||
            (std::abs(cand.loss - best.loss) <= tie &&
             lexicographically_smaller(cand.points, best.points))) {
            best = std::move(cand);
            have_best = true;
        }
    }
    best = refine_points(v, best.points, options.coordinate_tol * q_total,
                         options.loss_improvement_tol, options.max_sweeps);
    lexicographic_pass(v, best);

    PabSolution sol;
    sol.diagnostics.iterations = evals;

    // Merge degenerate (collapsed) bid points; the effective number of points
    // drops and the caller is warned.
    std::vector<double> merged;
    double prev = 0.0;
    for (double q : best.points) {
        if (q - prev < 1e-7 * q_total) {
            sol.diagnostics.warnings.push_back("degenerate bid point merged");
            continue;
        }
        merged.push_back(q);
        prev = q;
    }
    if (merged.empty()) merged.push_back(q_total);

    std::vector<double> levels;
    SolveDiagnostics chain_diag;
    const double loss = constrained_loss_at(v, merged, &levels, &chain_diag);
    sol.diagnostics.residual = chain_diag.residual;

    std::vector<StepBid::Point> pts(merged.size());
    for (std::size_t k = 0; k < merged.size(); ++k) pts[k] = {merged[k], levels[k]};
    sol.bid = StepBid(std::move(pts));
    sol.loss = loss;
    return sol;
}

PabSolution solve_unconstrained(const MarginalValueCurve& v, std::size_t grid_points,
                                std::size_t integration_steps) {
    if (grid_points < 16) throw std::domain_error("pab: need at least 16 grid points");
    if (integration_steps < grid_points) integration_steps = 4096;
    const double q_total = v.total_quantity();
    const double top = v.value_at(0.0);
    const std::size_t n = integration_steps;
    const double h = q_total / static_cast<double>(n);

    auto slope = [&](double q, double b) {
        b = std::clamp(b, 0.0, top);
        const double inv = std::max(v.generalized_inverse(b), 1e-12 * q_total);
        return -(v.value_at(std::clamp(q, 0.0, q_total)) - b) / inv;
    };

    // Backward sweep from (Q, 0); trajectory[i] holds b at q = i * h.
    std::vector<double> trajectory(n + 1, 0.0);
    double b = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        const double q = static_cast<double>(i + 1) * h;
        const double dq = -h;
        const double k1 = slope(q, b);
        const double k2 = slope(q + 0.5 * dq, b + 0.5 * dq * k1);
        const double k3 = slope(q + 0.5 * dq, b + 0.5 * dq * k2);
        const double k4 = slope(q + dq, b + dq * k3);
        b += dq * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
        b = std::clamp(b, 0.0, top);
        trajectory[i] = b;
    }

    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) loss += 0.5 * (trajectory[i] + trajectory[i + 1]) * h;

    auto b_at = [&](double q) {
        const double t = std::clamp(q / h, 0.0, static_cast<double>(n));
        const std::size_t i = std::min(static_cast<std::size_t>(t), n - 1);
        const double frac = t - static_cast<double>(i);
        return trajectory[i] * (1.0 - frac) + trajectory[i + 1] * frac;
    };

    std::vector<StepBid::Point> pts(grid_points);
    for (std::size_t j = 0; j < grid_points; ++j) {
        const double q_right = q_total * static_cast<double>(j + 1) / static_cast<double>(grid_points);
        const double q_left = q_total * static_cast<double>(j) / static_cast<double>(grid_points);
        pts[j] = {q_right, b_at(q_left)};
    }

    PabSolution sol;
    sol.bid = StepBid(std::move(pts));
    sol.loss = loss;
    sol.diagnostics.iterations = static_cast<long>(n);
    return sol;
}

} // namespace pab
} // namespace minimax_bid
