#include "minimax_bid/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "minimax_bid/market.hpp"
#include "minimax_bid/pab.hpp"
#include "minimax_bid/roots.hpp"
#include "minimax_bid/upa.hpp"

namespace minimax_bid {
namespace sim {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

std::size_t worker_count() {
    if (const char* env = std::getenv("MINIMAX_BID_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n > 0) return static_cast<std::size_t>(n);
    }
    return 1;
}

// Runs fn(i) for i in [0, n); the work may be split across workers but every
// result lands in a caller-owned slot, so aggregation order is fixed.
template <typename F>
void parallel_for(std::size_t n, F&& fn) {
    const std::size_t workers = std::min(worker_count(), n == 0 ? std::size_t{1} : n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

StepBid scale_levels(const StepBid& unit_bid, double factor) {
    std::vector<StepBid::Point> pts = unit_bid.points();
    for (auto& p : pts) p.b *= factor;
    return StepBid(std::move(pts));
}

} // namespace

TruncatedLognormal::TruncatedLognormal(double low_, double high_, double target_mean_,
                                       double sigma_)
    : low(low_), high(high_), target_mean(target_mean_), sigma(sigma_) {
    if (!(low > 0.0) || !(high > low))
        throw std::invalid_argument("sim: support must satisfy 0 < low < high");
    if (!(target_mean > low) || !(target_mean < high))
        throw std::invalid_argument("sim: target mean must lie inside the support");
    // Truncated mean is increasing in mu; bracket it generously.
    mu = bisect_increasing(
        [&](double m) { return truncated_mean(m) - target_mean; }, std::log(low) - 8.0 * sigma,
        std::log(high) + 8.0 * sigma);
}

double TruncatedLognormal::truncated_mean(double mu_trial) const {
    const double a = (std::log(low) - mu_trial) / sigma;
    const double b = (std::log(high) - mu_trial) / sigma;
    const double denom = normal_cdf(b) - normal_cdf(a);
    if (denom <= 0.0) return mu_trial < std::log(low) ? low : high;
    const double numer = normal_cdf(b - sigma) - normal_cdf(a - sigma);
    return std::exp(mu_trial + 0.5 * sigma * sigma) * numer / denom;
}

double TruncatedLognormal::sample(SplitMix64& rng) const {
    for (;;) {
        const double x = std::exp(mu + sigma * rng.next_normal());
        if (x >= low && x <= high) return x;
    }
}

std::vector<RevenueCell> run_revenue_study(const SimConfig& cfg) {
    if (cfg.draws < 1) throw std::invalid_argument("sim: need at least one draw");
    std::vector<RevenueCell> table;

    for (int m : cfg.bid_points) {
        // Constant-value bids scale linearly in the value level, so solve
        // both formats once at v = 1 and rescale per draw.
        const auto unit_curve = MarginalValueCurve::constant(1.0, cfg.total_quantity);
        const StepBid pab_unit = pab::solve_constrained(unit_curve, static_cast<std::size_t>(m)).bid;
        const StepBid upa_unit = upa::solve_constrained(unit_curve, static_cast<std::size_t>(m)).bid;

        for (int n : cfg.n_bidders) {
            std::vector<double> rev_pab(cfg.draws), rev_upa(cfg.draws);
            parallel_for(cfg.draws, [&](std::size_t d) {
                auto draw_rng = SplitMix64::derive(
                    cfg.seed, (static_cast<std::uint64_t>(m) << 40) ^
                                  (static_cast<std::uint64_t>(n) << 28) ^ d);
                std::vector<StepBid> pab_bids, upa_bids;
                pab_bids.reserve(n);
                upa_bids.reserve(n);
                for (int i = 0; i < n; ++i) {
                    const double v0 = cfg.distribution.sample(draw_rng);
                    pab_bids.push_back(scale_levels(pab_unit, v0));
                    upa_bids.push_back(scale_levels(upa_unit, v0));
                }
                const auto pab_out = market::clear(pab_bids, cfg.total_quantity,
                                                   market::PricingRule::LAB,
                                                   market::PaymentRule::PAB);
                const auto upa_out = market::clear(upa_bids, cfg.total_quantity,
                                                   market::PricingRule::LAB,
                                                   market::PaymentRule::UPA);
                rev_pab[d] = market::revenue(pab_out);
                rev_upa[d] = market::revenue(upa_out);
            });

            RevenueCell cell;
            cell.n = n;
            cell.bid_points = m;
            double sum_pab = 0.0, sum_upa = 0.0;
            std::size_t upa_higher = 0;
            for (std::size_t d = 0; d < cfg.draws; ++d) {
                sum_pab += rev_pab[d];
                sum_upa += rev_upa[d];
                if (rev_upa[d] > rev_pab[d]) ++upa_higher;
            }
            cell.rev_pab_mean = sum_pab / static_cast<double>(cfg.draws);
            cell.rev_upa_mean = sum_upa / static_cast<double>(cfg.draws);
            cell.share_upa_higher = static_cast<double>(upa_higher) / static_cast<double>(cfg.draws);
            table.push_back(cell);
        }
    }
    return table;
}

std::vector<LossRow> run_loss_study(const std::vector<int>& bid_points,
                                    const MarginalValueCurve& v) {
    std::vector<LossRow> rows;
    const double scale = v.value_at(0.0) * v.total_quantity();
    for (int m : bid_points) {
        // The search landscape flattens out as M grows; fewer restarts keep
        // the large-M rows at desk-scale runtimes.
        pab::ConstrainedOptions opt;
        if (m > 6) {
            opt.starts = 2;
            opt.max_sweeps = 40;
            opt.coordinate_tol = 1e-6;
        }
        LossRow row;
        row.bid_points = m;
        row.loss_pab = pab::solve_constrained(v, static_cast<std::size_t>(m), opt).loss / scale;
        row.loss_upa = upa::solve_constrained(v, static_cast<std::size_t>(m)).loss / scale;
        rows.push_back(row);
    }
    return rows;
}

} // namespace sim
} // namespace minimax_bid
