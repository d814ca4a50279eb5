#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "minimax_bid/market.hpp"
#include "minimax_bid/regret.hpp"
#include "minimax_bid/values.hpp"

namespace minimax_bid {
namespace oracle {

/// Residual-supply candidate: the opponents' aggregate demand as a weakly
/// decreasing step function on [0, Q]. steps[j].p is the opponents' bid level
/// for their units in (steps[j-1].upto, steps[j].upto]; demand beyond the
/// last step is zero.
struct SupplyCurve {
    struct Step {
        double upto;
        double p;
    };
    std::vector<Step> steps;

    /// Opponents' bid level for their x-th unit (right-continuous, 0 beyond).
    double level_at(double x) const;

    /// The curve as an opponent StepBid for the clearing engine.
    StepBid as_step_bid() const;
};

/// Merge a set of step bids into one aggregate demand curve, truncated to
/// quantity q_total.
SupplyCurve aggregate_demand(const std::vector<StepBid>& bids, double q_total);

/// Utility of the ex post best response against a known residual supply:
/// sup over q of value_mass(v, 0, q) - q * S(Q - q), computed exactly on the
/// step data. The same expression serves both formats, since a bidder facing
/// a known supply bids flat at the marginal price either way.
double best_response_utility(const SupplyCurve& supply, const MarginalValueCurve& v);

struct BruteForceResult {
    double max_regret = 0.0;
    SupplyCurve witness;
};

/// Worst-case regret of a bid by explicit enumeration of residual supplies:
/// the two-step family that attains the maximal loss, evaluated at grid and
/// critical quantities, plus seeded random monotone three-step supplies.
/// Realized utility goes through the clearing engine; ties are resolved both
/// ways and the regret-maximal resolution is kept.
BruteForceResult brute_force_max_loss(const StepBid& bid, const MarginalValueCurve& v,
                                      Format format, std::size_t q_grid, std::size_t p_grid,
                                      std::uint64_t seed = 1);

struct VerifyReport {
    double analytic = 0.0;
    double brute_force = 0.0;
    double difference = 0.0; // analytic - brute_force
    double tolerance = 0.0;
    bool pass = false;
    SupplyCurve witness;
};

/// Cross-check the analytic max-loss formulas against the brute-force value.
VerifyReport verify(const StepBid& bid, const MarginalValueCurve& v, Format format, double tol,
                    std::size_t q_grid = 64, std::size_t p_grid = 64, std::uint64_t seed = 1);

/// Default verification tolerance for the given grid: twice the grid spacing
/// times the top marginal value.
double default_tolerance(const MarginalValueCurve& v, std::size_t q_grid);

} // namespace oracle
} // namespace minimax_bid
