#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "minimax_bid/regret.hpp"
#include "minimax_bid/values.hpp"

namespace minimax_bid {
namespace pab {

struct SolveDiagnostics {
    long iterations = 0;
    double residual = 0.0;
    std::vector<std::string> warnings;
};

/// A minimax-loss bid with its certified loss. In every solution conditional
/// regret is equal across all bid points (up to solver tolerance) and loss
/// equals the maximal loss of the bid.
struct PabSolution {
    StepBid bid;
    std::vector<double> levels; // per-unit levels (multi-unit mode only)
    double unit_quantity = 0.0; // grid width (multi-unit mode only)
    double loss = 0.0;
    SolveDiagnostics diagnostics;

    BidVector bid_vector() const { return BidVector(levels, unit_quantity); }
};

/// Unique minimax-loss bid in the multi-unit pay-as-bid auction: b_M is
/// v_M / (M + 1) and each earlier bid solves the equal-regret implicit
/// equation given the later ones.
PabSolution solve_multiunit(const ValueVector& v);

/// Recover marginal values from a multi-unit minimax-loss bid: v_M is
/// (M + 1) b_M and each earlier value follows linearly from the implicit
/// equation. Fails if the bid is not rationalizable (recovered values not
/// weakly decreasing).
ValueVector invert_multiunit(const BidVector& b);

struct ConstrainedOptions {
    int starts = 8;              // uniform spacing plus random perturbations
    double coordinate_tol = 1e-9;
    double loss_improvement_tol = 1e-10;
    int max_sweeps = 80;
    std::uint64_t seed = 0x6d696e696d6178ULL;
};

/// Unique minimax-loss bid with at most M self-selected bid points: minimizes
/// the first-unit foregone surplus subject to equal conditional regret at
/// every bid point. Bid levels for fixed points come from a nested
/// root-finding chain; the points themselves from derivative-free search.
PabSolution solve_constrained(const MarginalValueCurve& v, std::size_t points,
                              const ConstrainedOptions& options = {});

/// Loss and levels for a fixed set of bid points (the inner routine of
/// solve_constrained). Exposed for tests.
double constrained_loss_at(const MarginalValueCurve& v, const std::vector<double>& points,
                           std::vector<double>* levels_out = nullptr,
                           SolveDiagnostics* diag = nullptr);

/// Unconstrained divisible-good solution: integrates
/// db/dq = -(v(q) - b) / v^{-1}(b) backwards from b(Q) = 0 with classical
/// fourth-order steps and returns a step-function sampling on `grid_points`
/// cells. Loss is the full-allocation regret, the integral of b over [0, Q].
PabSolution solve_unconstrained(const MarginalValueCurve& v, std::size_t grid_points,
                                std::size_t integration_steps = 4096);

} // namespace pab
} // namespace minimax_bid
