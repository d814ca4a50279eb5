#pragma once

#include <cstddef>
#include <vector>

#include "minimax_bid/pab.hpp"
#include "minimax_bid/regret.hpp"
#include "minimax_bid/values.hpp"

namespace minimax_bid {
namespace upa {

using SolveDiagnostics = pab::SolveDiagnostics;

/// Sampled upper and lower iso-loss curves for a loss level L: the upper
/// curve has constant overbidding regret q * c = L, the lower constant
/// underbidding regret. Where even a zero bid cannot generate underbidding
/// regret L the lower curve is clamped at zero and flagged.
struct IsoLossCurves {
    double loss = 0.0;
    std::vector<double> q;
    std::vector<double> upper;
    std::vector<double> lower;
    std::vector<bool> lower_clamped;
};

/// Per-unit bid intervals that exactly exhaust the minimax-loss bid set in
/// the multi-unit uniform-price auction. Any weakly decreasing selection
/// within the band attains maximal loss equal to `loss`.
struct MinimaxBand {
    std::vector<double> lo;
    std::vector<double> hi;
    double loss = 0.0;
    double unit_quantity = 0.0;
};

struct ConstrainedSolution {
    StepBid bid;
    double loss = 0.0;
    SolveDiagnostics diagnostics;
};

/// Unique cross-conditional regret minimizing bid: each level solves
/// k b_k = sum over k' >= k of (v_k' - b_k)_+ independently.
BidVector solve_cross_conditional(const ValueVector& v);

/// Minimax loss and the full per-unit band of minimax-loss bids: the smallest
/// L such that at every unit the bid interval [smallest level with
/// underbidding regret <= L, L / q_k] is nonempty.
MinimaxBand multiunit_minimax_band(const ValueVector& v);

/// Sample the iso-loss curves at `grid` + 1 evenly spaced quantities.
/// Requires 0 < L <= total surplus.
IsoLossCurves iso_loss(const MarginalValueCurve& v, double loss, std::size_t grid);

/// The lower iso-loss level at a single quantity (clamped at zero).
double lower_iso_level(const MarginalValueCurve& v, double loss, double q, bool* clamped = nullptr);

/// Unique minimax-loss bid with at most M self-selected bid points: the
/// staircase between the iso-loss curves, with the loss level bisected until
/// the staircase ends exactly where underbidding regret runs out.
ConstrainedSolution solve_constrained(const MarginalValueCurve& v, std::size_t points);

/// Unconstrained cross-conditional regret minimizing bid, sampled on a grid:
/// at each q, q b = integral of (v - b)_+ over [q, Q].
StepBid solve_unconstrained_cross(const MarginalValueCurve& v, std::size_t grid);

struct UnconstrainedMinimax {
    double loss = 0.0;
    double tangency_q = 0.0;
    IsoLossCurves curves;
};

/// Unconstrained minimax loss: the peak of q * b_cross(q), at which over- and
/// underbidding regret coincide (the iso-loss tangency point).
UnconstrainedMinimax unconstrained_minimax(const MarginalValueCurve& v, std::size_t grid);

} // namespace upa
} // namespace minimax_bid
