#pragma once

#include <cstddef>
#include <vector>

#include "minimax_bid/values.hpp"

namespace minimax_bid {

enum class Format { PAB, LAB };

/// Conditional regret at a given quantity: the worse of overbidding and
/// underbidding regret when winning exactly that quantity.
struct ConditionalRegret {
    double quantity = 0.0;
    double over = 0.0;
    double under = 0.0;

    double max() const { return over > under ? over : under; }
};

namespace regret {

/// Evaluation side at a bid point. At q_k the market price for winning
/// exactly q_k ranges over [b_{k+1}, b_k]; overbidding regret is worst at the
/// upper end (the left level b_k), underbidding regret at the lower end (the
/// right limit b_{k+1}). AtStep uses that pair, matching the per-unit
/// formulas of the multi-unit model; Interior evaluates the right-continuous
/// bid function at q, which is the correct reading between bid points.
enum class Side { Interior, AtStep };

/// Pay-as-bid underbidding regret at quantity q:
/// integral of (b(x) - b_+(q)) over [0, q] plus the surplus above b_+(q) on [q, Q].
double pab_under_regret(const StepBid& bid, const MarginalValueCurve& v, double q);

/// Pay-as-bid overbidding regret: the full payment for [0, q].
double pab_over_regret(const StepBid& bid, double q);

/// Uniform-price (last accepted bid) conditional regrets at quantity q.
ConditionalRegret lab_regrets(const StepBid& bid, const MarginalValueCurve& v, double q,
                              Side side = Side::Interior);

struct LossReport {
    double loss = 0.0;
    double argmax_q = 0.0;
};

/// Exact supremum of conditional regret over all quantities. The sup is
/// attained on the critical set {0, Q, bid points (both sides), value
/// breakpoints}; regret is piecewise monotone between those points.
LossReport max_loss_report(Format format, const StepBid& bid, const MarginalValueCurve& v);
double max_loss(Format format, const StepBid& bid, const MarginalValueCurve& v);

// Discrete forms for the multi-unit model. These are the closed-form sums the
// step-function integrals reduce to on the uniform grid; they also accept
// value vectors whose last entries are zero, which the curve type cannot
// represent. Index k counts units won, k in 0..M.

double pab_under_regret(const BidVector& bid, const ValueVector& v, std::size_t k);
double pab_over_regret(const BidVector& bid, std::size_t k);
ConditionalRegret lab_regrets(const BidVector& bid, const ValueVector& v, std::size_t k);
double max_loss(Format format, const BidVector& bid, const ValueVector& v);

} // namespace regret
} // namespace minimax_bid
