#pragma once

#include <cstddef>
#include <vector>

#include "minimax_bid/common.hpp"

namespace minimax_bid {

/// Weakly decreasing marginal value v(q) on [0, Q], stored as a piecewise
/// constant function. Segment i covers [upto_{i-1}, upto_i) with level v_i;
/// the first segment starts at 0 and the last ends at Q. Values v(Q) > 0 by
/// convention; callers wanting v(Q) = 0 pass a small positive level instead.
/// All integrals against this representation are closed-form sums.
class MarginalValueCurve {
  public:
    struct Segment {
        double upto;  // right endpoint of the segment
        double level; // marginal value on the segment
    };

    MarginalValueCurve(std::vector<Segment> segments);

    static MarginalValueCurve constant(double level, double total_quantity);

    double total_quantity() const { return segments_.back().upto; }
    const std::vector<Segment>& segments() const { return segments_; }

    /// v(q), right-continuous; v(Q) is the last segment's level.
    double value_at(double q) const;

    /// Integral of v over [a, b]. Requires 0 <= a <= b <= Q.
    double value_mass(double a, double b) const;

    /// Integral of (v(x) - p)_+ over [a, b]. Requires p >= 0, 0 <= a <= b <= Q.
    double clipped_surplus(double p, double a, double b) const;

    /// sup{ x in [0, Q] : v(x) > p }, with 0 when the set is empty.
    double generalized_inverse(double p) const;

    /// Interior breakpoints plus 0 and Q, ascending.
    std::vector<double> breakpoints() const;

  private:
    std::vector<Segment> segments_;
};

/// Per-unit marginal values v_1 >= ... >= v_M >= 0 on the uniform grid
/// q_k = k * unit_quantity.
class ValueVector {
  public:
    ValueVector(std::vector<double> entries, double unit_quantity);

    /// Cell averages of a curve over the M-unit grid.
    static ValueVector from_curve(const MarginalValueCurve& curve, std::size_t units);

    std::size_t units() const { return entries_.size(); }
    double unit_quantity() const { return unit_quantity_; }
    double total_quantity() const { return unit_quantity_ * static_cast<double>(entries_.size()); }
    const std::vector<double>& entries() const { return entries_; }
    double operator[](std::size_t k) const { return entries_[k]; } // 0-based

    /// Step curve with one segment per unit. Requires v_M > 0.
    MarginalValueCurve to_curve() const;

  private:
    std::vector<double> entries_;
    double unit_quantity_;
};

/// Per-unit bids b_1 >= ... >= b_M >= 0 on the same uniform grid as a
/// ValueVector. The convention b_{M+1} = 0 is implicit, never stored.
class BidVector {
  public:
    BidVector(std::vector<double> entries, double unit_quantity);

    std::size_t units() const { return entries_.size(); }
    double unit_quantity() const { return unit_quantity_; }
    double total_quantity() const { return unit_quantity_ * static_cast<double>(entries_.size()); }
    const std::vector<double>& entries() const { return entries_; }
    double operator[](std::size_t k) const { return entries_[k]; } // 0-based

  private:
    std::vector<double> entries_;
    double unit_quantity_;
};

/// Up to M self-selected bid points (q_k, b_k) with q strictly increasing and
/// b weakly decreasing. The implied bid function is b(q) = b_k on
/// [q_{k-1}, q_k) and 0 for q >= q_M; an empty point set is the zero bid.
class StepBid {
  public:
    struct Point {
        double q; // cumulative quantity at which this bid level ends
        double b; // bid level on [previous q, q)
    };

    StepBid() = default;
    explicit StepBid(std::vector<Point> points);

    static StepBid from_bid_vector(const BidVector& bids);

    const std::vector<Point>& points() const { return points_; }
    bool empty() const { return points_.empty(); }
    std::size_t size() const { return points_.size(); }

    /// Largest quantity carrying a stated bid (0 for the zero bid).
    double max_quantity() const { return points_.empty() ? 0.0 : points_.back().q; }

    /// b(q), right-continuous; 0 for q >= q_M. Coincides with the right limit
    /// b_+(q) everywhere, including the b_+(Q) = 0 convention.
    double level_at(double q) const;

    /// Left limit b(q-): the level of the step ending at q. level_before(0)
    /// is defined as level_at(0).
    double level_before(double q) const;

    /// Integral of the implied bid function over [0, q].
    double pay_integral(double q) const;

    std::vector<double> quantities() const;

  private:
    std::vector<Point> points_;
};

} // namespace minimax_bid
