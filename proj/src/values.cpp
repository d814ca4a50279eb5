#include "minimax_bid/values.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace minimax_bid {

namespace {

// Clamp a value that should be <= bound, repairing violations up to
// kMonotoneRepairTol and rejecting anything larger.
double repair_upper(double x, double bound, const char* what) {
    if (x <= bound) return x;
    if (x - bound <= kMonotoneRepairTol) return bound;
    throw std::invalid_argument(what);
}

double repair_nonnegative(double x, const char* what) {
    if (x >= 0.0) return x;
    if (x >= -kMonotoneRepairTol) return 0.0;
    throw std::invalid_argument(what);
}

void check_range(double a, double b, double q_total, const char* what) {
    const double slack = kRangeSlack * std::max(1.0, q_total);
    if (a < -slack || b > q_total + slack || a > b + slack)
        throw std::domain_error(what);
}

} // namespace

MarginalValueCurve::MarginalValueCurve(std::vector<Segment> segments)
    : segments_(std::move(segments)) {
    if (segments_.empty()) throw std::invalid_argument("curve: needs at least one segment");
    double prev_upto = 0.0;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        auto& s = segments_[i];
        if (!(s.upto > prev_upto))
            throw std::invalid_argument("curve: breakpoints must be strictly increasing");
        s.level = repair_nonnegative(s.level, "curve: negative marginal value");
        if (i > 0) s.level = repair_upper(s.level, segments_[i - 1].level, "curve: marginal values must be weakly decreasing");
        prev_upto = s.upto;
    }
    if (!(segments_.back().level > 0.0))
        throw std::invalid_argument("curve: v(Q) must be strictly positive");
}

MarginalValueCurve MarginalValueCurve::constant(double level, double total_quantity) {
    return MarginalValueCurve({{total_quantity, level}});
}

double MarginalValueCurve::value_at(double q) const {
    const double q_total = total_quantity();
    check_range(q, q, q_total, "curve: quantity out of range");
    for (const auto& s : segments_)
        if (q < s.upto) return s.level;
    return segments_.back().level; // q == Q
}

double MarginalValueCurve::value_mass(double a, double b) const {
    return clipped_surplus(0.0, a, b);
}

double MarginalValueCurve::clipped_surplus(double p, double a, double b) const {
    if (p < 0.0) throw std::domain_error("curve: clip price must be nonnegative");
    const double q_total = total_quantity();
    check_range(a, b, q_total, "curve: integration bounds out of range");
    a = std::clamp(a, 0.0, q_total);
    b = std::clamp(b, a, q_total);
    double total = 0.0;
    double seg_lo = 0.0;
    for (const auto& s : segments_) {
        const double lo = std::max(a, seg_lo);
        const double hi = std::min(b, s.upto);
        if (hi > lo && s.level > p) total += (hi - lo) * (s.level - p);
        seg_lo = s.upto;
        if (seg_lo >= b) break;
    }
    return total;
}

double MarginalValueCurve::generalized_inverse(double p) const {
    double sup = 0.0;
    for (const auto& s : segments_) {
        if (s.level <= p) break; // levels are decreasing, no later segment exceeds p
        sup = s.upto;
    }
    return sup;
}

std::vector<double> MarginalValueCurve::breakpoints() const {
    std::vector<double> out;
    out.reserve(segments_.size() + 1);
    out.push_back(0.0);
    for (const auto& s : segments_) out.push_back(s.upto);
    return out;
}

ValueVector::ValueVector(std::vector<double> entries, double unit_quantity)
    : entries_(std::move(entries)), unit_quantity_(unit_quantity) {
    if (entries_.empty()) throw std::invalid_argument("values: need at least one unit");
    if (!(unit_quantity_ > 0.0)) throw std::invalid_argument("values: unit quantity must be positive");
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        entries_[k] = repair_nonnegative(entries_[k], "values: negative marginal value");
        if (k > 0)
            entries_[k] = repair_upper(entries_[k], entries_[k - 1], "values: marginal values must be weakly decreasing");
    }
}

ValueVector ValueVector::from_curve(const MarginalValueCurve& curve, std::size_t units) {
    if (units == 0) throw std::invalid_argument("values: need at least one unit");
    const double q_total = curve.total_quantity();
    const double w = q_total / static_cast<double>(units);
    std::vector<double> v(units);
    for (std::size_t k = 0; k < units; ++k) {
        const double lo = w * static_cast<double>(k);
        const double hi = (k + 1 == units) ? q_total : w * static_cast<double>(k + 1);
        v[k] = curve.value_mass(lo, hi) / w;
    }
    return ValueVector(std::move(v), w);
}

MarginalValueCurve ValueVector::to_curve() const {
    std::vector<MarginalValueCurve::Segment> segs(entries_.size());
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        const double upto = (k + 1 == entries_.size()) ? total_quantity()
                                                       : unit_quantity_ * static_cast<double>(k + 1);
        segs[k] = {upto, entries_[k]};
    }
    return MarginalValueCurve(std::move(segs));
}

BidVector::BidVector(std::vector<double> entries, double unit_quantity)
    : entries_(std::move(entries)), unit_quantity_(unit_quantity) {
    if (entries_.empty()) throw std::invalid_argument("bids: need at least one unit");
    if (!(unit_quantity_ > 0.0)) throw std::invalid_argument("bids: unit quantity must be positive");
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        entries_[k] = repair_nonnegative(entries_[k], "bids: negative bid");
        if (k > 0)
            entries_[k] = repair_upper(entries_[k], entries_[k - 1], "bids: bids must be weakly decreasing");
    }
}

StepBid::StepBid(std::vector<Point> points) : points_(std::move(points)) {
    double prev_q = 0.0;
    for (std::size_t k = 0; k < points_.size(); ++k) {
        auto& p = points_[k];
        if (!(p.q > prev_q)) throw std::invalid_argument("bid: quantities must be strictly increasing");
        p.b = repair_nonnegative(p.b, "bid: negative bid level");
        if (k > 0) p.b = repair_upper(p.b, points_[k - 1].b, "bid: levels must be weakly decreasing");
        prev_q = p.q;
    }
}

StepBid StepBid::from_bid_vector(const BidVector& bids) {
    std::vector<Point> pts(bids.units());
    for (std::size_t k = 0; k < bids.units(); ++k)
        pts[k] = {bids.unit_quantity() * static_cast<double>(k + 1), bids[k]};
    return StepBid(std::move(pts));
}

double StepBid::level_at(double q) const {
    for (const auto& p : points_)
        if (q < p.q) return p.b;
    return 0.0;
}

double StepBid::level_before(double q) const {
    if (q <= 0.0) return level_at(0.0);
    for (const auto& p : points_)
        if (q <= p.q) return p.b;
    return 0.0;
}

double StepBid::pay_integral(double q) const {
    double total = 0.0;
    double seg_lo = 0.0;
    for (const auto& p : points_) {
        const double hi = std::min(q, p.q);
        if (hi > seg_lo) total += (hi - seg_lo) * p.b;
        seg_lo = p.q;
        if (seg_lo >= q) break;
    }
    return total;
}

std::vector<double> StepBid::quantities() const {
    std::vector<double> out;
    out.reserve(points_.size());
    for (const auto& p : points_) out.push_back(p.q);
    return out;
}

} // namespace minimax_bid
