#include "minimax_bid/regret.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace minimax_bid {
namespace regret {

namespace {

void check_bid_fits(const StepBid& bid, const MarginalValueCurve& v) {
    const double q_total = v.total_quantity();
    if (bid.max_quantity() > q_total * (1.0 + kRangeSlack) + kRangeSlack)
        throw std::domain_error("regret: bid extends beyond the value curve's quantity");
}

double positive_part(double x) { return x > 0.0 ? x : 0.0; }

} // namespace

double pab_under_regret(const StepBid& bid, const MarginalValueCurve& v, double q) {
    check_bid_fits(bid, v);
    const double p = bid.level_at(q); // right limit; 0 at and beyond q_M
    return bid.pay_integral(q) - q * p + v.clipped_surplus(p, q, v.total_quantity());
}

double pab_over_regret(const StepBid& bid, double q) {
    return bid.pay_integral(q);
}

ConditionalRegret lab_regrets(const StepBid& bid, const MarginalValueCurve& v, double q,
                              Side side) {
    check_bid_fits(bid, v);
    const double level = side == Side::AtStep ? bid.level_before(q) : bid.level_at(q);
    const double plus = bid.level_at(q);
    ConditionalRegret r;
    r.quantity = q;
    r.over = q * level;
    r.under = v.clipped_surplus(plus, q, v.total_quantity());
    return r;
}

LossReport max_loss_report(Format format, const StepBid& bid, const MarginalValueCurve& v) {
    check_bid_fits(bid, v);
    const double q_total = v.total_quantity();

    std::vector<double> candidates = v.breakpoints();
    for (double q : bid.quantities())
        if (q <= q_total) candidates.push_back(q);
    candidates.push_back(0.0);
    candidates.push_back(q_total);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    LossReport report;
    auto consider = [&](double value, double q) {
        if (value > report.loss) {
            report.loss = value;
            report.argmax_q = q;
        }
    };
    for (double q : candidates) {
        if (format == Format::PAB) {
            consider(pab_under_regret(bid, v, q), q);
        } else {
            consider(lab_regrets(bid, v, q, Side::Interior).max(), q);
            consider(lab_regrets(bid, v, q, Side::AtStep).max(), q);
        }
    }
    return report;
}

double max_loss(Format format, const StepBid& bid, const MarginalValueCurve& v) {
    return max_loss_report(format, bid, v).loss;
}

double pab_under_regret(const BidVector& bid, const ValueVector& v, std::size_t k) {
    const std::size_t m = v.units();
    if (bid.units() != m || std::abs(bid.unit_quantity() - v.unit_quantity()) > kMonotoneRepairTol)
        throw std::domain_error("regret: bid and value grids differ");
    if (k > m) throw std::domain_error("regret: unit index out of range");
    const double next = k < m ? bid[k] : 0.0; // b_{k+1}, with b_{M+1} = 0
    double total = 0.0;
    for (std::size_t j = 0; j < k; ++j) total += bid[j] - next;
    for (std::size_t j = k; j < m; ++j) total += positive_part(v[j] - next);
    return total * v.unit_quantity();
}

double pab_over_regret(const BidVector& bid, std::size_t k) {
    if (k > bid.units()) throw std::domain_error("regret: unit index out of range");
    double total = 0.0;
    for (std::size_t j = 0; j < k; ++j) total += bid[j];
    return total * bid.unit_quantity();
}

ConditionalRegret lab_regrets(const BidVector& bid, const ValueVector& v, std::size_t k) {
    const std::size_t m = v.units();
    if (bid.units() != m || std::abs(bid.unit_quantity() - v.unit_quantity()) > kMonotoneRepairTol)
        throw std::domain_error("regret: bid and value grids differ");
    if (k > m) throw std::domain_error("regret: unit index out of range");
    const double w = v.unit_quantity();
    const double next = k < m ? bid[k] : 0.0;
    ConditionalRegret r;
    r.quantity = w * static_cast<double>(k);
    r.over = k > 0 ? r.quantity * bid[k - 1] : 0.0;
    double under = 0.0;
    for (std::size_t j = k; j < m; ++j) under += positive_part(v[j] - next);
    r.under = under * w;
    return r;
}

double max_loss(Format format, const BidVector& bid, const ValueVector& v) {
    double loss = 0.0;
    for (std::size_t k = 0; k <= v.units(); ++k) {
        const double value = format == Format::PAB ? pab_under_regret(bid, v, k)
                                                   : lab_regrets(bid, v, k).max();
        loss = std::max(loss, value);
    }
    return loss;
}

} // namespace regret
} // namespace minimax_bid
