#include "minimax_bid/frb.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "minimax_bid/roots.hpp"

namespace minimax_bid {
namespace frb {

namespace {

double positive_part(double x) { return x > 0.0 ? x : 0.0; }

void check_below_value(const BidVector& b, const ValueVector& v) {
    if (b.units() != v.units() ||
        std::abs(b.unit_quantity() - v.unit_quantity()) > kMonotoneRepairTol)
        throw std::domain_error("frb: bid and value grids differ");
    for (std::size_t k = 0; k < b.units(); ++k)
        if (b[k] > v[k] + kMonotoneRepairTol)
            throw std::domain_error("frb: analysis requires bids weakly below values");
}

} // namespace

ConditionalRegret frb_regrets(const BidVector& b, const ValueVector& v, std::size_t k) {
    check_below_value(b, v);
    const std::size_t m = v.units();
    if (k >= m) throw std::domain_error("frb: units won must be below M");
    const double w = v.unit_quantity();
    const double next = k < m ? b[k] : 0.0; // b_{k+1}
    ConditionalRegret r;
    r.quantity = w * static_cast<double>(k);
    r.over = r.quantity * next;
    double under = 0.0;
    for (std::size_t j = k; j < m; ++j) under += positive_part(v[j] - next);
    r.under = under * w;
    return r;
}

double max_loss(const BidVector& b, const ValueVector& v) {
    double loss = 0.0;
    for (std::size_t k = 0; k < v.units(); ++k) loss = std::max(loss, frb_regrets(b, v, k).max());
    return loss;
}

BidVector solve_frb(const ValueVector& v) {
    const std::size_t m = v.units();
    const auto& vals = v.entries();
    std::vector<double> b(m);
    b[0] = vals[0];
    for (std::size_t k = 1; k < m; ++k) {
        // b_{k+1} equates k * b with the surplus above b on units k+1..M.
        auto residual = [&](double x) {
            double under = 0.0;
            for (std::size_t j = k; j < m; ++j) under += positive_part(vals[j] - x);
            return static_cast<double>(k) * x - under;
        };
        b[k] = bisect_increasing(residual, 0.0, vals[0]);
    }
    for (std::size_t k = 1; k < m; ++k) b[k] = std::min(b[k], b[k - 1]);
    return BidVector(std::move(b), v.unit_quantity());
}

} // namespace frb
} // namespace minimax_bid
