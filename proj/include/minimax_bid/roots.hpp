#pragma once

#include <cmath>
#include <utility>

#include "minimax_bid/common.hpp"

namespace minimax_bid {

struct RootStats {
    long iterations = 0;
    double residual = 0.0;

    void absorb(const RootStats& other) {
        iterations += other.iterations;
        if (std::abs(other.residual) > std::abs(residual)) residual = other.residual;
    }
};

// All 1-D roots in this project are found by bisection, never by derivative
// methods: residuals contain positive-part terms and are only piecewise
// smooth. Bisection runs until the bracket has no representable midpoint or
// the iteration cap is hit, whichever comes first.
inline constexpr int kMaxBisectIterations = 200;
inline constexpr double kResidualTol = 1e-12;

/// Root of a weakly decreasing function on [lo, hi]. Requires f(lo) >= 0 >= f(hi)
/// up to kResidualTol; returns the endpoint when the bracket degenerates.
template <typename F>
double bisect_decreasing(F&& f, double lo, double hi, RootStats* stats = nullptr) {
    double flo = f(lo);
    double fhi = f(hi);
    long iters = 0;
    double x = lo;
    double fx = flo;
    if (flo <= 0.0) {
        x = lo;
        fx = flo;
    } else if (fhi >= 0.0) {
        x = hi;
        fx = fhi;
    } else {
        for (; iters < kMaxBisectIterations; ++iters) {
            double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            double fm = f(mid);
            if (fm >= 0.0) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
                fhi = fm;
            }
        }
        if (std::abs(flo) <= std::abs(fhi)) {
            x = lo;
            fx = flo;
        } else {
            x = hi;
            fx = fhi;
        }
    }
    if (stats != nullptr) {
        stats->iterations += iters;
        if (std::abs(fx) > std::abs(stats->residual)) stats->residual = fx;
    }
    return x;
}

/// Root of a weakly increasing function on [lo, hi].
template <typename F>
double bisect_increasing(F&& f, double lo, double hi, RootStats* stats = nullptr) {
    return bisect_decreasing([&](double x) { return -f(x); }, lo, hi, stats);
}

/// Golden-section minimizer on [lo, hi]; assumes unimodality on the bracket.
/// Returns the argmin located to within x_tol.
template <typename F>
double golden_section_min(F&& f, double lo, double hi, double x_tol) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    int guard = 0;
    while (b - a > x_tol && guard++ < 400) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
        if (x1 >= x2) break; // bracket exhausted at double precision
    }
    return f1 <= f2 ? x1 : x2;
}

} // namespace minimax_bid
