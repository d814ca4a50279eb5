#include <doctest.h>

#include "minimax_bid/values.hpp"
#include "test_helpers.hpp"

using namespace minimax_bid;

TEST_CASE("value_mass on rectangles") {
    const auto v = MarginalValueCurve::constant(1.0, 1.0);
    CHECK(v.value_mass(0.0, 1.0) == doctest::Approx(1.0));
    CHECK(v.value_mass(0.3, 0.3) == doctest::Approx(0.0));

    const MarginalValueCurve two({{1.0, 1.0}, {5.0, 0.85}});
    CHECK(two.value_mass(0.0, 5.0) == doctest::Approx(4.4));
}

TEST_CASE("clipped_surplus") {
    const auto v = MarginalValueCurve::constant(1.0, 1.0);
    CHECK(v.clipped_surplus(0.5, 0.0, 1.0) == doctest::Approx(0.5));
    CHECK(v.clipped_surplus(1.0, 0.0, 1.0) == doctest::Approx(0.0));
    CHECK(v.clipped_surplus(2.0, 0.0, 1.0) == doctest::Approx(0.0));

    const MarginalValueCurve two({{1.0, 1.0}, {5.0, 0.85}});
    CHECK(two.clipped_surplus(0.9, 0.0, 5.0) == doctest::Approx(0.1));
}

TEST_CASE("generalized_inverse") {
    const auto flat = MarginalValueCurve::constant(1.0, 1.0);
    CHECK(flat.generalized_inverse(0.3) == doctest::Approx(1.0));
    CHECK(flat.generalized_inverse(1.0) == doctest::Approx(0.0));

    const MarginalValueCurve two({{1.0, 1.0}, {5.0, 0.85}});
    CHECK(two.generalized_inverse(0.9) == doctest::Approx(1.0));
    CHECK(two.generalized_inverse(0.5) == doctest::Approx(5.0));
}

TEST_CASE("construction invariants") {
    CHECK_THROWS_AS(MarginalValueCurve({{1.0, 0.5}, {2.0, 0.8}}), std::invalid_argument);
    CHECK_THROWS_AS(MarginalValueCurve({{1.0, 0.5}, {2.0, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(MarginalValueCurve({{1.0, 0.5}, {1.0, 0.4}}), std::invalid_argument);
    // Violations at bisection tolerance are repaired.
    const MarginalValueCurve repaired({{1.0, 0.5}, {2.0, 0.5 + 1e-13}});
    CHECK(repaired.value_at(1.5) == doctest::Approx(0.5));
    CHECK_THROWS_AS(MarginalValueCurve({{1.0, -0.2}}), std::invalid_argument);
    CHECK_THROWS_AS(StepBid({{0.5, 0.2}, {0.5, 0.1}}), std::invalid_argument);
    CHECK_THROWS_AS(ValueVector({0.5, 0.6}, 1.0), std::invalid_argument);
}

TEST_CASE("value_mass is additive") {
    SplitMix64 rng(7);
    for (int i = 0; i < 50; ++i) {
        const auto v = test_helpers::random_curve(rng);
        double a = rng.next_double(), b = rng.next_double(), c = rng.next_double();
        if (a > b) std::swap(a, b);
        if (b > c) std::swap(b, c);
        if (a > b) std::swap(a, b);
        CHECK(v.value_mass(a, c) ==
              doctest::Approx(v.value_mass(a, b) + v.value_mass(b, c)).epsilon(1e-12));
    }
}

TEST_CASE("clipped_surplus decreasing and convex in p, equals mass at 0") {
    SplitMix64 rng(11);
    for (int i = 0; i < 50; ++i) {
        const auto v = test_helpers::random_curve(rng);
        CHECK(v.clipped_surplus(0.0, 0.0, 1.0) == doctest::Approx(v.value_mass(0.0, 1.0)));
        const double p = rng.next_double(0.0, 1.0);
        const double h = 0.05;
        const double lo = v.clipped_surplus(p, 0.0, 1.0);
        const double mid = v.clipped_surplus(p + h, 0.0, 1.0);
        const double hi2 = v.clipped_surplus(p + 2 * h, 0.0, 1.0);
        CHECK(lo >= mid - 1e-12);
        CHECK(mid >= hi2 - 1e-12);
        CHECK(lo + hi2 >= 2 * mid - 1e-12); // convexity
    }
}

TEST_CASE("generalized_inverse decreasing and right-continuous") {
    SplitMix64 rng(13);
    for (int i = 0; i < 50; ++i) {
        const auto v = test_helpers::random_curve(rng);
        const double p1 = rng.next_double(0.0, 1.0);
        const double p2 = p1 + rng.next_double(0.0, 0.3);
        CHECK(v.generalized_inverse(p1) >= v.generalized_inverse(p2));
        // Right-continuity: at a level the inverse equals its value just above.
        for (const auto& s : v.segments()) {
            CHECK(v.generalized_inverse(s.level) ==
                  doctest::Approx(v.generalized_inverse(s.level + 1e-13)));
        }
    }
}

TEST_CASE("value vector to curve round trip preserves cell masses") {
    SplitMix64 rng(17);
    for (int i = 0; i < 30; ++i) {
        const auto curve = test_helpers::random_curve(rng);
        const std::size_t m = 1 + rng.next_below(6);
        const auto values = ValueVector::from_curve(curve, m);
        const auto rebuilt = values.to_curve();
        const double w = values.unit_quantity();
        for (std::size_t k = 0; k < m; ++k) {
            const double lo = w * static_cast<double>(k);
            const double hi = w * static_cast<double>(k + 1);
            CHECK(rebuilt.value_mass(lo, hi) == doctest::Approx(curve.value_mass(lo, hi)));
        }
    }
}

TEST_CASE("step bid lookup conventions") {
    const StepBid bid({{0.5, 0.6}, {1.0, 0.2}});
    CHECK(bid.level_at(0.0) == doctest::Approx(0.6));
    CHECK(bid.level_at(0.5) == doctest::Approx(0.2));  // right-continuous
    CHECK(bid.level_before(0.5) == doctest::Approx(0.6));
    CHECK(bid.level_at(1.0) == doctest::Approx(0.0));  // b_+(Q) = 0
    CHECK(bid.level_before(1.0) == doctest::Approx(0.2));
    CHECK(bid.pay_integral(0.75) == doctest::Approx(0.5 * 0.6 + 0.25 * 0.2));
    CHECK(StepBid().level_at(0.3) == doctest::Approx(0.0));
}

TEST_CASE("range preconditions raise domain errors") {
    const auto v = MarginalValueCurve::constant(1.0, 1.0);
    CHECK_THROWS_AS(v.value_mass(-0.5, 0.5), std::domain_error);
    CHECK_THROWS_AS(v.value_mass(0.0, 1.5), std::domain_error);
    CHECK_THROWS_AS(v.clipped_surplus(-0.5, 0.0, 1.0), std::domain_error);
}
