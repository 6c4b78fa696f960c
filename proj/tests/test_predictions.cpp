#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <limits>

#include "dlab/predictions.hpp"

using namespace dlab::predictions;

TEST_CASE("regime boundaries") {
    // at gamma = d+1 all three critical indices coincide
    auto rb = regime_boundaries(2, 3.0);
    CHECK(rb.p_star == doctest::Approx(4.0));
    CHECK(rb.p_flat == doctest::Approx(4.0));
    CHECK(rb.p_mix == doctest::Approx(4.0));

    CHECK(std::isinf(regime_boundaries(2, 2.0).p_flat));

    rb = regime_boundaries(3, 6.0);
    CHECK(rb.p_flat == doctest::Approx(2.5));
    CHECK(rb.p_mix == doctest::Approx(2.8));
    CHECK(rb.p_flat < rb.p_mix);  // the gamma > d+1 ordering

    // p_flat > p_star iff gamma < d+1
    CHECK(regime_boundaries(3, 3.0).p_flat > regime_boundaries(3, 3.0).p_star);
    CHECK(regime_boundaries(3, 5.0).p_flat < regime_boundaries(3, 5.0).p_star);
}

TEST_CASE("joint exponents at pinned parameter points") {
    auto p1 = predicted_exponent(2, 4.0, 2.0, Mode::joint);
    CHECK(p1.exponent == doctest::Approx(0.5));
    CHECK(p1.log_power == 0.0);

    auto p2 = predicted_exponent(2, 4.0, 3.0, Mode::joint);  // p = p_flat = 3
    CHECK(p2.exponent == doctest::Approx(0.5));
    CHECK(p2.log_power == doctest::Approx(1.0 / 3.0));

    auto p3 = predicted_exponent(3, 6.0, 10.0, Mode::joint);
    CHECK(p3.exponent == doctest::Approx(2.0 * 0.9 * (5.0 / 6.0)).epsilon(1e-12));
    CHECK(p3.exponent == doctest::Approx(1.5));

    auto p4 = predicted_exponent(2, 3.0, 4.0, Mode::joint);  // gamma = d+1 critical point
    CHECK(p4.exponent == doctest::Approx(0.5));
    CHECK(p4.log_power == doctest::Approx(0.25));

    auto sup = predicted_exponent(2, 2.5, 1.0, Mode::sup);
    CHECK(sup.exponent == doctest::Approx(2.0 / 3.0));
    auto sup3 = predicted_exponent(2, 3.0, 1.0, Mode::sup);
    CHECK(sup3.exponent == doctest::Approx(2.0 / 3.0));

    auto fr = predicted_exponent(2, 4.0, 8.0, Mode::fourier_rot);
    CHECK(fr.exponent == doctest::Approx(-1.34375).epsilon(1e-12));

    auto lo = predicted_exponent(2, 4.0, 2.0, Mode::lower_bound);
    CHECK(lo.exponent == doctest::Approx(0.5));
    CHECK(lo.bound_kind == BoundKind::lower);

    auto ro = predicted_exponent(2, 2.0, 1.0, Mode::rotation_only_L1);
    CHECK(ro.exponent == doctest::Approx(2.0 / 3.0));

    CHECK_THROWS_AS((void)predicted_exponent(2, 1.5, 2.0, Mode::joint), std::invalid_argument);
    CHECK_THROWS_AS((void)predicted_exponent(2, 2.0, 0.5, Mode::joint), std::invalid_argument);
    CHECK_THROWS_AS((void)predicted_exponent(1, 2.0, 2.0, Mode::joint), std::invalid_argument);
}

TEST_CASE("exponents are nonnegative in every discrepancy mode") {
    for (int d : {2, 3, 4}) {
        for (double g : {2.0, 3.0, 5.0, 9.0}) {
            for (double p : {1.0, 2.0, 3.0, 6.0, 20.0}) {
                for (Mode m : {Mode::joint, Mode::rotation_only_L1, Mode::sup, Mode::lower_bound}) {
                    CHECK(predicted_exponent(d, g, p, m).exponent >= 0.0);
                }
                CHECK(predicted_exponent(d, g, p, Mode::fourier_rot).exponent < 0.0);
            }
        }
    }
}

TEST_CASE("continuity across the regime boundaries") {
    for (int d = 2; d <= 6; ++d) {
        for (double g : {2.1, 3.0, double(d + 1), 10.0}) {
            auto rb = regime_boundaries(d, g);
            // p_star identity
            double ps = rb.p_star;
            double a = 0.5 * (d - 1.0);
            double b = d * (d - 1.0) * (ps - 2.0) / (d * (ps - 2.0) + ps);
            CHECK(std::abs(a - b) < 1e-12);
            // p_flat: the adjacent branch formulas meet the critical value
            if (std::isfinite(rb.p_flat)) {
                double pf = rb.p_flat;
                double mid = predicted_exponent(d, g, pf, Mode::joint).exponent;
                double left = g <= d + 1.0 ? d * (d - 1.0) * (pf - 2.0) / (d * (pf - 2.0) + pf)
                                           : 0.5 * (d - 1.0);
                double right = g <= d + 1.0
                                   ? d * (d - 1.0) / (d + 1.0) *
                                         (1.0 - 2.0 * (g - 1.0) / (pf * (d + g - 1.0)))
                                   : (d - 1.0) * (1.0 - 1.0 / pf) * (1.0 - 1.0 / g);
                CHECK(std::abs(left - mid) < 1e-12);
                CHECK(std::abs(right - mid) < 1e-12);
            }
        }
    }
}

TEST_CASE("monotonicity and the sup limit") {
    for (int d : {2, 3, 5}) {
        for (double g : {2.0, 2.5, 4.0, 8.0}) {
            double prev = 0.0;
            for (double p = 1.0; p <= 64.0; p *= 1.3) {
                double e = predicted_exponent(d, g, p, Mode::joint).exponent;
                CHECK(e >= prev - 1e-12);
                prev = e;
            }
            // p -> infinity approaches the sup-mode exponent
            double lim = predicted_exponent(d, g, 1e9, Mode::joint).exponent;
            double sup = predicted_exponent(d, g, 1.0, Mode::sup).exponent;
            CHECK(std::abs(lim - sup) < 1e-6);
        }
    }

    // gamma direction: nonincreasing up to d+1, nondecreasing beyond
    for (int d : {2, 3}) {
        double p = 12.0;
        double prev = 1e300;
        for (double g = 2.0; g <= d + 1.0 + 1e-9; g += 0.25) {
            double e = predicted_exponent(d, g, p, Mode::joint).exponent;
            CHECK(e <= prev + 1e-12);
            prev = e;
        }
        prev = 0.0;
        for (double g = d + 1.0; g <= 12.0; g += 0.5) {
            double e = predicted_exponent(d, g, p, Mode::joint).exponent;
            CHECK(e >= prev - 1e-12);
            prev = e;
        }
    }

    // sandwich: the lower bound never exceeds the joint exponent
    for (int d : {2, 3, 4})
        for (double g : {2.0, 3.0, 7.0})
            for (double p : {1.0, 2.0, 4.0, 10.0}) {
                double lo = predicted_exponent(d, g, p, Mode::lower_bound).exponent;
                double up = predicted_exponent(d, g, p, Mode::joint).exponent;
                CHECK(lo <= up + 1e-12);
            }
}

TEST_CASE("fourier_rot regimes") {
    // gamma = 2 keeps the curvature branch for every p
    for (double p : {1.0, 2.0, 50.0})
        CHECK(predicted_exponent(2, 2.0, p, Mode::fourier_rot).exponent ==
              doctest::Approx(-1.5));
    // p = 2 below the flat threshold for gamma = 4 (p_flat = 3)
    CHECK(predicted_exponent(2, 4.0, 2.0, Mode::fourier_rot).exponent == doctest::Approx(-1.5));
    // critical case carries the log power
    auto crit = predicted_exponent(2, 4.0, 3.0, Mode::fourier_rot);
    CHECK(crit.exponent == doctest::Approx(-1.5));
    CHECK(crit.log_power == doctest::Approx(2.0 * 1.0 / (2.0 * 3.0)).epsilon(1e-12));
}
