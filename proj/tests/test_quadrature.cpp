#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "dlab/bessel.hpp"
#include "dlab/quadrature.hpp"

using namespace dlab::quad;

TEST_CASE("gauss-15 panel rule: polynomials and oscillations") {
    // degree-29 monomial is integrated exactly on one panel
    auto mono = [](double x) { return std::complex<double>(std::pow(x, 29.0), 0.0); };
    std::vector<Panel> one{{0.0, 1.0}};
    CHECK(integrate(one, mono).real() == doctest::Approx(1.0 / 30.0).epsilon(1e-13));

    // e^{2 pi i w x} over [0,1] against the closed form, half-period panels
    for (double w : {3.0, 17.5, 120.0}) {
        auto f = [&](double x) {
            double ph = 2.0 * std::numbers::pi * w * x;
            return std::complex<double>(std::cos(ph), std::sin(ph));
        };
        auto panels = uniform_panels(0.0, 1.0, 0.5 / w);
        std::complex<double> exact =
            (std::exp(std::complex<double>(0, 2.0 * std::numbers::pi * w)) - 1.0) /
            std::complex<double>(0, 2.0 * std::numbers::pi * w);
        CHECK(std::abs(integrate(panels, f) - exact) < 1e-12);
    }
}

TEST_CASE("adaptive doubling reports convergence and error") {
    auto f = [](double x) { return std::complex<double>(std::exp(-x * x), 0.0); };
    auto res = integrate_adaptive(uniform_panels(0.0, 2.0, 0.5), f, 1e-12, 1e-10);
    CHECK(res.converged);
    CHECK(res.value.real() == doctest::Approx(0.8820813907624215).epsilon(1e-10));
    CHECK(res.error < 1e-10);
}

TEST_CASE("bessel j1: series/asymptotic seam and reference values") {
    using dlab::bessel::j1;
    using dlab::bessel::j1_series;

    // seam agreement against the 50-term long-double series
    for (double x : {11.9, 12.0, 12.1}) {
        double ref = double(j1_series((long double)x, 50));
        CHECK(std::abs(j1(x) - ref) < 1e-10 * std::max(1.0, std::abs(ref)));
    }

    // independent series oracle up to x = 24 (beyond that the oracle's own
    // cancellation, max term ~ 5e10 in long double, passes 1e-9)
    for (double x = 0.1; x < 24.0; x += 0.37) {
        double ref = double(j1_series((long double)x, 60));
        CHECK(std::abs(j1(x) - ref) < 1e-9);
    }

    // libm's j1 as a second, independent oracle across the seam and beyond
    for (double x = 0.5; x < 30.0; x += 0.29) {
        CHECK(std::abs(j1(x) - ::j1(x)) < 1e-9);
    }

    // classical values
    CHECK(j1(1.0) == doctest::Approx(0.4400505857449335).epsilon(1e-12));
    CHECK(j1(5.0) == doctest::Approx(-0.3275791375914652).epsilon(1e-12));
    CHECK(j1(-5.0) == doctest::Approx(0.3275791375914652).epsilon(1e-12));
}
