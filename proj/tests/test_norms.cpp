#include <doctest.h>

#include <algorithm>
#include <stdexcept>

#include <cmath>

#include "dlab/body.hpp"
#include "dlab/norms.hpp"
#include "dlab/parallel.hpp"

using dlab::body::FlatPointBody;
using namespace dlab::norms;

TEST_CASE("degenerate single-sample estimates collapse to |D|") {
    FlatPointBody b({2, 2.0});
    SampleHooks hooks;
    hooks.force_identity = true;
    hooks.force_zero_translation = true;

    double expected = std::abs(b.volume() - 7.0);
    auto e1 = lp_norm_estimate(b, 1.0, 1.0, 1, 1, 0, 0, hooks);
    CHECK(e1.value == doctest::Approx(expected).epsilon(1e-12));
    CHECK(e1.value == doctest::Approx(2.6236).epsilon(1e-3));
    // one-point L^p collapse: identical for p = 2 and p = 4
    CHECK(lp_norm_estimate(b, 1.0, 2.0, 1, 1, 0, 0, hooks).value ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(lp_norm_estimate(b, 1.0, 4.0, 1, 1, 0, 0, hooks).value ==
          doctest::Approx(expected).epsilon(1e-12));

    // rotation-only with a single sample at R = 1
    auto r1 = rotation_only_average(b, 1.0, 1.0, 1, 0);
    // one Haar rotation, t = 0: |D| of some rotated placement; with the
    // identity hook instead it matches the frozen value
    (void)r1;
    SampleHooks id_only;
    id_only.force_identity = true;
    auto samples = sample_abs_discrepancies(b, 1.0, 1, 1, 0, 0,
                                            SampleHooks{true, true});
    CHECK(samples.size() == 1);
    CHECK(samples[0] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("estimates are monotone in p on shared samples") {
    FlatPointBody b({2, 2.0});
    auto samples = sample_abs_discrepancies(b, 16.0, 8, 8, 5);
    double prev = 0.0;
    for (double p : {1.0, 2.0, 4.0, 8.0}) {
        auto e = estimate_from_samples(samples, 16.0, p);
        CHECK(e.value >= prev - 1e-12);
        prev = e.value;
    }
}

TEST_CASE("norm estimates are bit-identical across thread counts") {
    FlatPointBody b({2, 3.0});
    dlab::parallel::set_max_threads(1);
    auto a = lp_norm_estimate(b, 24.0, 2.0, 8, 8, 123);
    dlab::parallel::set_max_threads(2);
    auto c = lp_norm_estimate(b, 24.0, 2.0, 8, 8, 123);
    dlab::parallel::set_max_threads(0);
    CHECK(a.value == c.value);
    CHECK(a.stderr_ == c.stderr_);
}

TEST_CASE("sup_sample mode reports the sample maximum") {
    FlatPointBody b({2, 2.0});
    auto samples = sample_abs_discrepancies(b, 16.0, 6, 6, 11);
    auto sup = sup_sample_estimate(b, 16.0, 6, 6, 11);
    CHECK(sup.value == *std::max_element(samples.begin(), samples.end()));
    // dominates every finite-p estimate on the same samples
    for (double p : {1.0, 2.0, 8.0})
        CHECK(sup.value >= estimate_from_samples(samples, 16.0, p).value - 1e-12);
}

TEST_CASE("fit_exponent on synthetic power laws") {
    std::vector<NormEstimate> series;
    for (double R : {8.0, 16.0, 32.0, 64.0, 128.0}) {
        NormEstimate e;
        e.R = R;
        e.value = std::sqrt(R);
        series.push_back(e);
    }
    auto fit = fit_exponent(series);
    CHECK(fit.slope == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(fit.retried);

    for (auto& e : series) e.value = 3.0 * std::pow(e.R, 0.75);
    fit = fit_exponent(series);
    CHECK(fit.slope == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));

    series[2].value = -1.0;
    CHECK_THROWS_AS((void)fit_exponent(series), std::invalid_argument);
    series.resize(3);
    CHECK_THROWS_AS((void)fit_exponent(series), std::invalid_argument);
}

TEST_CASE("sweep config validation") {
    SweepConfig cfg;
    cfg.R_grid = {8, 16, 32};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);  // too short
    cfg.R_grid = {8, 16, 32, 32};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);  // not increasing
    cfg.R_grid = {8, 16, 32, 64};
    CHECK_NOTHROW(cfg.validate());
    cfg.p = 0.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("parseval check at a small dilation") {
    FlatPointBody b({2, 3.0});
    auto id = dlab::lattice::identity_rotation(2);
    double cutoff = parseval_pick_cutoff(b, 8.0);
    ParsevalResult pr;
    for (int tries = 0;; ++tries) {
        try {
            pr = parseval_check(b, 8.0, id, 3000, cutoff, 2);
            break;
        } catch (const std::invalid_argument&) {
            REQUIRE(tries < 6);
            cutoff *= 1.25;
        }
    }
    CHECK(pr.tail_fraction < 0.01);
    CHECK(pr.ratio == doctest::Approx(1.0).epsilon(0.12));
    CHECK(std::abs(pr.lhs - pr.rhs) < 4.0 * pr.lhs_stderr + 0.03 * pr.rhs);
}
