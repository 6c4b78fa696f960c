#include <doctest.h>

#include <stdexcept>

#include <array>
#include <cmath>
#include <numbers>

#include "dlab/body.hpp"
#include "dlab/rng.hpp"

using dlab::body::BodyParams;
using dlab::body::BoundaryPoint;
using dlab::body::FlatPointBody;
using dlab::body::Side;

namespace {

// Closed-form area oracle for d=2: integral_0^1 2 y^{1/g} dy plus the area of
// the region between the full chord and the circle, assembled from the
// circular segment formulas. Independent of the implementation's quadrature.
double area_oracle_2d(double g) {
    double y_c = 1.0 + 1.0 / g;
    double rho = std::sqrt(1.0 + 1.0 / (g * g));
    double power_part = 2.0 * g / (g + 1.0);
    // 2 * integral over u in [-1/g, rho] of sqrt(rho^2 - u^2) du
    auto anti = [&](double u) { return u * std::sqrt(rho * rho - u * u) + rho * rho * std::asin(u / rho); };
    double arc_part = anti(rho) - anti(-1.0 / g);
    (void)y_c;
    return power_part + arc_part;
}

std::array<double, 2> pt(double x, double y) { return {x, y}; }

}  // namespace

TEST_CASE("derived constants and gluing regularity") {
    for (double g : {2.0, 2.5, 3.0, 4.0, 6.0, 10.0}) {
        FlatPointBody b({2, g});
        CHECK(b.arc_center() == doctest::Approx(1.0 + 1.0 / g));
        CHECK(b.arc_radius() == doctest::Approx(std::sqrt(1.0 + 1.0 / (g * g))));
        CHECK(b.arc_radius() < b.arc_center());

        // value and slope of the two lower branches agree at r = 1
        double arc_val = b.arc_center() - std::sqrt(b.arc_radius() * b.arc_radius() - 1.0);
        CHECK(std::abs(arc_val - 1.0) < 1e-12);
        double arc_slope = 1.0 / std::sqrt(b.arc_radius() * b.arc_radius() - 1.0);
        CHECK(std::abs(arc_slope - g) < 1e-12 * g);
        CHECK(b.pow_gamma_deriv(1.0) == doctest::Approx(g).epsilon(1e-12));
    }
}

TEST_CASE("contains: flat point, below, and the seam column") {
    FlatPointBody b({2, 2.0});
    CHECK(b.contains(pt(0, 0)));
    CHECK_FALSE(b.contains(pt(0, -0.1)));
    CHECK(b.contains(pt(1, 1)));
    CHECK_FALSE(b.contains(pt(1, 0.99)));
    // h_up(1) = 2 for gamma = 2
    CHECK(b.contains(pt(1, 2.0)));
    CHECK_FALSE(b.contains(pt(1, 2.0 + 1e-9)));
}

TEST_CASE("volume against the closed-form oracle") {
    CHECK(FlatPointBody({2, 2.0}).volume() == doctest::Approx(4.3764).epsilon(2.5e-4));
    CHECK(FlatPointBody({2, 4.0}).volume() == doctest::Approx(3.7793).epsilon(2.5e-4));
    for (double g : {2.0, 3.0, 4.0, 6.0})
        CHECK(FlatPointBody({2, g}).volume() == doctest::Approx(area_oracle_2d(g)).epsilon(1e-10));

    // containment: inscribed disk and bounding box
    FlatPointBody b({2, 2.0});
    double rho = b.arc_radius();
    CHECK(b.volume() > std::numbers::pi * rho * rho);
    CHECK(b.volume() < 2.0 * rho * b.height());
}

TEST_CASE("volume against a rejection-sampling oracle") {
    for (double g : {2.0, 4.0}) {
        for (int d : {2, 3}) {
            FlatPointBody b({d, g});
            dlab::rng::Stream st(dlab::rng::derive(17, d, int(g)));
            const long long n = d == 2 ? 10'000'000 : 2'000'000;
            double rho = b.arc_radius(), H = b.height();
            double box = std::pow(2.0 * rho, d - 1) * H;
            long long hits = 0;
            std::array<double, 3> x{};
            for (long long k = 0; k < n; ++k) {
                for (int i = 0; i + 1 < d; ++i) x[i] = rho * (2.0 * st.uniform() - 1.0);
                x[d - 1] = H * st.uniform();
                if (b.contains(std::span<const double>(x.data(), size_t(d)))) ++hits;
            }
            double p = double(hits) / double(n);
            double est = box * p;
            double se = box * std::sqrt(p * (1.0 - p) / double(n));
            CHECK(std::abs(est - b.volume()) < 3.0 * se);
        }
    }
}

TEST_CASE("support points: poles, equator, round trip") {
    FlatPointBody b({2, 2.0});
    auto down = b.support_point(pt(0, -1));
    CHECK(down.r == doctest::Approx(0.0));
    CHECK(down.y == doctest::Approx(0.0));
    auto up = b.support_point(pt(0, 1));
    CHECK(up.y == doctest::Approx(b.height()));
    auto side = b.support_point(pt(1, 0));
    CHECK(side.r == doctest::Approx(1.1180339887498949).epsilon(1e-9));
    CHECK(side.y == doctest::Approx(1.5).epsilon(1e-9));

    // support_point(normal(.)) is the identity on random boundary points
    for (double g : {2.0, 3.0, 6.0}) {
        FlatPointBody bb({2, g});
        dlab::rng::Stream st(dlab::rng::derive(5, int(10 * g)));
        for (int k = 0; k < 1000; ++k) {
            bool upper = st.uniform() < 0.5;
            double r = bb.arc_radius() * st.uniform();
            double sgn = st.uniform() < 0.5 ? -1.0 : 1.0;
            double nr, ny;
            if (upper) {
                double yy = std::sqrt(bb.arc_radius() * bb.arc_radius() - r * r);
                nr = r / bb.arc_radius();
                ny = yy / bb.arc_radius();
            } else if (r >= 1.0) {
                double yy = std::sqrt(bb.arc_radius() * bb.arc_radius() - r * r);
                nr = r / bb.arc_radius();
                ny = -yy / bb.arc_radius();
            } else {
                double hp = bb.pow_gamma_deriv(r);
                double den = std::sqrt(1.0 + hp * hp);
                nr = hp / den;
                ny = -1.0 / den;
            }
            auto sp = b.support_point(pt(sgn * nr, ny));  // r-sign immaterial by symmetry
            auto sp2 = bb.support_point(pt(nr, ny));
            (void)sp;
            double y_true = upper ? bb.upper_profile(r) : bb.lower_profile(r);
            CHECK(std::abs(sp2.r - r) < 1e-8);
            CHECK(std::abs(sp2.y - y_true) < 1e-8);
        }
    }
}

TEST_CASE("curvature: arc, seam, and the flat point") {
    FlatPointBody b2({2, 2.0});
    auto apex = b2.support_point(pt(0, 1));
    CHECK(apex.gaussian_curvature == doctest::Approx(1.0 / b2.arc_radius()).epsilon(1e-12));
    CHECK(apex.gaussian_curvature == doctest::Approx(0.8944271909999159).epsilon(1e-12));

    // lower-graph point just inside the seam: kappa = h''/(1+h'^2)^{3/2}
    BoundaryPoint near_seam;
    near_seam.r = 1.0 - 1e-9;
    near_seam.y = b2.lower_profile(near_seam.r);
    near_seam.side = Side::lower;
    CHECK(b2.curvature_at(near_seam) == doctest::Approx(2.0 / std::pow(5.0, 1.5)).epsilon(1e-6));
    CHECK(2.0 / std::pow(5.0, 1.5) == doctest::Approx(0.17889).epsilon(1e-4));

    // ties at the seam resolve to the arc branch
    BoundaryPoint seam;
    seam.r = 1.0;
    seam.y = 1.0;
    seam.side = Side::lower;
    CHECK(b2.curvature_at(seam) == doctest::Approx(1.0 / b2.arc_radius()));

    // flat point: zero iff gamma > 2
    BoundaryPoint origin;
    origin.r = 0.0;
    origin.y = 0.0;
    origin.side = Side::lower;
    CHECK(FlatPointBody({2, 4.0}).curvature_at(origin) == 0.0);
    CHECK(FlatPointBody({2, 2.0}).curvature_at(origin) == doctest::Approx(2.0));
    CHECK(FlatPointBody({3, 2.0}).curvature_at(origin) == doctest::Approx(4.0));

    // positivity away from the origin
    dlab::rng::Stream st(dlab::rng::derive(11));
    for (double g : {2.0, 4.0}) {
        FlatPointBody bb({3, g});
        for (int k = 0; k < 1000; ++k) {
            BoundaryPoint p;
            p.r = 1e-3 + (bb.arc_radius() - 1e-3) * st.uniform();
            p.side = st.uniform() < 0.5 ? Side::lower : Side::upper;
            p.y = p.side == Side::lower ? bb.lower_profile(p.r) : bb.upper_profile(p.r);
            CHECK(bb.curvature_at(p) > 0.0);
        }
    }
}

TEST_CASE("slice radius: branch agreement and domain errors") {
    FlatPointBody b({2, 2.0});
    CHECK(b.slice_radius(0.0) == 0.0);
    CHECK(b.slice_radius(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.slice_radius(1.0 - 1e-12) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(b.slice_radius(1.0 + 1e-12) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(b.slice_radius(b.arc_center()) == doctest::Approx(b.arc_radius()).epsilon(1e-12));
    CHECK_THROWS_AS((void)b.slice_radius(-0.01), std::domain_error);
    CHECK_THROWS_AS((void)b.slice_radius(b.height() + 0.01), std::domain_error);
}

TEST_CASE("convexity: midpoints of contained points are contained") {
    for (int d : {2, 3}) {
        FlatPointBody b({d, 3.0});
        dlab::rng::Stream st(dlab::rng::derive(23, d));
        double rho = b.arc_radius(), H = b.height();
        int found = 0;
        std::array<double, 3> a{}, c{}, m{};
        while (found < 10000) {
            for (int i = 0; i + 1 < d; ++i) {
                a[i] = rho * (2.0 * st.uniform() - 1.0);
                c[i] = rho * (2.0 * st.uniform() - 1.0);
            }
            a[d - 1] = H * st.uniform();
            c[d - 1] = H * st.uniform();
            if (!b.contains(std::span<const double>(a.data(), size_t(d))) ||
                !b.contains(std::span<const double>(c.data(), size_t(d))))
                continue;
            ++found;
            for (int i = 0; i < d; ++i) m[i] = 0.5 * (a[i] + c[i]);
            CHECK(b.contains(std::span<const double>(m.data(), size_t(d))));
        }
    }
}

TEST_CASE("parameter validation") {
    BodyParams bad_d{1, 2.0};
    BodyParams bad_gamma{2, 1.5};
    BodyParams ok{2, 2.0};
    CHECK_THROWS_AS(bad_d.validate(), std::invalid_argument);
    CHECK_THROWS_AS(bad_gamma.validate(), std::invalid_argument);
    CHECK_NOTHROW(ok.validate());
}
