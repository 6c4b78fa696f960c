#include "dlab/body.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dlab::body {

namespace {

constexpr double kExtSlope = 1e12;  // pseudo-vertical wall past r = rho_c
constexpr double kHugeSlope = 1e300;

// 64-point Gauss-Legendre on [0,1], generated once by Newton iteration on
// the Legendre polynomial (Numerical Recipes "gauleg").
struct Gauss64 {
    std::array<double, 64> x{}, w{};
    Gauss64() {
        const int n = 64;
        const double pi = std::numbers::pi;
        for (int i = 0; i < (n + 1) / 2; ++i) {
            double z = std::cos(pi * (i + 0.75) / (n + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p1 = 1.0, p2 = 0.0;
                for (int j = 0; j < n; ++j) {
                    double p3 = p2;
                    p2 = p1;
                    p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
                }
                pp = n * (z * p1 - p2) / (z * z - 1.0);
                double z1 = z;
                z = z1 - p1 / pp;
                if (std::abs(z - z1) < 1e-15) break;
            }
            // map [-1,1] -> [0,1]
            x[i] = 0.5 * (1.0 - z);
            x[n - 1 - i] = 0.5 * (1.0 + z);
            w[i] = w[n - 1 - i] = 1.0 / ((1.0 - z * z) * pp * pp);
        }
    }
};

const Gauss64& gauss64() {
    static const Gauss64 g;
    return g;
}

}  // namespace

double unit_ball_volume(int n) {
    if (n < 0) throw std::invalid_argument("unit_ball_volume: n < 0");
    if (n == 0) return 1.0;
    const double pi = std::numbers::pi;
    return std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

void BodyParams::validate() const {
    if (d < 2) throw std::invalid_argument("BodyParams: d must be >= 2, got " + std::to_string(d));
    if (!(gamma >= 2.0))
        throw std::invalid_argument("BodyParams: gamma must be >= 2, got " + std::to_string(gamma));
}

FlatPointBody::FlatPointBody(BodyParams p) : params_(p) {
    params_.validate();
    const double g = params_.gamma;
    y_c_ = 1.0 + 1.0 / g;
    rho_c_ = std::sqrt(1.0 + 1.0 / (g * g));
    height_ = y_c_ + rho_c_;
    ball_radius_ = std::sqrt(rho_c_ * rho_c_ + 0.25 * height_ * height_);

    gamma_int_ = 0;
    for (int k : {2, 3, 4, 6})
        if (g == double(k)) gamma_int_ = k;

    // |Omega| = V_{d-1} * [ integral_0^1 y^{(d-1)/gamma} dy
    //                     + integral_{-1/gamma}^{rho_c} (rho_c^2-u^2)^{(d-1)/2} du ]
    // The power part is a closed form; the arc part becomes smooth after
    // u = rho_c sin(phi) and is integrated with Gauss-64.
    const int d = params_.d;
    const double vd1 = unit_ball_volume(d - 1);
    const double power_part = g / (g + d - 1.0);

    const double phi0 = std::asin(-1.0 / (g * rho_c_));
    const double phi1 = 0.5 * std::numbers::pi;
    const auto& q = gauss64();
    double arc = 0.0;
    for (int i = 0; i < 64; ++i) {
        double phi = phi0 + (phi1 - phi0) * q.x[i];
        arc += q.w[i] * std::pow(std::cos(phi), double(d));
    }
    arc *= (phi1 - phi0) * std::pow(rho_c_, double(d));

    volume_ = vd1 * (power_part + arc);
}

double FlatPointBody::pow_gamma(double r) const {
    switch (gamma_int_) {
        case 2: return r * r;
        case 3: return r * r * r;
        case 4: { double s = r * r; return s * s; }
        case 6: { double s = r * r * r; return s * s; }
        default: return std::pow(r, params_.gamma);
    }
}

double FlatPointBody::pow_gamma_deriv(double r) const {
    const double g = params_.gamma;
    switch (gamma_int_) {
        case 2: return 2.0 * r;
        case 3: return 3.0 * r * r;
        case 4: return 4.0 * r * r * r;
        case 6: { double s = r * r; return 6.0 * s * s * r; }
        default: return g * std::pow(r, g - 1.0);
    }
}

double FlatPointBody::root_gamma(double y) const {
    switch (gamma_int_) {
        case 2: return std::sqrt(y);
        case 3: return std::cbrt(y);
        case 4: return std::sqrt(std::sqrt(y));
        case 6: return std::cbrt(std::sqrt(y));
        default: return std::pow(y, 1.0 / params_.gamma);
    }
}

double FlatPointBody::lower_profile(double r) const {
    if (r < 1.0) return pow_gamma(r);
    double t = rho_c_ * rho_c_ - r * r;
    return y_c_ - std::sqrt(t > 0.0 ? t : 0.0);
}

double FlatPointBody::upper_profile(double r) const {
    double t = rho_c_ * rho_c_ - r * r;
    return y_c_ + std::sqrt(t > 0.0 ? t : 0.0);
}

double FlatPointBody::lower_profile_ext(double r) const {
    if (r <= rho_c_) return lower_profile(r);
    return y_c_ + kExtSlope * (r - rho_c_);
}

double FlatPointBody::upper_profile_ext(double r) const {
    if (r <= rho_c_) return upper_profile(r);
    return y_c_ - kExtSlope * (r - rho_c_);
}

double FlatPointBody::slice_radius(double y) const {
    if (y < 0.0 || y > height_)
        throw std::domain_error("slice_radius: y outside [0, " + std::to_string(height_) + "]");
    if (y <= 1.0) return root_gamma(y);
    double u = y - y_c_;
    double t = rho_c_ * rho_c_ - u * u;
    return std::sqrt(t > 0.0 ? t : 0.0);
}

double FlatPointBody::slice_slope(double y) const {
    if (y <= 0.0 || y >= height_) return kHugeSlope;
    if (y <= 1.0) {
        double r = root_gamma(y);
        double hp = pow_gamma_deriv(r);  // dy/dr
        return hp > 1e-300 ? 1.0 / hp : kHugeSlope;
    }
    double r = slice_radius(y);
    if (r <= 1e-300) return kHugeSlope;
    return std::abs(y_c_ - y) / r;
}

double FlatPointBody::margin_ry(double r, double y) const {
    double lo = lower_profile_ext(r) - y;
    double hi = y - upper_profile_ext(r);
    return lo > hi ? lo : hi;
}

double FlatPointBody::margin(std::span<const double> x) const {
    const int d = params_.d;
    double s = 0.0;
    for (int i = 0; i + 1 < d; ++i) s += x[i] * x[i];
    return margin_ry(std::sqrt(s), x[d - 1]);
}

BoundaryPoint FlatPointBody::support_point(std::span<const double> direction) const {
    const int d = params_.d;
    if (d > 3) throw std::invalid_argument("support_point: vector form limited to d <= 3");

    double ur2 = 0.0;
    for (int i = 0; i + 1 < d; ++i) ur2 += direction[i] * direction[i];
    const double ur = std::sqrt(ur2);
    const double ud = direction[d - 1];
    const double len = std::sqrt(ur2 + ud * ud);
    if (std::abs(len - 1.0) > 1e-9)
        throw std::invalid_argument("support_point: direction must be a unit vector");

    BoundaryPoint bp;
    for (int i = 0; i < d; ++i) bp.normal[i] = direction[i];

    if (ur < 1e-14) {
        if (ud > 0.0) {  // apex of the sphere cap
            bp.r = 0.0;
            bp.y = height_;
            bp.side = Side::upper;
        } else {  // the flat point
            bp.r = 0.0;
            bp.y = 0.0;
            bp.side = Side::lower;
        }
        bp.gaussian_curvature = curvature_at(bp);
        return bp;
    }

    // The arc covers normals with u_d >= -u_r/gamma (ties included); the power
    // graph covers the rest. On the lower graph the outward normal is
    // (h'(r) w', -1)/sqrt(1+h'^2), so h'(r) = u_r / (-u_d).
    const double g = params_.gamma;
    if (ud >= -ur / g) {
        bp.r = rho_c_ * ur;
        bp.y = y_c_ + rho_c_ * ud;
        bp.side = ud >= 0.0 ? Side::upper : Side::lower;
    } else {
        const double slope = ur / (-ud);  // in [0, gamma)
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
            double mid = 0.5 * (lo + hi);
            if (pow_gamma_deriv(mid) < slope)
                lo = mid;
            else
                hi = mid;
        }
        bp.r = 0.5 * (lo + hi);
        bp.y = pow_gamma(bp.r);
        bp.side = Side::lower;
    }
    bp.gaussian_curvature = curvature_at(bp);
    return bp;
}

double FlatPointBody::curvature_at(const BoundaryPoint& p) const {
    const int d = params_.d;
    const double g = params_.gamma;

    // Sphere-cap branches (the whole upper graph, and the lower graph past the
    // seam; ties at r = 1 resolve to the arc).
    if (p.side == Side::upper || p.r >= 1.0) return std::pow(rho_c_, -(d - 1.0));

    if (p.r <= 0.0) {
        // flat point: K = gamma(gamma-1) r^{gamma-2} (gamma r^{gamma-2})^{d-2} at r->0
        if (g == 2.0) return std::pow(2.0, d - 1.0);
        return 0.0;
    }

    const double hp = pow_gamma_deriv(p.r);
    const double hpp = g * (g - 1.0) * pow_gamma(p.r) / (p.r * p.r);
    const double one_p = 1.0 + hp * hp;
    double k = hpp / std::pow(one_p, 1.5);
    if (d >= 3) k *= std::pow(hp / (p.r * std::sqrt(one_p)), d - 2.0);
    return k;
}

}  // namespace dlab::body
