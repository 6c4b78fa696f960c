// body.hpp -- the flat-point convex body of revolution ("gamma-drop").
//
// Profile in the (r, y) half-plane, r = |first d-1 coordinates|, y = last:
//
//   lower branch  h_low(r) = r^gamma                     0 <= r <= 1
//                 h_low(r) = y_c - sqrt(rho_c^2 - r^2)   1 <= r <= rho_c
//   upper branch  h_up(r)  = y_c + sqrt(rho_c^2 - r^2)   0 <= r <= rho_c
//
// with y_c = 1 + 1/gamma and rho_c = sqrt(1 + 1/gamma^2). The power graph
// meets the sphere cap at (1, 1) with matching slope gamma, so the boundary
// is C^1 (curvature jumps at the seam). The flat point sits at the origin:
// Gaussian curvature vanishes there exactly when gamma > 2.
#pragma once

#include <array>
#include <span>

namespace dlab::body {

struct BodyParams {
    int d = 2;        // ambient dimension, >= 2
    double gamma = 2.0;  // flatness order, >= 2

    void validate() const;  // throws std::invalid_argument
};

enum class Side { lower, upper };

struct BoundaryPoint {
    double r = 0.0;
    double y = 0.0;
    Side side = Side::lower;
    std::array<double, 3> normal{};  // unit outward, first d components used
    double gaussian_curvature = 0.0;
};

class FlatPointBody {
public:
    explicit FlatPointBody(BodyParams p);

    const BodyParams& params() const { return params_; }
    int dim() const { return params_.d; }
    double gamma() const { return params_.gamma; }
    double arc_center() const { return y_c_; }    // y_c
    double arc_radius() const { return rho_c_; }  // rho_c
    double height() const { return height_; }     // y_c + rho_c
    double radial_extent() const { return rho_c_; }
    double volume() const { return volume_; }

    // Enclosing ball: center (0,...,0, height/2), radius ball_radius().
    double ball_center_y() const { return 0.5 * height_; }
    double ball_radius() const { return ball_radius_; }

    // ---- profile -----------------------------------------------------------

    double lower_profile(double r) const;  // h_low on [0, rho_c]
    double upper_profile(double r) const;  // h_up  on [0, rho_c]

    // Convex/concave extensions past r = rho_c (slope +/- 1e12); these make
    // margin() a globally convex function with {margin <= 0} = the body.
    double lower_profile_ext(double r) const;
    double upper_profile_ext(double r) const;

    // r(y): horizontal slice radius; throws std::domain_error outside [0, height].
    double slice_radius(double y) const;
    // |dr/dy| clamped to a large finite value at the endpoints.
    double slice_slope(double y) const;

    // ---- membership --------------------------------------------------------

    // Convex margin: <= 0 iff the point lies in the body (boundary included).
    double margin_ry(double r, double y) const;
    double margin(std::span<const double> x) const;  // x has d components
    bool contains(std::span<const double> x) const { return margin(x) <= 0.0; }

    // ---- boundary geometry (d <= 3 for the vector forms) --------------------

    // The unique boundary point whose outward normal is `direction`
    // (|direction| = 1 within 1e-9). Profile root-finds use bisection to 1e-12;
    // ties at the power/arc seam resolve to the arc branch.
    BoundaryPoint support_point(std::span<const double> direction) const;

    // Gaussian curvature at a boundary point, from the surface-of-revolution
    // formulas; sphere-cap branches give rho_c^{-(d-1)}.
    double curvature_at(const BoundaryPoint& p) const;

    // r^gamma and y^{1/gamma} with fast paths for gamma in {2, 3, 4, 6}.
    double pow_gamma(double r) const;
    double root_gamma(double y) const;
    // d/dr r^gamma
    double pow_gamma_deriv(double r) const;

private:
    BodyParams params_;
    double y_c_ = 0.0;
    double rho_c_ = 0.0;
    double height_ = 0.0;
    double volume_ = 0.0;
    double ball_radius_ = 0.0;
    int gamma_int_ = 0;  // gamma when integral in {2,3,4,6}, else 0
};

// Volume of the unit ball in n dimensions (n >= 0).
double unit_ball_volume(int n);

}  // namespace dlab::body
