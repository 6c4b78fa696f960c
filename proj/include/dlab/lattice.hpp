// lattice.hpp -- exact integer-point counts in R sigma(Omega) + t.
//
// Membership is always tested in body coordinates, sigma^T((n - t)/R), so the
// hot loop never rotates the body. Along a lattice column the feasible last
// coordinates form an interval by convexity; its integer endpoints are found
// by bisection on the membership predicate, O(log R) tests per column.
#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "dlab/body.hpp"

namespace dlab::lattice {

struct Rotation {
    int d = 2;
    // row-major; top-left d x d block is the matrix, rest identity
    std::array<std::array<double, 3>, 3> m{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

    std::array<double, 3> apply(const std::array<double, 3>& v) const;
    std::array<double, 3> apply_transpose(const std::array<double, 3>& v) const;
    double orthogonality_defect() const;  // max |sigma sigma^T - I|
    double determinant() const;
};

Rotation identity_rotation(int d);

// Haar-uniform rotation: d=2 via a uniform angle, d=3 via a normalised
// 4-vector of independent standard normals read as a quaternion.
Rotation haar_rotation(int dimension, std::uint64_t seed);

struct Placement {
    double R = 1.0;
    Rotation rotation;
    std::array<double, 3> translation{};

    int dim() const { return rotation.d; }
    void validate() const;  // R >= 1, rotation orthogonal, t in [0,1)^d
};

struct CountStats {
    std::uint64_t membership_evals = 0;
    std::uint64_t columns = 0;
};

// Exact count of integer points n with sigma^T((n - t)/R) in Omega.
long long count_lattice_points(const body::FlatPointBody& b, const Placement& pl,
                               CountStats* stats = nullptr);

// Oracle: full bounding-box membership scan (same predicate, no bisection).
long long brute_force_count(const body::FlatPointBody& b, const Placement& pl,
                            CountStats* stats = nullptr);

// R^d |Omega| - card(Z^d cap (R sigma(Omega) + t))
double discrepancy(const body::FlatPointBody& b, const Placement& pl);

// ---- mollifier --------------------------------------------------------------

// Radial bump c exp(-1/(1-|x|^2)) on the unit ball with integral 1; its
// Fourier transform is tabulated once per dimension on a radial grid and
// linearly interpolated. decay_power is the largest K with
// |phi_hat(s)| <= (1+s)^{-K} on the tabulated range (envelope-calibrated).
struct MollifierSpec {
    int d = 2;
    double epsilon = 0.1;
    int decay_power = 1;
    double grid_step = 0.05;
    std::vector<double> table;  // phi_hat at s = k * grid_step

    static MollifierSpec build(int dimension, double epsilon);
    double phi_hat(double s) const;  // 0 beyond the table
};

struct ModeCoefficient {
    std::array<int, 3> n{};
    std::complex<double> c{};  // phi_hat(eps |n|) chi_hat(R sigma(n))
};

// Coefficients of the mollified expansion over the half lattice
// 0 < |n| <= cutoff (one representative per +/- pair).
std::vector<ModeCoefficient> mollified_coefficients(const body::FlatPointBody& b, double R,
                                                    const Rotation& sigma,
                                                    const MollifierSpec& moll, double cutoff);

// R^d sum over both halves of c_n exp(2 pi i n.t); exactly real by pairing.
double mollified_eval(const std::vector<ModeCoefficient>& coeffs, double R, int d,
                      const std::array<double, 3>& t);

// Truncated mollified discrepancy; requires |phi_hat(eps cutoff)| < 1e-8.
double mollified_discrepancy(const body::FlatPointBody& b, const Placement& pl,
                             const MollifierSpec& moll, double cutoff);

}  // namespace dlab::lattice
