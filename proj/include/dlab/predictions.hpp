// predictions.hpp -- closed-form growth/decay exponents for every regime.
#pragma once

#include <string>

namespace dlab::predictions {

enum class Mode { joint, rotation_only_L1, sup, lower_bound, fourier_rot };

enum class BoundKind { upper, lower };

struct Prediction {
    double exponent = 0.0;
    double log_power = 0.0;
    std::string regime;
    BoundKind bound_kind = BoundKind::upper;
};

struct RegimeBoundaries {
    double p_star = 0.0;  // 2d/(d-1)
    double p_flat = 0.0;  // 2(gamma-1)/(gamma-2), +inf at gamma = 2
    double p_mix = 0.0;   // ((2d-1)gamma-(d-1)) / ((d-1)(gamma-1))
};

RegimeBoundaries regime_boundaries(int d, double gamma);

// Piecewise exponent for the selected mode. For the discrepancy modes the
// exponent is the growth rate of the norm in R (nonnegative); fourier_rot
// returns the (negative) decay rate of the rotational average in rho.
// p is ignored by sup and rotation_only_L1. Throws std::invalid_argument on
// d < 2, gamma < 2 or p < 1.
Prediction predicted_exponent(int d, double gamma, double p, Mode mode);

Mode mode_from_string(const std::string& s);      // throws on unknown
std::string mode_to_string(Mode m);

}  // namespace dlab::predictions
