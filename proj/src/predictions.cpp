#include "dlab/predictions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dlab::predictions {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_args(int d, double gamma, double p) {
    if (d < 2) throw std::invalid_argument("predictions: d must be >= 2");
    if (!(gamma >= 2.0)) throw std::invalid_argument("predictions: gamma must be >= 2");
    if (!(p >= 1.0)) throw std::invalid_argument("predictions: p must be >= 1");
}
}  // namespace

RegimeBoundaries regime_boundaries(int d, double gamma) {
    check_args(d, gamma, 1.0);
    RegimeBoundaries rb;
    rb.p_star = 2.0 * d / (d - 1.0);
    rb.p_flat = gamma > 2.0 ? 2.0 * (gamma - 1.0) / (gamma - 2.0) : kInf;
    rb.p_mix = ((2.0 * d - 1.0) * gamma - (d - 1.0)) / ((d - 1.0) * (gamma - 1.0));
    return rb;
}

Prediction predicted_exponent(int d, double gamma, double p, Mode mode) {
    check_args(d, gamma, p);
    const RegimeBoundaries rb = regime_boundaries(d, gamma);
    const double dd = d;
    Prediction out;

    switch (mode) {
        case Mode::lower_bound:
            out.exponent = 0.5 * (dd - 1.0);
            out.regime = "lower";
            out.bound_kind = BoundKind::lower;
            return out;

        case Mode::rotation_only_L1:
            out.exponent = dd * (dd - 1.0) / (dd + 1.0);
            out.regime = "rotation-only";
            return out;

        case Mode::sup:
            if (gamma <= d + 1.0) {
                out.exponent = dd * (dd - 1.0) / (dd + 1.0);  // = d - 2 + 2/(d+1)
                out.regime = "sup-curvature";
            } else {
                out.exponent = (dd - 1.0) * (1.0 - 1.0 / gamma);
                out.regime = "sup-flat";
            }
            return out;

        case Mode::fourier_rot:
            if (p < rb.p_flat) {
                out.exponent = -0.5 * (dd + 1.0);
                out.regime = "fourier-curvature";
            } else if (p == rb.p_flat) {
                out.exponent = -0.5 * (dd + 1.0);
                out.log_power = (gamma - 2.0) * (dd - 1.0) / (2.0 * (gamma - 1.0));
                out.regime = "fourier-critical";
            } else {
                out.exponent = -(dd - 1.0) * (1.0 / p + 1.0 / gamma - 1.0 / (p * gamma)) - 1.0;
                out.regime = "fourier-flat";
            }
            return out;

        case Mode::joint:
            break;
    }

    // joint mode: mean-square bound for p <= 2, the piecewise rates above it
    if (p <= 2.0) {
        out.exponent = 0.5 * (dd - 1.0);
        out.regime = "mean-square";
        return out;
    }
    if (gamma <= d + 1.0) {
        if (p < rb.p_star) {
            out.exponent = 0.5 * (dd - 1.0);
            out.regime = "curvature";
        } else if (p < rb.p_flat) {
            out.exponent = dd * (dd - 1.0) * (p - 2.0) / (dd * (p - 2.0) + p);
            out.regime = "rotation-transition";
        } else if (p == rb.p_flat) {
            out.exponent = dd * (dd - 1.0) / (dd + gamma - 1.0);
            out.log_power = (dd - 1.0) / p;
            out.regime = "flat-critical";
        } else {
            out.exponent = dd * (dd - 1.0) / (dd + 1.0) *
                           (1.0 - 2.0 * (gamma - 1.0) / (p * (dd + gamma - 1.0)));
            out.log_power = (dd - 1.0) / p;
            out.regime = "flat-dominated";
        }
    } else {
        if (p < rb.p_flat) {
            out.exponent = 0.5 * (dd - 1.0);
            out.regime = "curvature";
        } else if (p == rb.p_flat) {
            out.exponent = 0.5 * (dd - 1.0);
            out.log_power = (dd - 1.0) / p;
            out.regime = "flat-critical";
        } else {
            out.exponent = (dd - 1.0) * (1.0 - 1.0 / p) * (1.0 - 1.0 / gamma);
            out.regime = "flat-dominated";
        }
    }
    return out;
}

Mode mode_from_string(const std::string& s) {
    if (s == "joint") return Mode::joint;
    if (s == "rotation_only_L1" || s == "rotation-only") return Mode::rotation_only_L1;
    if (s == "sup") return Mode::sup;
    if (s == "lower_bound" || s == "lower") return Mode::lower_bound;
    if (s == "fourier_rot" || s == "fourier") return Mode::fourier_rot;
    throw std::invalid_argument("unknown prediction mode: " + s);
}

std::string mode_to_string(Mode m) {
    switch (m) {
        case Mode::joint: return "joint";
        case Mode::rotation_only_L1: return "rotation_only_L1";
        case Mode::sup: return "sup";
        case Mode::lower_bound: return "lower_bound";
        case Mode::fourier_rot: return "fourier_rot";
    }
    return "?";
}

}  // namespace dlab::predictions
