#include "dlab/bessel.hpp"

#include <cmath>
#include <numbers>

namespace dlab::bessel {

long double j1_series(long double x, int terms) {
    // J1(x) = (x/2) sum_k (-1)^k (x/2)^{2k} / (k! (k+1)!)
    const long double h = 0.5L * x;
    long double term = h;  // k = 0
    long double sum = term;
    for (int k = 1; k < terms; ++k) {
        term *= -(h * h) / (long double)(k * (k + 1));
        sum += term;
    }
    return sum;
}

namespace {

double j1_asymptotic(double x) {
    // J1(x) ~ sqrt(2/(pi x)) [P cos(w) - Q sin(w)], w = x - 3pi/4,
    // with a_k = a_{k-1} (4 - (2k-1)^2) / (8k); P sums even k, Q odd k.
    const double w = x - 0.75 * std::numbers::pi;
    double P = 0.0, Q = 0.0;
    double a = 1.0;       // a_0
    double xpow = 1.0;    // x^{-k}
    double prev = 1e300;
    for (int k = 0; k < 24; ++k) {
        double term = a * xpow;
        if (std::abs(term) > prev) break;  // divergent tail reached
        prev = std::abs(term);
        int r = k % 4;
        if (r == 0) P += term;
        else if (r == 1) Q += term;
        else if (r == 2) P -= term;
        else Q -= term;
        a *= (4.0 - double(2 * k + 1) * double(2 * k + 1)) / (8.0 * (k + 1));
        xpow /= x;
        if (prev < 1e-17) break;
    }
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (P * std::cos(w) - Q * std::sin(w));
}

}  // namespace

double j1(double x) {
    if (x < 0.0) return -j1(-x);
    if (x < 12.0) return double(j1_series((long double)x, 40));
    return j1_asymptotic(x);
}

}  // namespace dlab::bessel
