// quadrature.hpp -- panel-based Gauss quadrature with doubling control.
//
// Oscillatory integrals are evaluated on a panel set sized from the local
// frequency, then every panel is split in half and the two values compared;
// splitting repeats until successive values differ by less than the
// tolerance. The returned error is the last Richardson difference.
#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace dlab::quad {

struct GaussRule15 {
    std::array<double, 15> x{}, w{};  // nodes/weights on [0, 1]
};
const GaussRule15& gauss15();

struct Panel {
    double start;
    double width;
};

std::vector<Panel> split(const std::vector<Panel>& panels);

// Uniform panels of width <= max_width covering [a, b].
std::vector<Panel> uniform_panels(double a, double b, double max_width);

template <class F>  // F: double -> complex<double>
std::complex<double> integrate(const std::vector<Panel>& panels, F&& f) {
    const auto& g = gauss15();
    std::complex<double> total = 0.0;
    std::complex<double> comp = 0.0;  // Kahan compensation
    for (const Panel& p : panels) {
        std::complex<double> acc = 0.0;
        for (int j = 0; j < 15; ++j) acc += g.w[j] * f(p.start + p.width * g.x[j]);
        std::complex<double> term = p.width * acc - comp;
        std::complex<double> t = total + term;
        comp = (t - total) - term;
        total = t;
    }
    return total;
}

struct Result {
    std::complex<double> value{};
    double error = 0.0;
    int doublings = 0;
    bool converged = false;
};

// Always performs at least one doubling so the accepted grid is twice as
// fine as the starting one.
template <class F>
Result integrate_adaptive(std::vector<Panel> panels, F&& f, double abs_tol, double rel_tol,
                          int max_doublings = 8) {
    Result res;
    std::complex<double> prev = integrate(panels, f);
    for (int k = 1; k <= max_doublings; ++k) {
        panels = split(panels);
        std::complex<double> cur = integrate(panels, f);
        res.value = cur;
        res.error = std::abs(cur - prev);
        res.doublings = k;
        double tol = std::max(abs_tol, rel_tol * std::abs(cur));
        if (res.error <= tol) {
            res.converged = true;
            return res;
        }
        prev = cur;
    }
    res.converged = false;
    return res;
}

}  // namespace dlab::quad
