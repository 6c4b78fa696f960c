#include "dlab/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace dlab::quad {

namespace {

GaussRule15 make_gauss15() {
    GaussRule15 r;
    const int n = 15;
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
        r.x[i] = 0.5 * (1.0 - z);
        r.x[n - 1 - i] = 0.5 * (1.0 + z);
        r.w[i] = r.w[n - 1 - i] = 1.0 / ((1.0 - z * z) * pp * pp);
    }
    return r;
}

}  // namespace

const GaussRule15& gauss15() {
    static const GaussRule15 g = make_gauss15();
    return g;
}

std::vector<Panel> split(const std::vector<Panel>& panels) {
    std::vector<Panel> out;
    out.reserve(panels.size() * 2);
    for (const Panel& p : panels) {
        double h = 0.5 * p.width;
        out.push_back({p.start, h});
        out.push_back({p.start + h, h});
    }
    return out;
}

std::vector<Panel> uniform_panels(double a, double b, double max_width) {
    std::vector<Panel> out;
    if (!(b > a)) return out;
    int n = std::max(1, int(std::ceil((b - a) / max_width)));
    double w = (b - a) / n;
    for (int i = 0; i < n; ++i) out.push_back({a + i * w, w});
    return out;
}

}  // namespace dlab::quad
