#include "dlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dlab/fourier.hpp"
#include "dlab/parallel.hpp"
#include "dlab/quadrature.hpp"
#include "dlab/rng.hpp"

namespace dlab::lattice {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

std::array<double, 3> Rotation::apply(const std::array<double, 3>& v) const {
    std::array<double, 3> out{};
    for (int i = 0; i < d; ++i) {
        double s = 0.0;
        for (int j = 0; j < d; ++j) s += m[i][j] * v[j];
        out[i] = s;
    }
    return out;
}

std::array<double, 3> Rotation::apply_transpose(const std::array<double, 3>& v) const {
    std::array<double, 3> out{};
    for (int i = 0; i < d; ++i) {
        double s = 0.0;
        for (int j = 0; j < d; ++j) s += m[j][i] * v[j];
        out[i] = s;
    }
    return out;
}

double Rotation::orthogonality_defect() const {
    double worst = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double s = 0.0;
            for (int k = 0; k < d; ++k) s += m[i][k] * m[j][k];
            worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
        }
    return worst;
}

double Rotation::determinant() const {
    if (d == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Rotation identity_rotation(int d) {
    Rotation r;
    r.d = d;
    return r;
}

Rotation haar_rotation(int dimension, std::uint64_t seed) {
    if (dimension != 2 && dimension != 3)
        throw std::invalid_argument("haar_rotation: dimension must be 2 or 3");
    rng::Stream st(rng::derive(seed, 0xA0A0));
    Rotation r;
    r.d = dimension;
    if (dimension == 2) {
        double a = kTwoPi * st.uniform();
        double c = std::cos(a), s = std::sin(a);
        r.m = {{{c, -s, 0}, {s, c, 0}, {0, 0, 1}}};
        return r;
    }
    double q[4];
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (double& qi : q) {
            qi = st.normal();
            norm2 += qi * qi;
        }
    } while (norm2 < 1e-30);
    double inv = 1.0 / std::sqrt(norm2);
    double w = q[0] * inv, x = q[1] * inv, y = q[2] * inv, z = q[3] * inv;
    r.m = {{{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
            {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
            {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}}};
    return r;
}

void Placement::validate() const {
    if (!(R >= 1.0)) throw std::invalid_argument("Placement: R must be >= 1");
    if (rotation.orthogonality_defect() > 1e-9)
        throw std::invalid_argument("Placement: rotation is not orthogonal");
    if (std::abs(rotation.determinant() - 1.0) > 1e-9)
        throw std::invalid_argument("Placement: rotation determinant must be +1");
    for (int i = 0; i < rotation.d; ++i)
        if (translation[i] < 0.0 || translation[i] >= 1.0)
            throw std::invalid_argument("Placement: translation must lie in [0,1)^d");
}

namespace {

// Membership of the integer point n, evaluated in the canonical form
// sigma^T((n - t)/R). Both the column solver's endpoint checks and the brute
// force oracle go through here, so the two paths agree bit for bit.
inline bool contains_integer(const body::FlatPointBody& b, const Placement& pl, const long long* n,
                             CountStats* stats) {
    const int d = pl.dim();
    std::array<double, 3> w{};
    for (int i = 0; i < d; ++i) w[i] = (double(n[i]) - pl.translation[i]) / pl.R;
    std::array<double, 3> q = pl.rotation.apply_transpose(w);
    if (stats) ++stats->membership_evals;
    return b.margin(std::span<const double>(q.data(), size_t(d))) <= 0.0;
}

struct ColumnSolver {
    const body::FlatPointBody& b;
    const Placement& pl;
    CountStats* stats;
    int d;
    std::array<double, 3> v{};   // sigma^T e_d / R
    std::array<double, 3> c0{};  // ball center in body frame
    double r_ball;

    ColumnSolver(const body::FlatPointBody& body, const Placement& place, CountStats* st)
        : b(body), pl(place), stats(st), d(place.dim()), r_ball(body.ball_radius()) {
        std::array<double, 3> ed{};
        ed[d - 1] = 1.0;
        v = pl.rotation.apply_transpose(ed);
        for (int i = 0; i < d; ++i) v[i] /= pl.R;
        c0[d - 1] = b.ball_center_y();
    }

    // Convex margin along the column line a + s v.
    double g(const std::array<double, 3>& a, double s) const {
        if (stats) ++stats->membership_evals;
        std::array<double, 3> p{};
        for (int i = 0; i < d; ++i) p[i] = a[i] + s * v[i];
        return b.margin(std::span<const double>(p.data(), size_t(d)));
    }

    // Number of integers s with a + s v in Omega.
    long long count_column(const long long* m) {
        if (stats) ++stats->columns;
        std::array<double, 3> a{};
        {
            std::array<double, 3> w{};
            for (int i = 0; i + 1 < d; ++i) w[i] = (double(m[i]) - pl.translation[i]) / pl.R;
            w[d - 1] = -pl.translation[d - 1] / pl.R;
            a = pl.rotation.apply_transpose(w);
        }

        // chord of the enclosing ball: |a + s v - c0|^2 <= r_ball^2
        double A = 0.0, B = 0.0, C = -r_ball * r_ball;
        for (int i = 0; i < d; ++i) {
            double dif = a[i] - c0[i];
            A += v[i] * v[i];
            B += v[i] * dif;
            C += dif * dif;
        }
        double disc = B * B - A * C;
        if (disc <= 0.0) return 0;
        double sq = std::sqrt(disc);
        double s_lo = (-B - sq) / A;
        double s_hi = (-B + sq) / A;

        // find a point of the column inside Omega (golden-section on the
        // convex margin; quick probes first)
        double s_in = std::numeric_limits<double>::quiet_NaN();
        {
            double probes[3] = {0.5 * (s_lo + s_hi), 0.75 * s_lo + 0.25 * s_hi,
                                0.25 * s_lo + 0.75 * s_hi};
            for (double sp : probes)
                if (g(a, sp) <= 0.0) {
                    s_in = sp;
                    break;
                }
        }
        if (std::isnan(s_in)) {
            const double phi = 0.6180339887498949;
            double lo = s_lo, hi = s_hi;
            double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
            double f1 = g(a, x1), f2 = g(a, x2);
            double best = std::min(f1, f2);
            double best_s = f1 < f2 ? x1 : x2;
            // coarse pass, then a deep pass only if the minimum stays close to 0
            for (int stage = 0; stage < 2 && std::isnan(s_in); ++stage) {
                double tol = stage == 0 ? 1e-3 : 1e-10 * (1.0 + std::abs(s_lo) + std::abs(s_hi));
                while (hi - lo > tol) {
                    if (f1 < f2) {
                        hi = x2;
                        x2 = x1;
                        f2 = f1;
                        x1 = hi - phi * (hi - lo);
                        f1 = g(a, x1);
                    } else {
                        lo = x1;
                        x1 = x2;
                        f1 = f2;
                        x2 = lo + phi * (hi - lo);
                        f2 = g(a, x2);
                    }
                    double fmin = std::min(f1, f2);
                    if (fmin < best) {
                        best = fmin;
                        best_s = f1 < f2 ? x1 : x2;
                    }
                    if (best <= 0.0) break;
                }
                if (best <= 0.0) {
                    s_in = best_s;
                    break;
                }
                if (stage == 0 && best > 0.2) return 0;  // clearly outside
            }
            if (std::isnan(s_in)) return 0;
        }

        // boolean bisection for the two boundary crossings, down to < 0.5
        auto cross = [&](double s_out, double s_ok) {
            while (std::abs(s_ok - s_out) > 0.5) {
                double mid = 0.5 * (s_out + s_ok);
                if (g(a, mid) <= 0.0)
                    s_ok = mid;
                else
                    s_out = mid;
            }
            return std::pair<double, double>(s_out, s_ok);
        };
        auto [lo_out, lo_in] = cross(s_lo, s_in);
        auto [hi_out, hi_in] = cross(s_hi, s_in);

        // integer endpoints, settled with the canonical predicate
        long long n[3] = {0, 0, 0};
        for (int i = 0; i + 1 < d; ++i) n[i] = m[i];
        auto canon = [&](long long k) {
            n[d - 1] = k;
            return contains_integer(b, pl, n, stats);
        };
        long long k_lo = (long long)std::ceil(std::min(lo_out, lo_in) - 1e-9);
        long long k_hi = (long long)std::floor(std::max(hi_out, hi_in) + 1e-9);
        while (k_lo <= k_hi && !canon(k_lo)) ++k_lo;
        while (k_hi >= k_lo && !canon(k_hi)) --k_hi;
        if (k_lo > k_hi) return 0;
        return k_hi - k_lo + 1;
    }
};

}  // namespace

long long count_lattice_points(const body::FlatPointBody& b, const Placement& pl,
                               CountStats* stats) {
    const int d = pl.dim();
    if (d != b.dim()) throw std::invalid_argument("count_lattice_points: dimension mismatch");
    if (d != 2 && d != 3) throw std::invalid_argument("count_lattice_points: d must be 2 or 3");

    // world-frame center of the enclosing ball
    std::array<double, 3> c0{};
    c0[d - 1] = b.ball_center_y();
    std::array<double, 3> wc = pl.rotation.apply(c0);
    for (int i = 0; i < d; ++i) wc[i] = pl.R * wc[i] + pl.translation[i];
    const double rad = pl.R * b.ball_radius();

    ColumnSolver solver(b, pl, stats);
    long long total = 0;
    long long m[2] = {0, 0};

    if (d == 2) {
        long long lo = (long long)std::ceil(wc[0] - rad), hi = (long long)std::floor(wc[0] + rad);
        for (long long i = lo; i <= hi; ++i) {
            m[0] = i;
            total += solver.count_column(m);
        }
    } else {
        long long lo0 = (long long)std::ceil(wc[0] - rad), hi0 = (long long)std::floor(wc[0] + rad);
        for (long long i = lo0; i <= hi0; ++i) {
            double dx = double(i) - wc[0];
            double rem = rad * rad - dx * dx;
            if (rem < 0.0) continue;
            double half = std::sqrt(rem);
            long long lo1 = (long long)std::ceil(wc[1] - half),
                      hi1 = (long long)std::floor(wc[1] + half);
            m[0] = i;
            for (long long j = lo1; j <= hi1; ++j) {
                m[1] = j;
                total += solver.count_column(m);
            }
        }
    }
    return total;
}

long long brute_force_count(const body::FlatPointBody& b, const Placement& pl, CountStats* stats) {
    const int d = pl.dim();
    std::array<double, 3> c0{};
    c0[d - 1] = b.ball_center_y();
    std::array<double, 3> wc = pl.rotation.apply(c0);
    for (int i = 0; i < d; ++i) wc[i] = pl.R * wc[i] + pl.translation[i];
    const double rad = pl.R * b.ball_radius();

    long long lo[3], hi[3], n[3] = {0, 0, 0};
    for (int i = 0; i < d; ++i) {
        lo[i] = (long long)std::ceil(wc[i] - rad);
        hi[i] = (long long)std::floor(wc[i] + rad);
    }
    long long total = 0;
    if (d == 2) {
        for (n[0] = lo[0]; n[0] <= hi[0]; ++n[0])
            for (n[1] = lo[1]; n[1] <= hi[1]; ++n[1])
                if (contains_integer(b, pl, n, stats)) ++total;
    } else {
        for (n[0] = lo[0]; n[0] <= hi[0]; ++n[0])
            for (n[1] = lo[1]; n[1] <= hi[1]; ++n[1])
                for (n[2] = lo[2]; n[2] <= hi[2]; ++n[2])
                    if (contains_integer(b, pl, n, stats)) ++total;
    }
    return total;
}

double discrepancy(const body::FlatPointBody& b, const Placement& pl) {
    return std::pow(pl.R, b.dim()) * b.volume() - double(count_lattice_points(b, pl));
}

// ---- mollifier ---------------------------------------------------------------

namespace {

// exp(-1/(1-t^2)) on [0,1)
inline double bump(double t) {
    double u = 1.0 - t * t;
    return u > 1e-12 ? std::exp(-1.0 / u) : 0.0;
}

// Projection of the d-dimensional bump onto one axis, at offset u in [0,1].
double bump_projection(int d, double u) {
    double cap2 = 1.0 - u * u;
    if (cap2 <= 0.0) return 0.0;
    const auto& g = quad::gauss15();
    if (d == 2) {
        double half = std::sqrt(cap2);
        // composite 8-panel Gauss on [0, half]
        double total = 0.0;
        int np = 8;
        double w = half / np;
        for (int p = 0; p < np; ++p)
            for (int j = 0; j < 15; ++j) {
                double t = p * w + w * g.x[j];
                total += w * g.w[j] * bump(std::sqrt(u * u + t * t));
            }
        return 2.0 * total;
    }
    // d == 3: pi * integral_{u^2}^{1} bump(sqrt(w)) dw
    double total = 0.0;
    int np = 8;
    double w = cap2 / np;
    for (int p = 0; p < np; ++p)
        for (int j = 0; j < 15; ++j) {
            double t = u * u + p * w + w * g.x[j];
            total += w * g.w[j] * bump(std::sqrt(t));
        }
    return std::numbers::pi * total;
}

double bump_transform_raw(int d, double s) {
    // 2 integral_0^1 P(u) cos(2 pi s u) du
    auto f = [&](double u) {
        double ph = kTwoPi * s * u;
        return std::complex<double>(bump_projection(d, u) * std::cos(ph), 0.0);
    };
    auto panels = quad::uniform_panels(0.0, 1.0, std::min(0.1, s > 0 ? 0.5 / s : 0.1));
    auto res = quad::integrate_adaptive(std::move(panels), f, 1e-13, 1e-9, 10);
    return 2.0 * res.value.real();
}

}  // namespace

MollifierSpec MollifierSpec::build(int dimension, double epsilon) {
    if (dimension != 2 && dimension != 3)
        throw std::invalid_argument("MollifierSpec: dimension must be 2 or 3");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("MollifierSpec: epsilon must be in (0,1)");

    MollifierSpec spec;
    spec.d = dimension;
    spec.epsilon = epsilon;
    spec.grid_step = 0.05;

    // cached per dimension; the table only depends on d
    static std::vector<double> cache[4];
    std::vector<double>& tab = cache[dimension];
    if (tab.empty()) {
        const double norm = bump_transform_raw(dimension, 0.0);
        std::vector<double> t;
        int quiet = 0;
        for (int k = 0; k < 4000; ++k) {
            double s = k * 0.05;
            double v = bump_transform_raw(dimension, s) / norm;
            t.push_back(v);
            if (std::abs(v) < 1e-9 && s > 2.0)
                ++quiet;
            else
                quiet = 0;
            if (quiet >= 8) break;
        }
        tab = std::move(t);
    }
    spec.table = tab;

    // Envelope-calibrated decay power: largest K with |phi_hat(s)| <= (1+s)^{-K}
    // for s >= 1. (Near s = 0 the transform sits at 1 with zero slope, so any
    // power bound there needs a constant in front; the envelope only matters
    // for tail control at large s.)
    std::vector<double> env(spec.table.size());
    double running = 0.0;
    for (size_t k = spec.table.size(); k-- > 0;) {
        running = std::max(running, std::abs(spec.table[k]));
        env[k] = running;
    }
    double kmin = 60.0;
    for (size_t k = 1; k < spec.table.size(); ++k) {
        double s = k * spec.grid_step;
        if (s < 1.0 || env[k] <= 0.0) continue;
        kmin = std::min(kmin, -std::log(env[k]) / std::log1p(s));
    }
    spec.decay_power = std::max(1, int(std::floor(kmin)));
    return spec;
}

double MollifierSpec::phi_hat(double s) const {
    s = std::abs(s);
    double x = s / grid_step;
    size_t k = size_t(x);
    if (k + 1 >= table.size()) return 0.0;
    double frac = x - double(k);
    return table[k] * (1.0 - frac) + table[k + 1] * frac;
}

std::vector<ModeCoefficient> mollified_coefficients(const body::FlatPointBody& b, double R,
                                                    const Rotation& sigma,
                                                    const MollifierSpec& moll, double cutoff) {
    const int d = b.dim();
    if (d != sigma.d) throw std::invalid_argument("mollified_coefficients: dimension mismatch");

    // representatives of the +/- pairs: first nonzero coordinate positive
    std::vector<std::array<int, 3>> modes;
    int N = int(std::floor(cutoff));
    double cut2 = cutoff * cutoff;
    if (d == 2) {
        for (int i = 0; i <= N; ++i)
            for (int j = (i == 0 ? 1 : -N); j <= N; ++j)
                if (i * i + j * j <= cut2 && (i > 0 || j > 0)) modes.push_back({i, j, 0});
    } else {
        for (int i = 0; i <= N; ++i)
            for (int j = (i == 0 ? 0 : -N); j <= N; ++j)
                for (int k = -N; k <= N; ++k) {
                    if (i == 0 && j == 0 && k <= 0) continue;
                    if (i == 0 && j < 0) continue;
                    if (double(i) * i + double(j) * j + double(k) * k <= cut2)
                        modes.push_back({i, j, k});
                }
    }

    std::vector<ModeCoefficient> out(modes.size());
    fourier::QuadControl ctl{1e-12, 1e-6, 10};
    parallel::for_index(modes.size(), [&](size_t idx) {
        const auto& n = modes[idx];
        std::array<double, 3> nv{double(n[0]), double(n[1]), double(n[2])};
        double norm = std::sqrt(nv[0] * nv[0] + nv[1] * nv[1] + nv[2] * nv[2]);
        std::array<double, 3> sn = sigma.apply(nv);
        double ct = std::clamp(sn[d - 1] / norm, -1.0, 1.0);
        fourier::Frequency f{R * norm, std::acos(ct)};
        auto chi = fourier::chi_hat(b, f, ctl);
        out[idx].n = n;
        out[idx].c = moll.phi_hat(moll.epsilon * norm) * chi.value;
    });
    return out;
}

double mollified_eval(const std::vector<ModeCoefficient>& coeffs, double R, int d,
                      const std::array<double, 3>& t) {
    // n and -n carry conjugate coefficients, so each pair adds 2 Re(c e^{i phi});
    // the imaginary part of the full sum vanishes identically and the spec's
    // 1e-6 assertion is kept as a structural check.
    double re = 0.0;
    double im = 0.0;
    for (const auto& mc : coeffs) {
        double phase = kTwoPi * (mc.n[0] * t[0] + mc.n[1] * t[1] + mc.n[2] * t[2]);
        double c = std::cos(phase), s = std::sin(phase);
        re += 2.0 * (mc.c.real() * c - mc.c.imag() * s);
        im += (mc.c.real() * s + mc.c.imag() * c) + (-mc.c.real() * s - mc.c.imag() * c);
    }
    double scale = std::pow(R, d);
    if (!(std::abs(scale * im) <= 1e-6 * std::max(1.0, std::abs(scale * re))))
        throw std::runtime_error("mollified_eval: imaginary part failed to cancel");
    return scale * re;
}

double mollified_discrepancy(const body::FlatPointBody& b, const Placement& pl,
                             const MollifierSpec& moll, double cutoff) {
    if (!(std::abs(moll.phi_hat(moll.epsilon * cutoff)) < 1e-8))
        throw std::invalid_argument(
            "mollified_discrepancy: cutoff too small for epsilon (|phi_hat(eps cutoff)| >= 1e-8)");
    auto coeffs = mollified_coefficients(b, pl.R, pl.rotation, moll, cutoff);
    return mollified_eval(coeffs, pl.R, b.dim(), pl.translation);
}

}  // namespace dlab::lattice
