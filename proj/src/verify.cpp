#include "dlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "dlab/artifacts.hpp"
#include "dlab/body.hpp"
#include "dlab/fourier.hpp"
#include "dlab/lattice.hpp"
#include "dlab/norms.hpp"
#include "dlab/predictions.hpp"
#include "dlab/rng.hpp"
#include "dlab/version.hpp"

namespace dlab::verify {

bool SuiteResult::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

namespace {

using body::FlatPointBody;
using norms::FitResult;
using norms::NormEstimate;

std::vector<double> geometric(double lo, double hi) {
    std::vector<double> g;
    for (double v = lo; v <= hi * 1.0001; v *= 2.0) g.push_back(v);
    return g;
}

FitResult fit_values(const std::vector<double>& xs, const std::vector<double>& ys) {
    std::vector<NormEstimate> series(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        series[i].R = xs[i];
        series[i].value = ys[i];
    }
    return norms::fit_exponent(series);
}

void log_check(std::ostream& log, const CheckResult& c) {
    log << (c.pass ? "PASS" : "FAIL") << "  " << c.check << "  predicted=" << c.predicted
        << " fitted=" << c.fitted;
    if (c.stderr_ > 0.0) log << " stderr=" << c.stderr_;
    if (!c.note.empty()) log << "  (" << c.note << ")";
    log << "\n";
    log.flush();
}

// Shared Monte Carlo sweeps: |D| samples per (gamma, R), reused by every p.
struct SweepCache {
    std::map<std::pair<double, double>, std::vector<double>> samples;  // (gamma, R) -> |D|

    const std::vector<double>& get(const FlatPointBody& b, double R, int n_rot, int n_trans,
                                   std::uint64_t seed, std::uint64_t r_index) {
        auto key = std::make_pair(b.gamma(), R);
        auto it = samples.find(key);
        if (it != samples.end()) return it->second;
        auto s = norms::sample_abs_discrepancies(b, R, n_rot, n_trans, seed, r_index);
        return samples.emplace(key, std::move(s)).first->second;
    }
};

struct SuiteParams {
    std::vector<double> big_R;      // joint sweeps
    std::vector<double> rot_R;      // rotation-only sweeps
    std::vector<double> d3_R;       // d=3 smoke
    std::vector<double> axis_rho;   // axis decay
    std::vector<double> rot_rho;    // rotational average decay
    std::vector<double> phase_rho;  // stationary phase error
    int n_rot = 64, n_trans = 64;
    int rot_only_n = 256;
    int d3_rot = 32, d3_trans = 32;
    int parseval_trans = 20000;
    int oracle_placements = 100;
    double oracle_R_max = 20.0;
    double slope_window = 0.10;       // criteria 1, 2 use +-0.10 around 0.5
    double lower_tol = 0.07;          // criterion 3
    double upper_tol = 0.10;          // criterion 4
    double axis_tol = 0.08;           // criterion 7
    double rot_p2_tol = 0.10;         // criterion 8
    double rot_p8_tol = 0.08;         // criterion 8
    double phase_tol = 0.30;          // criterion 9
    std::string prefix;

    static SuiteParams full() {
        SuiteParams sp;
        sp.big_R = geometric(32, 2048);
        sp.rot_R = geometric(32, 1024);
        sp.d3_R = geometric(16, 128);
        sp.axis_rho = geometric(32, 1024);
        sp.rot_rho = geometric(32, 512);
        sp.phase_rho = geometric(64, 512);
        return sp;
    }

    static SuiteParams quick() {
        SuiteParams sp;
        sp.big_R = geometric(16, 256);
        sp.rot_R = geometric(16, 256);
        sp.d3_R = geometric(8, 64);
        sp.axis_rho = geometric(16, 256);
        sp.rot_rho = geometric(16, 128);
        sp.phase_rho = geometric(32, 256);
        sp.n_rot = 16;
        sp.n_trans = 16;
        sp.rot_only_n = 64;
        sp.d3_rot = 8;
        sp.d3_trans = 8;
        sp.parseval_trans = 4000;
        sp.oracle_placements = 30;
        sp.oracle_R_max = 12.0;
        sp.slope_window = 0.20;
        sp.lower_tol = 0.15;
        sp.upper_tol = 0.20;
        sp.axis_tol = 0.15;
        sp.rot_p2_tol = 0.20;
        sp.rot_p8_tol = 0.16;
        sp.phase_tol = 0.5;
        sp.prefix = "quick/";
        return sp;
    }
};

SuiteResult run_suite(const SuiteParams& sp, std::uint64_t seed, std::ostream& log) {
    SuiteResult res;
    SweepCache cache;
    auto add = [&](CheckResult c) {
        c.check = sp.prefix + c.check;
        log_check(log, c);
        res.checks.push_back(std::move(c));
    };

    const std::vector<double> gamma_grid = {2.0, 3.0, 4.0, 6.0};
    const std::vector<double> p_grid = {1.0, 2.0, 4.0};

    // fits for the (gamma, p) grid, shared by checks 1-4
    std::map<std::pair<double, double>, FitResult> fits;
    for (double g : gamma_grid) {
        FlatPointBody b({2, g});
        for (double p : p_grid) {
            std::vector<NormEstimate> series;
            for (size_t j = 0; j < sp.big_R.size(); ++j) {
                const auto& s =
                    cache.get(b, sp.big_R[j], sp.n_rot, sp.n_trans, seed, std::uint64_t(j));
                series.push_back(norms::estimate_from_samples(s, sp.big_R[j], p));
            }
            fits[{g, p}] = norms::fit_exponent(series);
        }
        log << "  [sweep gamma=" << g << " done]\n";
        log.flush();
    }

    // 1, 2: L2 joint exponent at gamma = 2 and gamma = 6
    for (double g : {2.0, 6.0}) {
        const FitResult& f = fits[{g, 2.0}];
        CheckResult c;
        c.check = "01-02/l2-joint-slope gamma=" + std::to_string(int(g));
        c.predicted = 0.5;
        c.fitted = f.slope;
        c.stderr_ = f.slope_stderr;
        c.pass = f.slope >= c.predicted - sp.slope_window && f.slope <= c.predicted + sp.slope_window;
        if (f.retried) c.note = "smallest R dropped";
        add(std::move(c));
    }

    // 3, 4: lower / upper bound conformance over the grid
    for (double g : gamma_grid)
        for (double p : p_grid) {
            const FitResult& f = fits[{g, p}];
            {
                CheckResult c;
                c.check = "03/lower-bound gamma=" + std::to_string(int(g)) +
                          " p=" + std::to_string(int(p));
                c.predicted = 0.5;
                c.fitted = f.slope;
                c.stderr_ = f.slope_stderr;
                c.pass = f.slope >= 0.5 - sp.lower_tol;
                add(std::move(c));
            }
            {
                auto pred = predictions::predicted_exponent(2, g, p, predictions::Mode::joint);
                CheckResult c;
                c.check = "04/upper-bound gamma=" + std::to_string(int(g)) +
                          " p=" + std::to_string(int(p));
                c.predicted = pred.exponent;
                c.fitted = f.slope;
                c.stderr_ = f.slope_stderr;
                c.pass = f.slope <= pred.exponent + sp.upper_tol;
                c.note = "regime " + pred.regime;
                add(std::move(c));
            }
        }

    // 5: rotation-only L1
    for (double g : {2.0, 4.0}) {
        FlatPointBody b({2, g});
        std::vector<NormEstimate> series;
        for (size_t j = 0; j < sp.rot_R.size(); ++j)
            series.push_back(
                norms::rotation_only_average(b, sp.rot_R[j], 1.0, sp.rot_only_n, seed, j));
        FitResult f = norms::fit_exponent(series);
        CheckResult c;
        c.check = "05/rotation-only-slope gamma=" + std::to_string(int(g));
        c.predicted = 2.0 / 3.0;
        c.fitted = f.slope;
        c.stderr_ = f.slope_stderr;
        c.pass = f.slope <= c.predicted + 0.10;
        add(std::move(c));
    }

    // 6: Parseval oracle at d=2, gamma=3, R=64
    {
        FlatPointBody b({2, 3.0});
        double R = 64.0;
        double cutoff = norms::parseval_pick_cutoff(b, R);
        norms::ParsevalResult pr;
        for (int tries = 0;; ++tries) {
            try {
                pr = norms::parseval_check(b, R, lattice::identity_rotation(2), sp.parseval_trans,
                                           cutoff, seed);
                break;
            } catch (const std::invalid_argument&) {
                if (tries >= 6) throw;
                cutoff *= 1.5;
            }
        }
        CheckResult c;
        c.check = "06/parseval-ratio";
        c.predicted = 1.0;
        c.fitted = pr.ratio;
        c.stderr_ = pr.lhs_stderr / pr.rhs;
        c.pass = pr.ratio >= 0.95 && pr.ratio <= 1.05;
        c.note = "cutoff=" + std::to_string(pr.cutoff) +
                 " tail<=" + std::to_string(100.0 * pr.tail_fraction) + "%";
        add(std::move(c));
    }

    // 7: axis Fourier decay. On the axis the flat point and the apex both
    // radiate, and at gamma = 2 they do so at the same order, which puts a
    // height-period beat on |chi_hat(rho, 0)|. Averaging |chi_hat|^2 over one
    // beat period per grid point isolates the envelope exponent that the
    // first decay-bound branch is sharp for.
    for (double g : {2.0, 4.0}) {
        FlatPointBody b({2, g});
        const double beat = 1.0 / b.height();
        std::vector<double> vals;
        for (double rho : sp.axis_rho) {
            double ms = 0.0;
            const int M = 8;
            for (int m = 0; m < M; ++m) {
                double r = rho + beat * m / M;
                ms += std::norm(fourier::chi_hat(b, {r, 0.0}).value);
            }
            vals.push_back(std::sqrt(ms / M));
        }
        FitResult f = fit_values(sp.axis_rho, vals);
        CheckResult c;
        c.check = "07/axis-decay-slope gamma=" + std::to_string(int(g));
        c.predicted = -(1.0 + 1.0 / g);
        c.fitted = f.slope;
        c.stderr_ = f.slope_stderr;
        c.pass = std::abs(f.slope - c.predicted) <= sp.axis_tol;
        add(std::move(c));
    }

    // 8: rotational average decay at gamma=4, p in {2, 8}
    {
        FlatPointBody b({2, 4.0});
        const double ps[2] = {2.0, 8.0};
        std::vector<double> v2, v8;
        for (double rho : sp.rot_rho) {
            auto v = fourier::rotational_lp_averages(b, rho, std::span<const double>(ps, 2));
            v2.push_back(v[0]);
            v8.push_back(v[1]);
            log << "  [rot-decay rho=" << rho << " done]\n";
            log.flush();
        }
        FitResult f2 = fit_values(sp.rot_rho, v2);
        FitResult f8 = fit_values(sp.rot_rho, v8);
        CheckResult c2;
        c2.check = "08/rot-decay-slope p=2";
        c2.predicted = -1.5;
        c2.fitted = f2.slope;
        c2.stderr_ = f2.slope_stderr;
        c2.pass = std::abs(f2.slope - c2.predicted) <= sp.rot_p2_tol;
        add(std::move(c2));
        CheckResult c8;
        c8.check = "08/rot-decay-slope p=8";
        c8.predicted = -1.34375;
        c8.fitted = f8.slope;
        c8.stderr_ = f8.slope_stderr;
        c8.pass = std::abs(f8.slope - c8.predicted) <= sp.rot_p8_tol;
        add(std::move(c8));
    }

    // 9: stationary phase error decay at gamma=2, theta=pi/3
    {
        FlatPointBody b({2, 2.0});
        const double theta = std::numbers::pi / 3.0;
        std::vector<double> errs;
        fourier::QuadControl tight{1e-13, 1e-8, 10};
        for (double rho : sp.phase_rho) {
            auto q = fourier::chi_hat(b, {rho, theta}, tight);
            auto a = fourier::chi_hat_asymptotic(b, {rho, theta});
            errs.push_back(std::abs(q.value - a.value));
        }
        FitResult f = fit_values(sp.phase_rho, errs);
        CheckResult c;
        c.check = "09/stationary-phase-error-slope";
        c.predicted = -2.5;
        c.fitted = f.slope;
        c.stderr_ = f.slope_stderr;
        c.pass = std::abs(f.slope - c.predicted) <= sp.phase_tol;
        add(std::move(c));
    }

    // 10: exact-count oracle equivalence
    {
        long long mismatches = 0;
        int done = 0;
        for (int d : {2, 3}) {
            FlatPointBody b({d, 2.0});
            for (int k = 0; k < sp.oracle_placements / 2; ++k, ++done) {
                rng::Stream st(rng::derive(seed, 7, std::uint64_t(d), std::uint64_t(k)));
                lattice::Placement pl;
                pl.R = 1.0 + (sp.oracle_R_max - 1.0) * st.uniform();
                pl.rotation = lattice::haar_rotation(d, st.next_u64());
                for (int i = 0; i < d; ++i) pl.translation[i] = st.uniform();
                long long fast = lattice::count_lattice_points(b, pl);
                long long slow = lattice::brute_force_count(b, pl);
                if (fast != slow) ++mismatches;
            }
        }
        CheckResult c;
        c.check = "10/count-oracle";
        c.predicted = 0.0;
        c.fitted = double(mismatches);
        c.pass = mismatches == 0;
        c.note = std::to_string(done) + " placements";
        add(std::move(c));
    }

    // 11: prediction algebra (continuity identities + p -> inf limit)
    {
        double worst = 0.0;
        for (int d = 2; d <= 6; ++d) {
            for (double g : {2.1, 3.0, double(d + 1), 10.0}) {
                auto rb = predictions::regime_boundaries(d, g);
                auto at = [&](double p) {
                    return predictions::predicted_exponent(d, g, p, predictions::Mode::joint)
                        .exponent;
                };
                // continuity at p_star
                double ps = rb.p_star;
                if (ps > 2.0 && ps < rb.p_flat)
                    worst = std::max(worst, std::abs(0.5 * (d - 1.0) -
                                                     d * (d - 1.0) * (ps - 2.0) /
                                                         (d * (ps - 2.0) + ps)));
                // continuity across p_flat
                if (std::isfinite(rb.p_flat)) {
                    double pf = rb.p_flat;
                    double left = g <= d + 1.0
                                      ? d * (d - 1.0) * (pf - 2.0) / (d * (pf - 2.0) + pf)
                                      : 0.5 * (d - 1.0);
                    double mid = at(pf);
                    double right =
                        g <= d + 1.0
                            ? d * (d - 1.0) / (d + 1.0) *
                                  (1.0 - 2.0 * (g - 1.0) / (pf * (d + g - 1.0)))
                            : (d - 1.0) * (1.0 - 1.0 / pf) * (1.0 - 1.0 / g);
                    worst = std::max({worst, std::abs(left - mid), std::abs(right - mid)});
                }
                // p -> infinity limit matches the sup branches (1e-6 slack for
                // the finite stand-in p = 1e9)
                double lim = at(1e9);
                double sup =
                    predictions::predicted_exponent(d, g, 1.0, predictions::Mode::sup).exponent;
                if (std::abs(lim - sup) > 1e-6) worst = std::max(worst, std::abs(lim - sup));
            }
        }
        CheckResult c;
        c.check = "11/prediction-algebra";
        c.predicted = 0.0;
        c.fitted = worst;
        c.pass = worst <= 1e-12;
        add(std::move(c));
    }

    // 12: d=3 smoke test
    {
        FlatPointBody b({3, 2.0});
        std::vector<NormEstimate> series;
        for (size_t j = 0; j < sp.d3_R.size(); ++j) {
            auto s = norms::sample_abs_discrepancies(b, sp.d3_R[j], sp.d3_rot, sp.d3_trans, seed,
                                                     100 + j);
            series.push_back(norms::estimate_from_samples(s, sp.d3_R[j], 2.0));
        }
        FitResult f = norms::fit_exponent(series);
        CheckResult c;
        c.check = "12/d3-l2-joint-slope";
        c.predicted = 1.0;
        c.fitted = f.slope;
        c.stderr_ = f.slope_stderr;
        c.pass = f.slope >= 1.0 - 2.0 * sp.slope_window && f.slope <= 1.0 + 2.0 * sp.slope_window;
        add(std::move(c));
    }

    return res;
}

}  // namespace

SuiteResult run_full(std::uint64_t seed, std::ostream& log) {
    return run_suite(SuiteParams::full(), seed, log);
}

SuiteResult run_quick(std::uint64_t seed, std::ostream& log) {
    return run_suite(SuiteParams::quick(), seed, log);
}

std::string to_json(const SuiteResult& res, std::uint64_t seed) {
    nlohmann::ordered_json j;
    j["version"] = DLAB_VERSION;
    j["seed"] = seed;
    j["all_pass"] = res.all_pass();
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& c : res.checks) {
        nlohmann::ordered_json jc;
        jc["check"] = c.check;
        jc["predicted"] = c.predicted;
        jc["fitted"] = c.fitted;
        jc["stderr"] = c.stderr_;
        jc["pass"] = c.pass;
        if (!c.note.empty()) jc["note"] = c.note;
        arr.push_back(jc);
    }
    j["checks"] = arr;
    return j.dump(2);
}

void print_table(const SuiteResult& res, std::ostream& out) {
    for (const auto& c : res.checks) {
        char line[256];
        std::snprintf(line, sizeof line, "%-4s %-42s predicted=% .6g fitted=% .6g",
                      c.pass ? "PASS" : "FAIL", c.check.c_str(), c.predicted, c.fitted);
        out << line;
        if (!c.note.empty()) out << "  (" << c.note << ")";
        out << "\n";
    }
    out << (res.all_pass() ? "ALL CHECKS PASSED" : "SOME CHECKS FAILED") << "\n";
}

}  // namespace dlab::verify
