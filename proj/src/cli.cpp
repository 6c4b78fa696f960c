#include "dlab/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dlab/artifacts.hpp"
#include "dlab/body.hpp"
#include "dlab/fourier.hpp"
#include "dlab/lattice.hpp"
#include "dlab/norms.hpp"
#include "dlab/parallel.hpp"
#include "dlab/predictions.hpp"
#include "dlab/rng.hpp"
#include "dlab/verify.hpp"
#include "dlab/version.hpp"

namespace dlab::cli {

namespace {

std::vector<double> parse_grid(const std::string& text, const char* flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (...) {
            throw UsageError(std::string(flag) + ": cannot parse '" + item + "'");
        }
    }
    if (out.empty()) throw UsageError(std::string(flag) + ": empty list");
    return out;
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw UsageError(msg);
}

}  // namespace

Command parse(const std::vector<std::string>& argv) {
    CLI::App app{"discrepancy-lab"};
    app.require_subcommand(1);

    Command cmd;
    std::string r_grid_text, p_text, rho_text, theta_text, t_text, grid_text;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--d", cmd.d, "dimension (2 or 3 for lattice/fourier work)");
        sub->add_option("--gamma", cmd.gamma, "flatness order (>= 2)");
        sub->add_option("--seed", cmd.seed, "master seed");
        sub->add_option("--out", cmd.out_dir, "artifact directory");
        sub->add_option("--format", cmd.format, "csv or json");
        sub->add_option("--threads", cmd.threads, "max worker threads (0 = auto)");
        sub->add_flag("--no-timestamp", [&](size_t) { cmd.timestamp = false; },
                      "omit the timestamp header line");
    };

    auto* sc_body = app.add_subcommand("body-info", "print body constants and volume");
    add_common(sc_body);

    auto* sc_count = app.add_subcommand("count", "exact lattice point count");
    add_common(sc_count);
    sc_count->add_option("--R", cmd.R, "dilation (>= 1)");
    sc_count->add_option("--R-grid", r_grid_text, "comma list of dilations");
    sc_count->add_option("--t", t_text, "translation, comma list (default 0)");
    sc_count->add_flag("--random", cmd.random_placement, "Haar rotation + uniform translation");

    auto* sc_disc = app.add_subcommand("discrepancy", "R^d |Omega| - count");
    add_common(sc_disc);
    sc_disc->add_option("--R", cmd.R);
    sc_disc->add_option("--R-grid", r_grid_text);
    sc_disc->add_option("--t", t_text);
    sc_disc->add_flag("--random", cmd.random_placement);

    auto* sc_sweep = app.add_subcommand("norm-sweep", "Monte Carlo L^p norm sweep over R");
    add_common(sc_sweep);
    sc_sweep->add_option("--R-grid", r_grid_text, "comma list, strictly increasing (>= 4 values)");
    sc_sweep->add_option("--p", cmd.p, "norm exponent (>= 1)");
    sc_sweep->add_option("--rot", cmd.n_rot, "rotation samples per R");
    sc_sweep->add_option("--trans", cmd.n_trans, "translation samples per R");
    sc_sweep->add_option("--mode", cmd.mode, "joint | rotation_only | sup_sample");

    auto* sc_probe = app.add_subcommand("fourier-probe", "chi_hat along a (rho, theta) grid");
    add_common(sc_probe);
    sc_probe->add_option("--rho-grid", rho_text, "comma list of radial frequencies");
    sc_probe->add_option("--theta-grid", theta_text, "comma list of polar angles");
    sc_probe->add_option("--calib", cmd.calibration, "decay bound calibration constant");

    auto* sc_rot = app.add_subcommand("rot-decay", "rotational L^p averages of chi_hat");
    add_common(sc_rot);
    sc_rot->add_option("--rho-grid", rho_text);
    sc_rot->add_option("--p-list", p_text, "comma list of exponents");

    auto* sc_pred = app.add_subcommand("predict", "predicted exponent for (d, gamma, p, mode)");
    add_common(sc_pred);
    sc_pred->add_option("--p", cmd.p);
    sc_pred->add_option("--mode", cmd.predict_mode,
                        "joint | rotation_only_L1 | sup | lower_bound | fourier_rot");
    sc_pred->add_option("--grid", grid_text, "pmin:pmax:steps CSV grid over p");

    auto* sc_verify = app.add_subcommand("verify", "run the verification suite");
    add_common(sc_verify);
    sc_verify->add_option("--suite", cmd.suite, "quick | full");

    auto* sc_report = app.add_subcommand("report", "pretty-print a verify JSON report");
    add_common(sc_report);
    sc_report->add_option("--in", cmd.in_path, "path to verify JSON")->required();

    std::vector<std::string> args(argv.rbegin(), argv.rend());  // CLI11 wants reversed
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        throw UsageError(app.help());
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    if (sc_body->parsed()) cmd.kind = Subcommand::body_info;
    if (sc_count->parsed()) cmd.kind = Subcommand::count;
    if (sc_disc->parsed()) cmd.kind = Subcommand::discrepancy;
    if (sc_sweep->parsed()) cmd.kind = Subcommand::norm_sweep;
    if (sc_probe->parsed()) cmd.kind = Subcommand::fourier_probe;
    if (sc_rot->parsed()) cmd.kind = Subcommand::rot_decay;
    if (sc_pred->parsed()) cmd.kind = Subcommand::predict;
    if (sc_verify->parsed()) cmd.kind = Subcommand::verify;
    if (sc_report->parsed()) cmd.kind = Subcommand::report;

    if (const char* env = std::getenv("DISCREPANCY_LAB_SEED")) cmd.seed = std::strtoull(env, nullptr, 10);

    if (!r_grid_text.empty()) cmd.R_grid = parse_grid(r_grid_text, "--R-grid");
    if (!rho_text.empty()) cmd.rho_grid = parse_grid(rho_text, "--rho-grid");
    if (!theta_text.empty()) cmd.theta_grid = parse_grid(theta_text, "--theta-grid");
    if (!p_text.empty()) cmd.p_list = parse_grid(p_text, "--p-list");
    if (!t_text.empty()) cmd.translation = parse_grid(t_text, "--t");
    if (!grid_text.empty()) {
        cmd.grid_over_p = true;
        std::stringstream ss(grid_text);
        std::string a, bb, c;
        if (!std::getline(ss, a, ':') || !std::getline(ss, bb, ':') || !std::getline(ss, c))
            throw UsageError("--grid: expected pmin:pmax:steps");
        cmd.p_min = std::stod(a);
        cmd.p_max = std::stod(bb);
        cmd.p_steps = std::stoi(c);
        require(cmd.p_min >= 1.0 && cmd.p_max > cmd.p_min && cmd.p_steps >= 2,
                "--grid: need 1 <= pmin < pmax, steps >= 2");
    }

    // validate against the module preconditions before any computation
    require(cmd.d >= 2, "--d: dimension must be >= 2");
    require(cmd.gamma >= 2.0, "--gamma: flatness order must be >= 2");
    require(cmd.p >= 1.0, "--p: exponent must be >= 1");
    require(cmd.R >= 1.0, "--R: dilation must be >= 1");
    for (double r : cmd.R_grid) require(r >= 1.0, "--R-grid: dilations must be >= 1");
    for (double p : cmd.p_list) require(p >= 1.0, "--p-list: exponents must be >= 1");
    for (double r : cmd.rho_grid) require(r > 0.0, "--rho-grid: frequencies must be > 0");
    require(cmd.n_rot >= 1 && cmd.n_trans >= 1, "--rot/--trans: sample counts must be >= 1");
    require(cmd.format == "csv" || cmd.format == "json", "--format: csv or json");
    require(cmd.suite == "quick" || cmd.suite == "full", "--suite: quick or full");
    bool needs_lattice = cmd.kind == Subcommand::count || cmd.kind == Subcommand::discrepancy ||
                         cmd.kind == Subcommand::norm_sweep;
    bool needs_fourier =
        cmd.kind == Subcommand::fourier_probe || cmd.kind == Subcommand::rot_decay;
    if (needs_lattice || needs_fourier)
        require(cmd.d == 2 || cmd.d == 3, "--d: lattice/fourier work supports d in {2, 3}");
    if (cmd.kind == Subcommand::norm_sweep)
        require(cmd.mode == "joint" || cmd.mode == "rotation_only" || cmd.mode == "sup_sample",
                "--mode: joint | rotation_only | sup_sample");
    if (cmd.kind == Subcommand::predict)
        (void)predictions::mode_from_string(cmd.predict_mode);  // throws on unknown

    return cmd;
}

namespace {

std::string timestamp_line(bool enabled) {
    if (!enabled) return "(disabled)";
    auto now = std::chrono::system_clock::now();
    auto t = std::chrono::system_clock::to_time_t(now);
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

std::ofstream open_artifact(const Command& cmd, const std::string& name) {
    std::filesystem::create_directories(cmd.out_dir);
    auto path = std::filesystem::path(cmd.out_dir) / name;
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    return f;
}

void common_meta(artifacts::CsvWriter& w, const Command& cmd, const std::string& params) {
    w.meta("version", DLAB_VERSION);
    w.meta("timestamp", timestamp_line(cmd.timestamp));
    w.meta("seed", std::to_string(cmd.seed));
    w.meta("params", params);
}

lattice::Placement make_placement(const Command& cmd, double R) {
    lattice::Placement pl;
    pl.R = R;
    if (cmd.random_placement) {
        pl.rotation = lattice::haar_rotation(cmd.d, rng::derive(cmd.seed, 0, 1, 0));
        rng::Stream st(rng::derive(cmd.seed, 0, 2, 0));
        for (int i = 0; i < cmd.d; ++i) pl.translation[i] = st.uniform();
    } else {
        pl.rotation = lattice::identity_rotation(cmd.d);
        for (size_t i = 0; i < cmd.translation.size() && i < 3; ++i)
            pl.translation[i] = cmd.translation[i];
    }
    return pl;
}

int run_count_like(const Command& cmd, std::ostream& out, bool as_discrepancy) {
    body::FlatPointBody b({cmd.d, cmd.gamma});
    std::vector<double> grid = cmd.R_grid.empty() ? std::vector<double>{cmd.R} : cmd.R_grid;

    auto f = open_artifact(cmd, as_discrepancy ? "discrepancy.csv" : "count.csv");
    artifacts::CsvWriter w(f);
    common_meta(w, cmd, "d=" + std::to_string(cmd.d) + " gamma=" + artifacts::format_double(cmd.gamma));
    w.header({"d", "gamma", "R", "seed", "count", "discrepancy"});

    for (double R : grid) {
        lattice::Placement pl = make_placement(cmd, R);
        long long n = lattice::count_lattice_points(b, pl);
        double D = std::pow(R, cmd.d) * b.volume() - double(n);
        w.row({std::to_string(cmd.d), artifacts::format_double(cmd.gamma),
               artifacts::format_double(R), std::to_string(cmd.seed), std::to_string(n),
               artifacts::format_double(D)});
        out << (as_discrepancy ? artifacts::format_double(D) : std::to_string(n)) << "\n";
    }
    return 0;
}

int run_norm_sweep(const Command& cmd, std::ostream& out) {
    if (cmd.R_grid.size() < 4) throw UsageError("norm-sweep: --R-grid needs at least 4 dilations");
    body::FlatPointBody b({cmd.d, cmd.gamma});
    norms::SweepConfig cfg;
    cfg.d = cmd.d;
    cfg.gamma = cmd.gamma;
    cfg.R_grid = cmd.R_grid;
    cfg.p = cmd.p;
    cfg.n_rotations = cmd.n_rot;
    cfg.n_translations = cmd.n_trans;
    cfg.master_seed = cmd.seed;
    cfg.mode = cmd.mode == "joint" ? norms::SweepMode::joint
               : cmd.mode == "rotation_only" ? norms::SweepMode::rotation_only
                                             : norms::SweepMode::sup_sample;
    auto series = norms::run_sweep(b, cfg);

    auto f = open_artifact(cmd, "norm_sweep.csv");
    artifacts::CsvWriter w(f);
    common_meta(w, cmd,
                "d=" + std::to_string(cmd.d) + " gamma=" + artifacts::format_double(cmd.gamma) +
                    " p=" + artifacts::format_double(cmd.p) + " mode=" + cmd.mode +
                    " rot=" + std::to_string(cmd.n_rot) + " trans=" + std::to_string(cmd.n_trans));
    w.header({"d", "gamma", "p", "mode", "R", "value", "stderr", "n"});
    for (const auto& e : series)
        w.row({std::to_string(cmd.d), artifacts::format_double(cmd.gamma),
               artifacts::format_double(cmd.p), cmd.mode, artifacts::format_double(e.R),
               artifacts::format_double(e.value), artifacts::format_double(e.stderr_),
               std::to_string(e.n_samples)});

    auto fit = norms::fit_exponent(series);
    out << "slope=" << artifacts::format_double(fit.slope)
        << " stderr=" << artifacts::format_double(fit.slope_stderr)
        << " r2=" << artifacts::format_double(fit.r_squared)
        << (fit.retried ? " (smallest R dropped)" : "") << "\n";
    return 0;
}

int run_fourier_probe(const Command& cmd, std::ostream& out) {
    body::FlatPointBody b({cmd.d, cmd.gamma});
    std::vector<double> rhos = cmd.rho_grid.empty() ? std::vector<double>{32.0} : cmd.rho_grid;
    std::vector<double> thetas =
        cmd.theta_grid.empty() ? std::vector<double>{0.0, std::numbers::pi / 3.0} : cmd.theta_grid;

    auto f = open_artifact(cmd, "fourier_probe.csv");
    artifacts::CsvWriter w(f);
    common_meta(w, cmd, "d=" + std::to_string(cmd.d) + " gamma=" + artifacts::format_double(cmd.gamma) +
                            " calib=" + artifacts::format_double(cmd.calibration));
    w.header({"rho", "theta", "re", "im", "abs", "bound", "asymptotic_abs"});
    for (double rho : rhos)
        for (double th : thetas) {
            auto chi = fourier::chi_hat(b, {rho, th});
            double bound = rho >= 1.0
                               ? fourier::decay_bound(b, {rho, th}, cmd.calibration)
                               : std::numeric_limits<double>::quiet_NaN();
            double asym = std::numeric_limits<double>::quiet_NaN();
            if (th >= 0.1 && th <= std::numbers::pi - 0.1)
                asym = std::abs(fourier::chi_hat_asymptotic(b, {rho, th}).value);
            w.row_values({rho, th, chi.value.real(), chi.value.imag(), std::abs(chi.value), bound,
                          asym});
        }
    out << "wrote fourier_probe.csv (" << rhos.size() * thetas.size() << " rows)\n";
    return 0;
}

int run_rot_decay(const Command& cmd, std::ostream& out) {
    body::FlatPointBody b({cmd.d, cmd.gamma});
    std::vector<double> rhos = cmd.rho_grid.empty()
                                   ? std::vector<double>{32, 64, 128, 256}
                                   : cmd.rho_grid;
    std::vector<double> ps = cmd.p_list.empty() ? std::vector<double>{2.0} : cmd.p_list;

    auto f = open_artifact(cmd, "rot_decay.csv");
    artifacts::CsvWriter w(f);
    common_meta(w, cmd, "d=" + std::to_string(cmd.d) + " gamma=" + artifacts::format_double(cmd.gamma));
    w.header({"rho", "p", "average"});
    for (double rho : rhos) {
        auto vals = fourier::rotational_lp_averages(b, rho, ps);
        for (size_t i = 0; i < ps.size(); ++i) w.row_values({rho, ps[i], vals[i]});
    }
    out << "wrote rot_decay.csv (" << rhos.size() * ps.size() << " rows)\n";
    return 0;
}

int run_predict(const Command& cmd, std::ostream& out) {
    auto mode = predictions::mode_from_string(cmd.predict_mode);
    auto pr = predictions::predicted_exponent(cmd.d, cmd.gamma, cmd.p, mode);
    auto rb = predictions::regime_boundaries(cmd.d, cmd.gamma);
    out << "regime=" << pr.regime << " exponent=" << artifacts::format_double(pr.exponent)
        << " log_power=" << artifacts::format_double(pr.log_power)
        << " bound=" << (pr.bound_kind == predictions::BoundKind::upper ? "upper" : "lower")
        << "\n";
    out << "p_star=" << artifacts::format_double(rb.p_star)
        << " p_flat=" << artifacts::format_double(rb.p_flat)
        << " p_mix=" << artifacts::format_double(rb.p_mix) << "\n";

    if (cmd.grid_over_p) {
        auto f = open_artifact(cmd, "predict_grid.csv");
        artifacts::CsvWriter w(f);
        common_meta(w, cmd, "d=" + std::to_string(cmd.d) + " gamma=" +
                                artifacts::format_double(cmd.gamma) + " mode=" + cmd.predict_mode);
        w.header({"p", "exponent", "log_power", "regime"});
        for (int i = 0; i < cmd.p_steps; ++i) {
            double p = cmd.p_min + (cmd.p_max - cmd.p_min) * i / (cmd.p_steps - 1);
            auto g = predictions::predicted_exponent(cmd.d, cmd.gamma, p, mode);
            w.row({artifacts::format_double(p), artifacts::format_double(g.exponent),
                   artifacts::format_double(g.log_power), g.regime});
        }
        out << "wrote predict_grid.csv\n";
    }
    return 0;
}

int run_verify(const Command& cmd, std::ostream& out, std::ostream& err) {
    auto res = cmd.suite == "full" ? verify::run_full(cmd.seed, err)
                                   : verify::run_quick(cmd.seed, err);
    std::string json = verify::to_json(res, cmd.seed);
    auto f = open_artifact(cmd, "verify_" + cmd.suite + ".json");
    f << json << "\n";
    verify::print_table(res, out);
    return res.all_pass() ? 0 : 1;
}

int run_report(const Command& cmd, std::ostream& out) {
    std::ifstream in(cmd.in_path);
    if (!in) throw std::runtime_error("cannot open " + cmd.in_path);
    auto j = nlohmann::json::parse(in);
    out << "verify report (version " << j.value("version", "?") << ", seed "
        << j.value("seed", 0) << ")\n";
    bool all = true;
    for (const auto& c : j.at("checks")) {
        bool pass = c.at("pass").get<bool>();
        all = all && pass;
        char line[256];
        std::snprintf(line, sizeof line, "%-4s %-42s predicted=% .6g fitted=% .6g\n",
                      pass ? "PASS" : "FAIL", c.at("check").get<std::string>().c_str(),
                      c.at("predicted").get<double>(), c.at("fitted").get<double>());
        out << line;
    }
    out << (all ? "ALL CHECKS PASSED" : "SOME CHECKS FAILED") << "\n";
    return all ? 0 : 1;
}

}  // namespace

int execute(const Command& cmd, std::ostream& out, std::ostream& err) {
    parallel::set_max_threads(cmd.threads);
    body::BodyParams bp{cmd.d, cmd.gamma};
    bp.validate();

    switch (cmd.kind) {
        case Subcommand::body_info: {
            body::FlatPointBody b(bp);
            nlohmann::ordered_json j;
            j["d"] = cmd.d;
            j["gamma"] = cmd.gamma;
            j["volume"] = b.volume();
            j["arc_center"] = b.arc_center();
            j["arc_radius"] = b.arc_radius();
            j["height"] = b.height();
            j["radial_extent"] = b.radial_extent();
            out << j.dump(2) << "\n";
            return 0;
        }
        case Subcommand::count:
            return run_count_like(cmd, out, false);
        case Subcommand::discrepancy:
            return run_count_like(cmd, out, true);
        case Subcommand::norm_sweep:
            return run_norm_sweep(cmd, out);
        case Subcommand::fourier_probe:
            return run_fourier_probe(cmd, out);
        case Subcommand::rot_decay:
            return run_rot_decay(cmd, out);
        case Subcommand::predict:
            return run_predict(cmd, out);
        case Subcommand::verify:
            return run_verify(cmd, out, err);
        case Subcommand::report:
            return run_report(cmd, out);
    }
    return 2;
}

}  // namespace dlab::cli
