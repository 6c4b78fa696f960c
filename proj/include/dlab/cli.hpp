// cli.hpp -- command-line front end (parse + execute), kept in the library
// so both the binary and the tests drive the same code.
#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dlab::cli {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Subcommand {
    body_info,
    count,
    discrepancy,
    norm_sweep,
    fourier_probe,
    rot_decay,
    predict,
    verify,
    report
};

struct Command {
    Subcommand kind = Subcommand::body_info;

    int d = 2;
    double gamma = 2.0;
    std::uint64_t seed = 0;
    std::string format = "csv";
    std::string out_dir = "./out";
    int threads = 0;          // 0: hardware concurrency
    bool timestamp = true;    // artifact header timestamp line

    double R = 1.0;
    std::vector<double> R_grid;
    double p = 2.0;
    std::vector<double> p_list;
    int n_rot = 64;
    int n_trans = 64;
    std::string mode = "joint";
    bool random_placement = false;
    std::vector<double> translation;

    std::vector<double> rho_grid;
    double theta = 0.0;
    std::vector<double> theta_grid;
    double calibration = 1.0;

    // predict
    std::string predict_mode = "joint";
    bool grid_over_p = false;
    double p_min = 1.0, p_max = 16.0;
    int p_steps = 61;

    // verify / report
    std::string suite = "quick";
    std::string in_path;
};

// Parses argv (without the program name). Validates every parameter against
// the module preconditions; throws UsageError with the offending flag.
// DISCREPANCY_LAB_SEED in the environment overrides --seed.
Command parse(const std::vector<std::string>& argv);

// Runs the command; primary values go to `out`, logs to `err`. Returns the
// process exit status. Artifact files land under cmd.out_dir.
int execute(const Command& cmd, std::ostream& out, std::ostream& err);

}  // namespace dlab::cli
