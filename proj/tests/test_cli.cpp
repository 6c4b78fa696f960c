#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dlab/artifacts.hpp"
#include "dlab/body.hpp"
#include "dlab/cli.hpp"
#include "dlab/lattice.hpp"
#include "dlab/rng.hpp"

using namespace dlab;

namespace {

std::string run(const std::vector<std::string>& args, int expect_status = 0) {
    std::ostringstream out, err;
    auto cmd = cli::parse(args);
    int status = cli::execute(cmd, out, err);
    CHECK(status == expect_status);
    return out.str();
}

std::string strip_timestamp(const std::string& text) {
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line))
        if (line.rfind("# timestamp", 0) != 0) out << line << "\n";
    return out.str();
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("parse: defaults and validation") {
    auto cmd = cli::parse({"count", "--d", "2", "--gamma", "2", "--R", "1"});
    CHECK(cmd.kind == cli::Subcommand::count);
    CHECK(cmd.d == 2);
    CHECK(cmd.gamma == 2.0);
    CHECK(cmd.R == 1.0);
    CHECK(cmd.seed == 0);
    CHECK_FALSE(cmd.random_placement);
    CHECK(cmd.format == "csv");

    auto cmd2 = cli::parse({"predict", "--d", "3", "--gamma", "6", "--p", "10"});
    CHECK(cmd2.kind == cli::Subcommand::predict);

    CHECK_THROWS_AS((void)cli::parse({"norm-sweep", "--gamma", "1.5", "--R-grid", "8,16,32,64"}),
                    cli::UsageError);
    CHECK_THROWS_AS((void)cli::parse({"count", "--R", "0.5"}), cli::UsageError);
    CHECK_THROWS_AS((void)cli::parse({"count", "--no-such-flag", "1"}), cli::UsageError);
    CHECK_THROWS_AS((void)cli::parse({"norm-sweep", "--p", "0.5", "--R-grid", "8,16,32,64"}),
                    cli::UsageError);
    CHECK_THROWS_AS((void)cli::parse({}), cli::UsageError);
}

TEST_CASE("execute: count prints the frozen value and writes the artifact") {
    auto dir = std::filesystem::temp_directory_path() / "dlab_test_count";
    std::filesystem::remove_all(dir);
    auto out = run({"count", "--d", "2", "--gamma", "2", "--R", "1", "--out", dir.string()});
    CHECK(out == "7\n");

    auto csv = artifacts::CsvFile::load((dir / "count.csv").string());
    CHECK(csv.columns == std::vector<std::string>{"d", "gamma", "R", "seed", "count",
                                                  "discrepancy"});
    CHECK(csv.rows.size() == 1);
    CHECK(csv.value(0, "count") == 7.0);
    CHECK(csv.value(0, "R") == 1.0);
    CHECK(csv.meta.count("seed") == 1);
    CHECK(csv.meta.count("version") == 1);
}

TEST_CASE("count with an R grid streams one row per dilation") {
    auto dir = std::filesystem::temp_directory_path() / "dlab_rgrid";
    std::filesystem::remove_all(dir);
    auto out = run({"count", "--d", "2", "--gamma", "2", "--R-grid", "1,2", "--out", dir.string()});

    dlab::body::FlatPointBody b({2, 2.0});
    lattice::Placement pl;
    pl.R = 2.0;
    pl.rotation = lattice::identity_rotation(2);
    long long at2 = lattice::brute_force_count(b, pl);
    CHECK(out == "7\n" + std::to_string(at2) + "\n");

    auto csv = artifacts::CsvFile::load((dir / "count.csv").string());
    CHECK(csv.rows.size() == 2);
    CHECK(csv.value(1, "R") == 2.0);
    CHECK(csv.value(1, "count") == double(at2));
}

TEST_CASE("execute: predict table") {
    auto out = run({"predict", "--d", "2", "--gamma", "4", "--p", "2"});
    CHECK(out.find("exponent=0.5") != std::string::npos);
    CHECK(out.find("log_power=0") != std::string::npos);
    CHECK(out.find("regime=mean-square") != std::string::npos);
}

TEST_CASE("artifacts are deterministic modulo the timestamp line") {
    auto dir1 = std::filesystem::temp_directory_path() / "dlab_det1";
    auto dir2 = std::filesystem::temp_directory_path() / "dlab_det2";
    std::filesystem::remove_all(dir1);
    std::filesystem::remove_all(dir2);
    std::vector<std::string> base{"norm-sweep", "--d",     "2",  "--gamma", "2",
                                  "--R-grid",   "4,8,16,32", "--p", "2",       "--rot",
                                  "4",          "--trans", "4",  "--seed",   "9"};
    auto a1 = base;
    a1.push_back("--out");
    a1.push_back(dir1.string());
    auto a2 = base;
    a2.push_back("--out");
    a2.push_back(dir2.string());
    auto o1 = run(a1);
    auto o2 = run(a2);
    CHECK(o1 == o2);
    CHECK(strip_timestamp(slurp(dir1 / "norm_sweep.csv")) ==
          strip_timestamp(slurp(dir2 / "norm_sweep.csv")));

    // a --threads cap must not change the artifact
    auto dir3 = std::filesystem::temp_directory_path() / "dlab_det3";
    std::filesystem::remove_all(dir3);
    auto a3 = base;
    a3.insert(a3.end(), {"--threads", "1", "--out", dir3.string()});
    run(a3);
    CHECK(strip_timestamp(slurp(dir1 / "norm_sweep.csv")) ==
          strip_timestamp(slurp(dir3 / "norm_sweep.csv")));
}

TEST_CASE("norm-sweep CSV round-trips losslessly") {
    auto dir = std::filesystem::temp_directory_path() / "dlab_roundtrip";
    std::filesystem::remove_all(dir);
    run({"norm-sweep", "--d", "2", "--gamma", "3", "--R-grid", "4,8,16,32", "--p", "2", "--rot",
         "4", "--trans", "4", "--seed", "3", "--out", dir.string()});
    auto csv = artifacts::CsvFile::load((dir / "norm_sweep.csv").string());
    REQUIRE(csv.rows.size() == 4);
    // re-render every double and compare textually: %.17g is lossless
    for (size_t r = 0; r < csv.rows.size(); ++r)
        for (const std::string& col : {"R", "value", "stderr"}) {
            double v = csv.value(r, col);
            for (size_t c = 0; c < csv.columns.size(); ++c)
                if (csv.columns[c] == col) CHECK(artifacts::format_double(v) == csv.rows[r][c]);
        }
}

TEST_CASE("environment seed override") {
    setenv("DISCREPANCY_LAB_SEED", "777", 1);
    auto cmd = cli::parse({"count", "--seed", "5"});
    unsetenv("DISCREPANCY_LAB_SEED");
    CHECK(cmd.seed == 777);
}

TEST_CASE("placement and body-params JSON round trips") {
    lattice::Placement pl;
    pl.R = 3.5;
    pl.rotation = lattice::haar_rotation(3, 11);
    pl.translation = {0.125, 0.5, 0.875};
    auto text = artifacts::placement_to_json(pl);
    auto back = artifacts::placement_from_json(text);
    CHECK(back.R == pl.R);
    for (int i = 0; i < 3; ++i) {
        CHECK(back.translation[i] == pl.translation[i]);
        for (int j = 0; j < 3; ++j) CHECK(back.rotation.m[i][j] == pl.rotation.m[i][j]);
    }

    auto bp = artifacts::body_params_from_json("{\"d\": 3, \"gamma\": 2.5}");
    CHECK(bp.d == 3);
    CHECK(bp.gamma == 2.5);
    CHECK(artifacts::body_params_to_json(bp) == "{\"d\":3,\"gamma\":2.5}");
    CHECK_THROWS((void)artifacts::body_params_from_json("{\"d\": 1, \"gamma\": 2.5}"));
}
