// verify.hpp -- the verification suite behind `verify` and the acceptance
// test binary: one CheckResult per graded check, with the predicted value,
// the fitted/measured one, and a pass flag at the pinned tolerance.
#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace dlab::verify {

struct CheckResult {
    std::string check;
    double predicted = 0.0;
    double fitted = 0.0;
    double stderr_ = 0.0;
    bool pass = false;
    std::string note;
};

struct SuiteResult {
    std::vector<CheckResult> checks;
    bool all_pass() const;
};

// The full graded suite (numbered checks; several expand to sub-checks).
// Progress lines go to `log` as each check finishes.
SuiteResult run_full(std::uint64_t seed, std::ostream& log);

// A fast smoke version with reduced grids and wider windows; check names are
// prefixed "quick/". Not the acceptance gate.
SuiteResult run_quick(std::uint64_t seed, std::ostream& log);

std::string to_json(const SuiteResult& res, std::uint64_t seed);
void print_table(const SuiteResult& res, std::ostream& out);

}  // namespace dlab::verify
