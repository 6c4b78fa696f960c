// norms.hpp -- Monte Carlo L^p norms of the discrepancy and slope fitting.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dlab/body.hpp"
#include "dlab/lattice.hpp"

namespace dlab::norms {

enum class SweepMode { joint, rotation_only, sup_sample };

struct SweepConfig {
    int d = 2;
    double gamma = 2.0;
    std::vector<double> R_grid;  // strictly increasing, length >= 4 for fitting
    double p = 2.0;
    int n_rotations = 64;
    int n_translations = 64;
    std::uint64_t master_seed = 0;
    SweepMode mode = SweepMode::joint;

    void validate() const;
};

struct NormEstimate {
    double R = 1.0;
    double p = 2.0;
    double value = 0.0;
    double stderr_ = 0.0;
    long long n_samples = 0;
};

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double r_squared = 0.0;
    bool retried = false;  // smallest R dropped once because r^2 < 0.9
};

// Test hooks: pin the rotation to the identity and/or t to 0.
struct SampleHooks {
    bool force_identity = false;
    bool force_zero_translation = false;
};

// |D| for the n_rot x n_trans sample grid at one dilation. Rotation i comes
// from stream (seed, r_index, 1, i); the translation of flat sample k from
// (seed, r_index, 2, k). Evaluation is index-parallel, reduction is ordered.
std::vector<double> sample_abs_discrepancies(const body::FlatPointBody& b, double R, int n_rot,
                                             int n_trans, std::uint64_t seed,
                                             std::uint64_t r_index = 0, SampleHooks hooks = {});

// (mean |D|^p)^{1/p} with a delta-method standard error.
NormEstimate estimate_from_samples(std::span<const double> abs_d, double R, double p);

NormEstimate lp_norm_estimate(const body::FlatPointBody& b, double R, double p, int n_rot,
                              int n_trans, std::uint64_t seed, std::uint64_t r_index = 0,
                              SampleHooks hooks = {});

// Monte Carlo average of |D(sigma, t=0)|^p over Haar rotations, ^{1/p}.
NormEstimate rotation_only_average(const body::FlatPointBody& b, double R, double p, int n_rot,
                                   std::uint64_t seed, std::uint64_t r_index = 0);

// max |D| over the sample grid (lower envelope of the sup norm).
NormEstimate sup_sample_estimate(const body::FlatPointBody& b, double R, int n_rot, int n_trans,
                                 std::uint64_t seed, std::uint64_t r_index = 0);

std::vector<NormEstimate> run_sweep(const body::FlatPointBody& b, const SweepConfig& cfg);

// OLS on (log R, log value); throws on fewer than 4 points or nonpositive
// values. Drops the smallest R once when r^2 < 0.9 (recorded in `retried`).
FitResult fit_exponent(std::span<const NormEstimate> series);

struct ParsevalResult {
    double lhs = 0.0;         // MC estimate of integral |D(sigma,t)|^2 dt
    double rhs = 0.0;         // R^{2d} sum_{0<|n|<=cutoff} |chi_hat(R sigma n)|^2
    double ratio = 0.0;       // lhs / rhs
    double lhs_stderr = 0.0;
    double tail_fraction = 0.0;  // decay-bound estimate of the omitted tail / rhs
    double cutoff = 0.0;
};

// Requires the decay-bound tail estimate beyond the cutoff to stay under 1%
// of the partial sum (throws std::invalid_argument otherwise).
ParsevalResult parseval_check(const body::FlatPointBody& b, double R,
                              const lattice::Rotation& sigma, int n_trans, double cutoff,
                              std::uint64_t seed);

// Smallest cutoff from the given start whose bound tail is below 1%.
double parseval_pick_cutoff(const body::FlatPointBody& b, double R, double start = 24.0);

}  // namespace dlab::norms
