// rng.hpp -- counter-based splittable random streams.
//
// Every Monte Carlo sample in the project draws from a stream whose seed is
// derived by hashing (master_seed, stream ids...) through SplitMix64, so the
// numbers a sample sees depend only on its indices -- never on thread count
// or evaluation order.
#pragma once

#include <cmath>
#include <cstdint>

namespace dlab::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Hash a tuple of ids into a stream seed; order of ids matters.
inline std::uint64_t derive(std::uint64_t seed) {
    return splitmix64(seed ^ 0xD1B54A32D192ED03ULL);
}
template <class... Rest>
std::uint64_t derive(std::uint64_t seed, std::uint64_t id, Rest... rest) {
    return derive(splitmix64(seed ^ (id + kGolden)), rest...);
}

class Stream {
public:
    explicit Stream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += kGolden;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in (0, 1); safe as a log() argument
    double uniform_open() { return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    // standard normal, Box-Muller (two draws per call)
    double normal() {
        double u = uniform_open();
        double v = uniform();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(6.28318530717958647692 * v);
    }

private:
    std::uint64_t state_;
};

}  // namespace dlab::rng
