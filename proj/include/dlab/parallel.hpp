// parallel.hpp -- bounded worker pool for index-parallel loops.
//
// Work units write into caller-owned per-index slots; reductions happen
// afterwards in a fixed order, so results are identical for any thread cap.
#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace dlab::parallel {

// n <= 0 resets to hardware concurrency.
void set_max_threads(int n);
int max_threads();

// Runs fn(i) for i in [0, n); blocks until done. The first exception thrown
// by any worker is rethrown.
void for_index(std::size_t n, const std::function<void(std::size_t)>& fn);

// In-order pairwise (tree) summation.
double pairwise_sum(std::span<const double> v);

}  // namespace dlab::parallel
