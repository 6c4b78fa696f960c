// bessel.hpp -- J1, the only Bessel order the d=3 slice transform needs.
#pragma once

namespace dlab::bessel {

// Power series for |x| < 12, large-argument asymptotic beyond; the seam is
// validated against a 50-term series to relative 1e-10 in the tests.
double j1(double x);

// Series with an explicit term count (test oracle; long double accumulation).
long double j1_series(long double x, int terms);

}  // namespace dlab::bessel
