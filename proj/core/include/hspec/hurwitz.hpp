#pragma once

#include <complex>

namespace hspec {

/// Hurwitz zeta sum_{n >= 0} (n + a)^{-s} for real s > 1 and complex a with
/// a + n != 0 for every n. Euler-Maclaurin summation after shifting a to the
/// right half-plane; relative accuracy near machine precision.
std::complex<double> hurwitz_zeta(double s, std::complex<double> a);

}  // namespace hspec
