#include "hspec/hurwitz.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace hspec {

namespace {

// B_{2m} / (2m)! for m = 1..14.
constexpr std::array<double, 14> kBernoulliOverFactorial = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
    -174611.0 / 802857662698291200000.0,
    77683.0 / 14101100039391805440000.0,
    -236364091.0 / 1693824136731743669452800000.0,
    657931.0 / 186134520519971831808000000.0,
    -3392780147.0 / 37893265687455865519472640000000.0,
};

}  // namespace

std::complex<double> hurwitz_zeta(double s, std::complex<double> a) {
  if (!(s > 1.0)) {
    throw std::domain_error("hurwitz_zeta: s must exceed 1");
  }
  using C = std::complex<double>;

  // Shift until |a + K| is large compared with s so the asymptotic series converges fast.
  const double threshold = 12.0 + s;
  long long shift = 0;
  if (a.real() < threshold) {
    shift = static_cast<long long>(std::ceil(threshold - a.real()));
  }

  C direct{0.0};
  for (long long n = 0; n < shift; ++n) {
    const C base = a + static_cast<double>(n);
    if (base == C{0.0}) {
      throw std::domain_error("hurwitz_zeta: pole at a + n = 0");
    }
    direct += std::pow(base, -s);
  }

  const C x = a + static_cast<double>(shift);
  const C x_neg_s = std::pow(x, -s);
  C total = direct + x * x_neg_s / (s - 1.0) + 0.5 * x_neg_s;

  // Correction terms B_{2m}/(2m)! (s)_{2m-1} x^{-s-2m+1}.
  C power = x_neg_s / x;  // x^{-s-1}
  const C inv_x2 = 1.0 / (x * x);
  double rising = s;  // s (s+1) ... (s + 2m - 2)
  for (std::size_t m = 1; m <= kBernoulliOverFactorial.size(); ++m) {
    const C term = kBernoulliOverFactorial[m - 1] * rising * power;
    total += term;
    if (std::abs(term) < 1e-18 * std::abs(total)) break;
    rising *= (s + 2.0 * m - 1.0) * (s + 2.0 * m);
    power *= inv_x2;
  }
  return total;
}

}  // namespace hspec
