#include "hspec/hardy_basis.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "hspec/error.hpp"

namespace hspec {

MultiIndex::MultiIndex(std::vector<unsigned> exponents) : exponents_(std::move(exponents)) {
  if (exponents_.empty()) {
    throw ConfigError("multi_index", "dimension must be at least 1");
  }
  degree_ = std::accumulate(exponents_.begin(), exponents_.end(), 0u);
}

void BallGeometry::validate() const {
  if (dimension < 1) {
    throw ConfigError("geometry.dimension", "must be >= 1");
  }
  if (static_cast<int>(center.size()) != dimension) {
    throw ConfigError("geometry.center", "expected " + std::to_string(dimension) + " coordinates");
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ConfigError("geometry.radius", "must be a positive finite number");
  }
  if (!(contraction_ratio > 0.0 && contraction_ratio < 1.0)) {
    throw ConfigError("geometry.r", "contraction ratio must lie in (0, 1)");
  }
}

void BallGeometry::normalize(std::span<const Complex> z, std::span<Complex> out) const {
  for (std::size_t i = 0; i < z.size(); ++i) {
    out[i] = (z[i] - center[i]) / radius;
  }
}

void BallGeometry::denormalize(std::span<const Complex> u, std::span<Complex> out) const {
  for (std::size_t i = 0; i < u.size(); ++i) {
    out[i] = center[i] + radius * u[i];
  }
}

std::uint64_t dim_poly(int d, long long k) {
  if (d < 1) {
    throw std::invalid_argument("dim_poly: d must be >= 1");
  }
  if (k < -1) {
    throw std::invalid_argument("dim_poly: k must be >= -1");
  }
  if (k == -1) {
    return 0;
  }
  // binomial(k + d, d) built as prod_{i=1}^{d} (k + i) / i; every partial
  // product is itself a binomial coefficient so the division is exact.
  std::uint64_t value = 1;
  for (int i = 1; i <= d; ++i) {
    const auto factor = static_cast<std::uint64_t>(k) + static_cast<std::uint64_t>(i);
    const std::uint64_t g = std::gcd(value, static_cast<std::uint64_t>(i));
    const std::uint64_t reduced = value / g;
    const std::uint64_t divisor = static_cast<std::uint64_t>(i) / g;
    // divisor divides factor because reduced * factor / divisor is an integer
    // and gcd(reduced, divisor) = 1.
    std::uint64_t next = 0;
    if (__builtin_mul_overflow(reduced, factor / divisor, &next)) {
      throw std::overflow_error("dim_poly: binomial(" + std::to_string(k + d) + ", " +
                                std::to_string(d) + ") exceeds 64-bit range");
    }
    value = next;
  }
  return value;
}

long long degree_bracket(int d, std::uint64_t n) {
  if (d < 1 || n < 1) {
    throw std::invalid_argument("degree_bracket: requires d >= 1 and n >= 1");
  }
  auto at_least = [d, n](long long k) {
    try {
      return dim_poly(d, k) >= n;
    } catch (const std::overflow_error&) {
      return true;
    }
  };
  // h_d(n - 1) >= n, so the answer lies in [0, n - 1].
  long long lo = 0;
  long long hi = static_cast<long long>(n) - 1;
  while (lo < hi) {
    const long long mid = lo + (hi - lo) / 2;
    if (at_least(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

namespace {

void append_degree(int d, unsigned degree, std::vector<unsigned>& scratch, int position,
                   unsigned remaining, std::vector<MultiIndex>& out) {
  if (position == d - 1) {
    scratch[position] = remaining;
    out.emplace_back(scratch);
    return;
  }
  // Lexicographic descending on the leading exponent: (1,0) precedes (0,1).
  for (unsigned e = remaining + 1; e-- > 0;) {
    scratch[position] = e;
    append_degree(d, degree, scratch, position + 1, remaining - e, out);
  }
}

}  // namespace

std::vector<MultiIndex> enumerate_multiindices(int d, unsigned max_degree) {
  if (d < 1) {
    throw std::invalid_argument("enumerate_multiindices: d must be >= 1");
  }
  std::vector<MultiIndex> out;
  out.reserve(dim_poly(d, max_degree));
  std::vector<unsigned> scratch(static_cast<std::size_t>(d), 0u);
  for (unsigned degree = 0; degree <= max_degree; ++degree) {
    append_degree(d, degree, scratch, 0, degree, out);
  }
  return out;
}

double basis_norm_const(const MultiIndex& index) {
  const int d = index.dimension();
  double log_value = std::lgamma(static_cast<double>(index.degree()) + d) - std::lgamma(d);
  for (unsigned e : index.exponents()) {
    log_value -= std::lgamma(static_cast<double>(e) + 1.0);
  }
  return std::exp(0.5 * log_value);
}

Complex eval_basis(const MultiIndex& index, std::span<const Complex> z) {
  if (static_cast<int>(z.size()) != index.dimension()) {
    throw std::invalid_argument("eval_basis: point dimension does not match multi-index");
  }
  Complex monomial{1.0};
  for (std::size_t i = 0; i < z.size(); ++i) {
    Complex power{1.0};
    Complex base = z[i];
    // Repeated squaring keeps the monomial exact for small integer inputs.
    for (unsigned e = index[i]; e > 0; e >>= 1) {
      if (e & 1u) power *= base;
      base *= base;
    }
    monomial *= power;
  }
  return basis_norm_const(index) * monomial;
}

double euclidean_norm(std::span<const Complex> z) {
  double sum = 0.0;
  for (const Complex& c : z) sum += std::norm(c);
  return std::sqrt(sum);
}

Complex reproducing_kernel(std::span<const Complex> z, std::span<const Complex> zeta) {
  if (z.size() != zeta.size() || z.empty()) {
    throw std::invalid_argument("reproducing_kernel: points must share a dimension >= 1");
  }
  if (!(euclidean_norm(z) < 1.0) || !(euclidean_norm(zeta) < 1.0)) {
    throw std::domain_error("reproducing_kernel: points must lie inside the unit ball");
  }
  Complex inner{0.0};
  for (std::size_t i = 0; i < z.size(); ++i) {
    inner += z[i] * std::conj(zeta[i]);
  }
  return std::pow(1.0 - inner, -static_cast<double>(z.size()));
}

}  // namespace hspec
