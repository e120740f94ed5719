#include "hspec/bound_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hspec/error.hpp"
#include "hspec/hardy_basis.hpp"

namespace hspec {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_ratio(double r) {
  if (!(r > 0.0 && r < 1.0)) {
    throw std::domain_error("contraction ratio r must lie in (0, 1)");
  }
}

// log h_{m}(k) with h_0 = 1. Exact through 64-bit integers when possible.
double log_dim_poly(int m, long long k) {
  if (m == 0) return 0.0;
  try {
    return std::log(static_cast<double>(dim_poly(m, k)));
  } catch (const std::overflow_error&) {
    return std::lgamma(static_cast<double>(k) + m + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(m + 1.0);
  }
}

double real_dim_poly(int m, long long k) {
  if (m == 0) return 1.0;
  try {
    return static_cast<double>(dim_poly(m, k));
  } catch (const std::overflow_error&) {
    return std::exp(log_dim_poly(m, k));
  }
}

double log_factorial(int d) { return std::lgamma(d + 1.0); }

// Number of indices l in [1, n] with degree_bracket(d, l) == k.
std::uint64_t degree_count(int d, long long k, std::uint64_t n) {
  const std::uint64_t below = dim_poly(d, k - 1);
  if (n <= below) return 0;
  std::uint64_t upto = n;
  try {
    upto = std::min<std::uint64_t>(n, dim_poly(d, k));
  } catch (const std::overflow_error&) {
  }
  return upto - below;
}

}  // namespace

void BoundParams::validate() const {
  if (d < 1) throw ConfigError("params.d", "dimension must be >= 1");
  if (!(r > 0.0 && r < 1.0)) throw ConfigError("params.r", "must lie in (0, 1)");
  if (!(W > 0.0) || !std::isfinite(W)) throw ConfigError("params.W", "must be positive and finite");
}

std::string_view to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::explicit_general: return "explicit_general";
    case BoundKind::explicit_d1: return "explicit_d1";
    case BoundKind::geommean_weyl: return "geommean_weyl";
    case BoundKind::approx_number: return "approx_number";
  }
  return "unknown";
}

void BoundSequence::validate() const {
  params.validate();
  if (kind == BoundKind::explicit_d1 && params.d != 1) {
    throw std::invalid_argument("explicit_d1 sequence requires d == 1");
  }
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw NumericalError("bound sequence holds a non-positive or non-finite value");
    }
  }
}

double log_tail_sum(int d, long long k, double r) {
  if (d < 1 || k < 0) throw std::invalid_argument("tail_sum: requires d >= 1 and k >= 0");
  check_ratio(r);
  const double r2 = r * r;
  const double majorant_factor = std::pow(1.0 - r2, -static_cast<double>(d));

  // Terms relative to the leading term h_{d-1}(k) r^{2k}:
  // q_{j+1} = q_j (k + j + d) / (k + j + 1) r^2.
  double sum = 0.0;
  double q = 1.0;
  long long terms = 0;
  constexpr long long kMaxTerms = 50'000'000;
  if (d == 1) {
    // geometric series
    sum = 1.0 / (1.0 - r2);
    terms = 2;
  }
  for (long long l = k; d > 1; ++l) {
    sum += q;
    ++terms;
    // Everything from l + 1 on is at most q_{l+1} / (1 - r^2)^d. The term
    // ratios decrease in l, so q_{l+1} / (1 - ratio_{l+1}) bounds it as well.
    const double next = q * (static_cast<double>(l + d) / static_cast<double>(l + 1)) * r2;
    const double ratio = (static_cast<double>(l + 1 + d) / static_cast<double>(l + 2)) * r2;
    const double majorant = ratio < 1.0 ? std::min(next * majorant_factor, next / (1.0 - ratio))
                                        : next * majorant_factor;
    if (majorant <= 1e-18 * sum) {
      sum += majorant;
      break;
    }
    if (terms > kMaxTerms) {
      sum += majorant;
      break;
    }
    q = next;
  }
  // Rounding allowance for the sequential sum and the recurrence.
  sum *= 1.0 + static_cast<double>(2 * terms + 8) * kEps;
  return log_dim_poly(d - 1, k) + 2.0 * static_cast<double>(k) * std::log(r) + std::log(sum);
}

double tail_sum(int d, long long k, double r) { return std::exp(log_tail_sum(d, k, r)); }

double log_approx_number_bound(std::uint64_t n, int d, double r) {
  return 0.5 * log_tail_sum(d, degree_bracket(d, n), r);
}

double approx_number_bound(std::uint64_t n, int d, double r) {
  return std::exp(log_approx_number_bound(n, d, r));
}

SimplifiedApproxBound simplified_approx_bound(std::uint64_t n, int d) {
  const long long k = degree_bracket(d, n);
  return {real_dim_poly(d - 1, k), k};
}

ProofChainQuantities proof_chain_quantities(std::uint64_t n, int d) {
  if (n < 1) throw std::invalid_argument("proof_chain_quantities: n must be >= 1");
  const long long top = degree_bracket(d, n);
  double log_alpha_sum = 0.0;
  std::uint64_t beta_sum = 0;
  for (long long k = 0; k <= top; ++k) {
    const std::uint64_t count = degree_count(d, k, n);
    log_alpha_sum += static_cast<double>(count) * log_dim_poly(d - 1, k);
    beta_sum += count * static_cast<std::uint64_t>(k);
  }
  // Exact integer part plus the remainder keeps the mean exact to rounding.
  const double beta = static_cast<double>(beta_sum / n) +
                      static_cast<double>(beta_sum % n) / static_cast<double>(n);
  return {std::exp(log_alpha_sum / (2.0 * static_cast<double>(n))), beta};
}

double eigenvalue_bound_geommean(std::uint64_t n, const BoundParams& p) {
  p.validate();
  if (n < 1) throw std::invalid_argument("eigenvalue_bound_geommean: n must be >= 1");
  const long long top = degree_bracket(p.d, n);
  double log_sum = 0.0;
  for (long long k = 0; k <= top; ++k) {
    const std::uint64_t count = degree_count(p.d, k, n);
    log_sum += static_cast<double>(count) * 0.5 * log_tail_sum(p.d, k, p.r);
  }
  return p.W * std::exp(log_sum / static_cast<double>(n));
}

double log_eigenvalue_bound_explicit(std::uint64_t n, const BoundParams& p) {
  p.validate();
  if (n < 1) throw std::invalid_argument("eigenvalue_bound_explicit: n must be >= 1");
  const double d = p.d;
  const double nn = static_cast<double>(n);
  const double log_r = std::log(p.r);
  const double prefactor = std::log(p.W) + 0.5 * std::log(d) - d * log_r - 0.5 * d * std::log1p(-p.r * p.r);
  const double growth = (d - 1.0) / (2.0 * d) * std::log(nn);
  const double exponent = d / (d + 1.0) * std::exp(log_factorial(p.d) / d) * std::pow(nn, 1.0 / d);
  return prefactor + growth + exponent * log_r;
}

double eigenvalue_bound_explicit(std::uint64_t n, const BoundParams& p) {
  return std::exp(log_eigenvalue_bound_explicit(n, p));
}

double eigenvalue_bound_d1(std::uint64_t n, double r, double W) {
  BoundParams{1, r, W}.validate();
  if (n < 1) throw std::invalid_argument("eigenvalue_bound_d1: n must be >= 1");
  return W * std::exp(0.5 * static_cast<double>(n - 1) * std::log(r) - 0.5 * std::log1p(-r * r));
}

double eigenvalue_bound_chain(std::uint64_t n, const BoundParams& p) {
  p.validate();
  const ProofChainQuantities q = proof_chain_quantities(n, p.d);
  return std::exp(std::log(p.W) + std::log(q.alpha) + q.beta * std::log(p.r) -
                  0.5 * p.d * std::log1p(-p.r * p.r));
}

std::vector<BoundRow> bound_table(std::uint64_t n_max, const BoundParams& p) {
  p.validate();
  std::vector<BoundRow> rows;
  rows.reserve(n_max);

  const double log_r = std::log(p.r);
  const double log_w = std::log(p.W);
  const double log_norm = -0.5 * p.d * std::log1p(-p.r * p.r);

  long long degree = 0;
  std::uint64_t degree_end = dim_poly(p.d, 0);
  double log_a = 0.5 * log_tail_sum(p.d, 0, p.r);
  double log_alpha_tilde = 0.0;

  double log_a_sum = 0.0;
  double log_alpha_tilde_sum = 0.0;
  std::uint64_t beta_sum = 0;

  for (std::uint64_t n = 1; n <= n_max; ++n) {
    if (n > degree_end) {
      ++degree;
      try {
        degree_end = dim_poly(p.d, degree);
      } catch (const std::overflow_error&) {
        degree_end = std::numeric_limits<std::uint64_t>::max();
      }
      log_a = 0.5 * log_tail_sum(p.d, degree, p.r);
      log_alpha_tilde = log_dim_poly(p.d - 1, degree);
    }
    log_a_sum += log_a;
    log_alpha_tilde_sum += log_alpha_tilde;
    beta_sum += static_cast<std::uint64_t>(degree);

    const double nn = static_cast<double>(n);
    BoundRow row;
    row.n = n;
    row.approx_number = std::exp(log_a);
    row.geommean_weyl = std::exp(log_w + log_a_sum / nn);
    row.alpha_tilde = std::exp(log_alpha_tilde);
    row.beta_tilde = degree;
    row.alpha = std::exp(log_alpha_tilde_sum / (2.0 * nn));
    row.beta = static_cast<double>(beta_sum / n) + static_cast<double>(beta_sum % n) / nn;
    row.chain = std::exp(log_w + std::log(row.alpha) + row.beta * log_r + log_norm);
    row.explicit_general = eigenvalue_bound_explicit(n, p);
    row.best = row.explicit_general;
    row.best_source = BoundKind::explicit_general;
    if (p.d == 1) {
      row.explicit_d1 = eigenvalue_bound_d1(n, p.r, p.W);
      if (row.explicit_d1 < row.best) {
        row.best = row.explicit_d1;
        row.best_source = BoundKind::explicit_d1;
      }
    }
    if (row.geommean_weyl < row.best) {
      row.best = row.geommean_weyl;
      row.best_source = BoundKind::geommean_weyl;
    }
    rows.push_back(row);
  }
  return rows;
}

BoundSequence bound_sequence(BoundKind kind, std::uint64_t n_max, const BoundParams& p) {
  if (kind == BoundKind::explicit_d1 && p.d != 1) {
    throw ConfigError("params.d", "the one-dimensional bound requires d == 1");
  }
  BoundSequence seq{p, kind, {}};
  seq.values.reserve(n_max);
  for (const BoundRow& row : bound_table(n_max, p)) {
    switch (kind) {
      case BoundKind::explicit_general: seq.values.push_back(row.explicit_general); break;
      case BoundKind::explicit_d1: seq.values.push_back(row.explicit_d1); break;
      case BoundKind::geommean_weyl: seq.values.push_back(row.geommean_weyl); break;
      case BoundKind::approx_number: seq.values.push_back(row.approx_number); break;
    }
  }
  seq.validate();
  return seq;
}

}  // namespace hspec
