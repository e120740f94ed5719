#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace hspec {

/// (d, r, W): dimension, contraction ratio of the branch images and the
/// supremum over the ball of sum_i |w_i|.
struct BoundParams {
  int d = 1;
  double r = 0.5;
  double W = 1.0;

  void validate() const;
};

enum class BoundKind { explicit_general, explicit_d1, geommean_weyl, approx_number };

std::string_view to_string(BoundKind kind);

struct BoundSequence {
  BoundParams params;
  BoundKind kind = BoundKind::explicit_general;
  std::vector<double> values;  // values[n - 1] for n = 1..N

  void validate() const;
};

/// sum_{l >= k} h_{d-1}(l) r^{2l}, never underestimated: the partial sum is
/// closed with the majorant h_{d-1}(L) r^{2L} / (1 - r^2)^d and padded by a
/// rounding allowance.
double tail_sum(int d, long long k, double r);
double log_tail_sum(int d, long long k, double r);

/// Upper bound for the n-th approximation number of H^2(B_1) -> H^inf(B_r):
/// sqrt(tail_sum(d, k, r)) with h_d(k-1) < n <= h_d(k).
double approx_number_bound(std::uint64_t n, int d, double r);
double log_approx_number_bound(std::uint64_t n, int d, double r);

struct SimplifiedApproxBound {
  double alpha_tilde = 1.0;  // h_{d-1}(k)
  long long beta_tilde = 0;  // k
};

/// a_n^2 <= alpha_tilde r^{2 beta_tilde} / (1 - r^2)^d.
SimplifiedApproxBound simplified_approx_bound(std::uint64_t n, int d);

struct ProofChainQuantities {
  double alpha = 1.0;  // prod_{l<=n} alpha_tilde_l^{1/(2n)}
  double beta = 0.0;   // (1/n) sum_{l<=n} beta_tilde_l
};

ProofChainQuantities proof_chain_quantities(std::uint64_t n, int d);

/// W (prod_{k<=n} a_k bound)^{1/n}, accumulated in log space.
double eigenvalue_bound_geommean(std::uint64_t n, const BoundParams& p);

/// W sqrt(d) / (r^d (1-r^2)^{d/2}) n^{(d-1)/(2d)} r^{(d/(d+1)) (d!)^{1/d} n^{1/d}}.
double eigenvalue_bound_explicit(std::uint64_t n, const BoundParams& p);
double log_eigenvalue_bound_explicit(std::uint64_t n, const BoundParams& p);

/// W (1 - r^2)^{-1/2} r^{(n-1)/2}; one-dimensional case.
double eigenvalue_bound_d1(std::uint64_t n, double r, double W);

/// W alpha_n r^{beta_n} / (1 - r^2)^{d/2}, the intermediate bound between the
/// geometric-mean and the explicit forms.
double eigenvalue_bound_chain(std::uint64_t n, const BoundParams& p);

/// One row of the bound table for a given n.
struct BoundRow {
  std::uint64_t n = 0;
  double approx_number = 0.0;
  double geommean_weyl = 0.0;
  double chain = 0.0;
  double explicit_general = 0.0;
  double explicit_d1 = 0.0;  // zero unless d == 1
  double alpha = 1.0;
  double beta = 0.0;
  double alpha_tilde = 1.0;
  long long beta_tilde = 0;
  double best = 0.0;  // min(explicit_general, geommean_weyl)
  BoundKind best_source = BoundKind::explicit_general;
};

/// All bounds for n = 1..n_max in one incremental pass (O(n_max) tail sums,
/// one per distinct degree).
std::vector<BoundRow> bound_table(std::uint64_t n_max, const BoundParams& p);

BoundSequence bound_sequence(BoundKind kind, std::uint64_t n_max, const BoundParams& p);

}  // namespace hspec
