#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace hspec {

using Complex = std::complex<double>;

/// Exponent tuple (n_1, ..., n_d) of the monomial z^n = z_1^{n_1} ... z_d^{n_d}.
class MultiIndex {
 public:
  explicit MultiIndex(std::vector<unsigned> exponents);

  int dimension() const noexcept { return static_cast<int>(exponents_.size()); }
  unsigned degree() const noexcept { return degree_; }
  std::span<const unsigned> exponents() const noexcept { return exponents_; }
  unsigned operator[](std::size_t i) const { return exponents_[i]; }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<unsigned> exponents_;
  unsigned degree_ = 0;
};

/// A ball in C^d together with the contraction ratio of its concentric sub-ball.
/// All basis and kernel computations happen after mapping the ball onto B_1.
struct BallGeometry {
  int dimension = 1;
  std::vector<Complex> center{Complex{0.0}};
  double radius = 1.0;
  double contraction_ratio = 0.5;

  void validate() const;

  /// phi(z) = (z - center) / radius.
  void normalize(std::span<const Complex> z, std::span<Complex> out) const;
  void denormalize(std::span<const Complex> u, std::span<Complex> out) const;

  Complex normalize(Complex z) const { return (z - center[0]) / radius; }
  Complex denormalize(Complex u) const { return center[0] + radius * u; }
};

/// h_d(k) = binomial(k + d, d), the number of multi-indices in d variables of
/// degree at most k. h_d(-1) = 0. Throws std::overflow_error when the value
/// does not fit in 64 bits.
std::uint64_t dim_poly(int d, long long k);

/// Unique k >= 0 with h_d(k-1) < n <= h_d(k).
long long degree_bracket(int d, std::uint64_t n);

/// All multi-indices of degree <= max_degree in graded lexicographic order.
/// This is the basis order used for every matrix index.
std::vector<MultiIndex> enumerate_multiindices(int d, unsigned max_degree);

/// K_n = sqrt((|n| + d - 1)! / ((d - 1)! n!)), evaluated through lgamma.
double basis_norm_const(const MultiIndex& index);

/// p_n(z) = K_n z^n, the orthonormal monomial basis of H^2(B_1).
Complex eval_basis(const MultiIndex& index, std::span<const Complex> z);

/// K(z, zeta) = (1 - <z, zeta>)^{-d}; <z, zeta> = sum z_i conj(zeta_i).
/// Both points must lie strictly inside the unit ball.
Complex reproducing_kernel(std::span<const Complex> z, std::span<const Complex> zeta);

double euclidean_norm(std::span<const Complex> z);

}  // namespace hspec
