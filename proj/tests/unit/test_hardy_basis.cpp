#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "hspec/hardy_basis.hpp"

using namespace hspec;

namespace {

std::vector<Complex> random_point(std::mt19937_64& rng, int d, double radius) {
  std::normal_distribution<double> g;
  std::vector<Complex> z(static_cast<std::size_t>(d));
  for (auto& c : z) c = {g(rng), g(rng)};
  const double n = euclidean_norm(z);
  for (auto& c : z) c *= radius / n;
  return z;
}

}  // namespace

TEST_CASE("dim_poly small values") {
  CHECK(dim_poly(1, 5) == 6);
  CHECK(dim_poly(2, 3) == 10);
  CHECK(dim_poly(3, 0) == 1);
  CHECK(dim_poly(4, -1) == 0);
  CHECK(dim_poly(5, 10) == 3003);
}

TEST_CASE("dim_poly reports overflow") {
  CHECK(dim_poly(10, 90) == 17310309456440ULL);
  CHECK(dim_poly(2, 6000000000LL) == 18000000009000000001ULL);
  CHECK_THROWS_AS(dim_poly(30, 1000000), std::overflow_error);
  CHECK_THROWS(dim_poly(0, 3));
  CHECK_THROWS(dim_poly(2, -2));
}

TEST_CASE("degree_bracket") {
  CHECK(degree_bracket(1, 1) == 0);
  CHECK(degree_bracket(2, 4) == 2);
  // h_3(3) = 20 < 21 <= h_3(4) = 35
  CHECK(degree_bracket(3, 21) == 4);
  CHECK(degree_bracket(3, 20) == 3);
  CHECK_THROWS(degree_bracket(2, 0));
}

TEST_CASE("degree_bracket inverts dim_poly") {
  for (int d = 1; d <= 5; ++d) {
    for (long long k = 0; k <= 20; ++k) {
      const std::uint64_t h = dim_poly(d, k);
      CHECK(degree_bracket(d, h) == k);
      CHECK(degree_bracket(d, h + 1) == k + 1);
    }
  }
}

TEST_CASE("enumerate_multiindices order and size") {
  const auto one = enumerate_multiindices(1, 3);
  REQUIRE(one.size() == 4);
  for (unsigned i = 0; i < 4; ++i) CHECK(one[i][0] == i);

  const auto two = enumerate_multiindices(2, 1);
  REQUIRE(two.size() == 3);
  CHECK(two[0] == MultiIndex({0, 0}));
  CHECK(two[1] == MultiIndex({1, 0}));
  CHECK(two[2] == MultiIndex({0, 1}));
  CHECK(enumerate_multiindices(2, 2).size() == 6);
}

TEST_CASE("partition identity") {
  for (int d = 1; d <= 4; ++d) {
    const auto all = enumerate_multiindices(d, 30);
    CHECK(all.size() == dim_poly(d, 30));
    std::vector<std::uint64_t> per_degree(31, 0);
    unsigned last = 0;
    for (const auto& m : all) {
      CHECK(m.degree() >= last);
      last = m.degree();
      ++per_degree[m.degree()];
    }
    std::uint64_t running = 0;
    for (long long k = 0; k <= 30; ++k) {
      running += per_degree[static_cast<std::size_t>(k)];
      CHECK(running == dim_poly(d, k));
    }
  }
}

TEST_CASE("MultiIndex caches its degree") {
  const MultiIndex m({3, 0, 4});
  CHECK(m.dimension() == 3);
  CHECK(m.degree() == 7);
  CHECK_THROWS(MultiIndex({}));
}

TEST_CASE("basis_norm_const") {
  CHECK(basis_norm_const(MultiIndex({7})) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(basis_norm_const(MultiIndex({1, 1})) == doctest::Approx(2.449489742783178).epsilon(1e-14));
  CHECK(basis_norm_const(MultiIndex({2, 0, 0})) == doctest::Approx(std::sqrt(6.0)).epsilon(1e-14));
  // (500+1)!/(1! 250! 250!) = 501 * C(500, 250), reference from exact integer arithmetic
  const double ref = std::exp(0.5 * (std::log(501.0) + 343.23999487845015));
  CHECK(basis_norm_const(MultiIndex({250, 250})) == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("eval_basis") {
  const std::vector<Complex> z{{0.3, 0.0}, {0.0, 0.2}};
  CHECK(std::abs(eval_basis(MultiIndex({0, 0}), z) - Complex{1.0}) < 1e-15);
  const std::vector<Complex> half{Complex{0.5}};
  CHECK(std::abs(eval_basis(MultiIndex({2}), half) - Complex{0.25}) < 1e-15);
  const Complex expect = std::sqrt(6.0) * Complex{0.0, 0.06};
  CHECK(std::abs(eval_basis(MultiIndex({1, 1}), z) - expect) < 1e-15);
}

TEST_CASE("reproducing_kernel") {
  const std::vector<Complex> zero3(3, Complex{0.0});
  CHECK(std::abs(reproducing_kernel(zero3, zero3) - Complex{1.0}) < 1e-15);
  const std::vector<Complex> h{Complex{0.5}};
  CHECK(std::abs(reproducing_kernel(h, h) - Complex{4.0 / 3.0}) < 1e-15);
  const std::vector<Complex> h2{Complex{0.5}, Complex{0.0}};
  CHECK(std::abs(reproducing_kernel(h2, h2) - Complex{16.0 / 9.0}) < 1e-14);
  const std::vector<Complex> out{Complex{1.0}};
  CHECK_THROWS_AS(reproducing_kernel(out, h), std::domain_error);
}

TEST_CASE("kernel expansion converges within the tail bound") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.05, 0.6);
  for (int d = 1; d <= 3; ++d) {
    const unsigned K = 40;
    const auto basis = enumerate_multiindices(d, K);
    for (int trial = 0; trial < 20; ++trial) {
      const auto z = random_point(rng, d, u(rng));
      const double nz = euclidean_norm(z);
      const double kernel = std::real(reproducing_kernel(z, z));
      double partial = 0.0;
      for (const auto& m : basis) partial += std::norm(eval_basis(m, z));
      const double tail = (d == 1 ? 1.0 : static_cast<double>(dim_poly(d - 1, K + 1))) * std::pow(nz, 2.0 * (K + 1)) /
                          std::pow(1.0 - nz * nz, d);
      CHECK(partial <= kernel * (1.0 + 1e-13));
      CHECK(kernel - partial <= tail + 1e-13 * kernel);
    }
  }
}

TEST_CASE("multinomial identity bound") {
  std::mt19937_64 rng(7);
  for (int d = 1; d <= 3; ++d) {
    for (unsigned l = 0; l <= 40; l += 5) {
      const auto all = enumerate_multiindices(d, l);
      for (double rho : {0.3, 0.6, 0.9}) {
        const auto z = random_point(rng, d, rho);
        double lhs = 0.0;
        for (const auto& m : all) {
          if (m.degree() != l) continue;
          double term = 0.0;
          for (int i = 0; i < d; ++i) {
            const unsigned e = m[static_cast<std::size_t>(i)];
            term += 2.0 * e * std::log(std::abs(z[static_cast<std::size_t>(i)])) - std::lgamma(e + 1.0);
          }
          lhs += std::exp(term);
        }
        const double rhs = std::exp(2.0 * l * std::log(rho) - std::lgamma(l + 1.0));
        CHECK(lhs <= rhs * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("BallGeometry normalization round trip") {
  BallGeometry g;
  g.center = {Complex{1.0}};
  g.radius = 1.5;
  g.contraction_ratio = 2.0 / 3.0;
  g.validate();
  const Complex z{0.2, -0.7};
  CHECK(std::abs(g.denormalize(g.normalize(z)) - z) < 1e-15);
  BallGeometry bad = g;
  bad.contraction_ratio = 1.0;
  CHECK_THROWS(bad.validate());
  bad = g;
  bad.radius = 0.0;
  CHECK_THROWS(bad.validate());
}
