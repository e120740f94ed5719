#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hspec/error.hpp"
#include "hspec/operator_model.hpp"

using namespace hspec;

namespace {

BallGeometry unit_disc() {
  BallGeometry g;
  g.center = {Complex{0.0}};
  g.radius = 1.0;
  return g;
}

std::vector<Complex> gauss_points(std::size_t count) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Complex> out;
  for (std::size_t i = 0; i < count; ++i) {
    const double rad = 1.4 * std::sqrt(u(rng));
    out.push_back(1.0 + std::polar(rad, 2.0 * std::numbers::pi * u(rng)));
  }
  return out;
}

}  // namespace

TEST_CASE("Gauss model constants") {
  const BranchFamily g = make_gauss_model();
  CHECK(g.infinite());
  const WEstimate W = estimate_W(g, 1024, 10000);
  CHECK(W.certified);
  CHECK(W.value == doctest::Approx(std::numbers::pi * std::numbers::pi / 2.0).epsilon(1e-15));
  const REstimate r = estimate_r(g, 1024, 10000);
  CHECK(r.certified);
  CHECK(std::abs(r.value - 2.0 / 3.0) < 1e-15);
  CHECK(r.margin == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("Gauss W by boundary sampling") {
  const BranchFamily g = make_gauss_model();
  const WEstimate W = estimate_W(g, 4096, 20000, false);
  CHECK_FALSE(W.certified);
  CHECK(W.samples == 4096);
  CHECK(W.tail_bound > 0.0);
  // sampled value plus the tail majorant can only overshoot the true sup
  CHECK(W.value >= std::numbers::pi * std::numbers::pi / 2.0 - 1e-9);
  CHECK(std::abs(W.value - std::numbers::pi * std::numbers::pi / 2.0) < 1e-3);
}

TEST_CASE("Gauss r by boundary sampling") {
  const REstimate r = estimate_r(make_gauss_model(), 4096, 20000, false);
  CHECK_FALSE(r.certified);
  CHECK(r.value >= 2.0 / 3.0 - 1e-6);
  CHECK(r.value < 0.7);
}

TEST_CASE("W for simple finite families") {
  const BranchFamily c = make_affine_family(unit_disc(), {{Complex{0.0, -3.5}, Complex{0.5}, {}}});
  CHECK(estimate_W(c, 256, 1).value == doctest::Approx(3.5));
  CHECK(estimate_W(c, 256, 1, false).value == doctest::Approx(3.5));

  // max over |z| = 1 of |z| + |1 - z| is 3, attained at z = -1
  const BranchFamily two = make_expression_family(unit_disc(), {{"z", {"z/2"}, 1.0}, {"1 - z", {"z/3"}, 2.0}});
  const WEstimate W = estimate_W(two, 100000, 2);
  CHECK_FALSE(W.certified);
  CHECK(W.value == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("r for simple finite families") {
  const BranchFamily half = make_affine_family(unit_disc(), {{Complex{1.0}, Complex{0.5}, {}}});
  CHECK(estimate_r(half, 256, 1).value == doctest::Approx(0.5));
  CHECK(estimate_r(half, 256, 1, false).value == doctest::Approx(0.5));

  const BranchFamily third = make_expression_family(unit_disc(), {{"1", {"(z+1)/3"}, 1.0}});
  const REstimate r = estimate_r(third, 4096, 1);
  CHECK(r.value == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(r.worst_branch == 1);

  const BranchFamily affine3 = make_affine_family(unit_disc(), {{Complex{1.0}, Complex{1.0 / 3.0}, {Complex{1.0 / 3.0}}}});
  CHECK(estimate_r(affine3, 256, 1).value == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("r >= 1 is a hypothesis violation") {
  const BranchFamily id = make_expression_family(unit_disc(), {{"1", {"z"}, 1.0}});
  CHECK_THROWS_AS(estimate_r(id, 256, 1), HypothesisError);
  try {
    estimate_r(id, 256, 1);
  } catch (const HypothesisError& e) {
    CHECK(std::string(e.what()).find("branch 1") != std::string::npos);
  }
}

TEST_CASE("apply_operator examples") {
  const BranchFamily half = make_affine_family(unit_disc(), {{Complex{1.0}, Complex{0.5}, {}}});
  const auto sq = apply_operator(half, [](std::span<const Complex> w) { return w[0] * w[0]; }, Complex{0.8}, 1, 1.0);
  CHECK(std::abs(sq.value - Complex{0.16}) < 1e-15);
  CHECK(sq.tail_error == 0.0);

  const BranchFamily g = make_gauss_model();
  const Complex z{0.3, 0.2};
  const auto one = apply_operator(g, [](std::span<const Complex>) { return Complex{1.0}; }, z, 500, 1.0);
  Complex direct{0.0};
  for (int n = 1; n <= 500; ++n) direct += 1.0 / ((static_cast<double>(n) + z) * (static_cast<double>(n) + z));
  CHECK(std::abs(one.value - direct) < 1e-14);
  CHECK(one.tail_error == doctest::Approx(g.tail_weight_bound(500)));
}

TEST_CASE("Gauss operator fixes 1/(1+w) up to the omitted tail") {
  const BranchFamily g = make_gauss_model();
  const TestFunction f = [](std::span<const Complex> w) { return 1.0 / (1.0 + w[0]); };
  // telescoping: sum_{n >= 1} 1/((n+1)(n+2)) = 1/2
  const auto at1 = apply_operator(g, f, Complex{1.0}, 10000, 2.0);
  CHECK(std::abs(at1.value - 0.5) <= at1.tail_error);
  CHECK(std::abs(at1.value - 0.5) < 1e-4);

  std::vector<Complex> taylor(12);
  for (std::size_t j = 0; j < taylor.size(); ++j) taylor[j] = (j % 2 == 0) ? 1.0 : -1.0;
  for (const Complex z : gauss_points(20)) {
    const auto plain = apply_operator(g, f, z, 10000, 2.0);
    CHECK(std::abs(plain.value - 1.0 / (1.0 + z)) <= plain.tail_error);
    const auto series = apply_operator_series(g, f, taylor, z, 10000, 2.0);
    CHECK(std::abs(series.value - 1.0 / (1.0 + z)) < 1e-6);
    CHECK(std::abs(series.value - 1.0 / (1.0 + z)) < 1e-12);
  }
}

TEST_CASE("apply_operator is linear") {
  const BranchFamily g = make_gauss_model();
  const TestFunction f = [](std::span<const Complex> w) { return std::exp(w[0]); };
  const TestFunction h = [](std::span<const Complex> w) { return w[0] * w[0] * w[0]; };
  const Complex a{0.7, -1.1};
  const Complex b{-2.0, 0.25};
  const TestFunction mix = [&](std::span<const Complex> w) { return a * f(w) + b * h(w); };
  for (const Complex z : gauss_points(10)) {
    const Complex lf = apply_operator(g, f, z, 2000, 3.0).value;
    const Complex lh = apply_operator(g, h, z, 2000, 1.0).value;
    const Complex lm = apply_operator(g, mix, z, 2000, 5.0).value;
    CHECK(std::abs(lm - (a * lf + b * lh)) < 1e-12);
  }
}

TEST_CASE("tail consistency") {
  const BranchFamily g = make_gauss_model();
  const TestFunction f = [](std::span<const Complex> w) { return 1.0 / (2.0 + w[0]); };
  const double f_sup = 1.0 / (2.0 - 1.0);
  for (const Complex z : gauss_points(5)) {
    for (std::size_t nb : {10u, 100u, 1000u}) {
      const auto v1 = apply_operator(g, f, z, nb, f_sup);
      const auto v2 = apply_operator(g, f, z, 2 * nb, f_sup);
      CHECK(v2.tail_error <= v1.tail_error);
      CHECK(std::abs(v2.value - v1.value) <= v1.tail_error * (1.0 + 1e-9));
    }
  }
  CHECK_NOTHROW(g.validate_tail(100));
}

TEST_CASE("mobius power families") {
  const BranchFamily m = make_mobius_power_family(3.0);
  const WEstimate W = estimate_W(m, 256, 100);
  CHECK(W.certified);
  // sum_n (n - 1/2)^{-3} = 7 zeta(3)
  CHECK(W.value == doctest::Approx(7.0 * 1.2020569031595942).epsilon(1e-13));
  const WEstimate sampled = estimate_W(m, 2048, 20000, false);
  CHECK(std::abs(sampled.value - W.value) < 1e-3);
  CHECK_THROWS_AS(make_mobius_power_family(1.0), ConfigError);
  CHECK_THROWS_AS(make_mobius_power_family(2.0, 0.0, 1.5), ConfigError);
}

TEST_CASE("boundary samples lie on the sphere") {
  BallGeometry g;
  g.dimension = 3;
  g.center = {Complex{1.0}, Complex{0.0, 1.0}, Complex{-2.0}};
  g.radius = 2.0;
  const auto pts = boundary_samples(g, 64);
  REQUIRE(pts.size() == 64);
  for (const auto& p : pts) {
    std::vector<Complex> u(3);
    g.normalize(p, u);
    CHECK(euclidean_norm(u) == doctest::Approx(1.0).epsilon(1e-14));
  }
  const auto circle = boundary_samples(make_gauss_model().geometry(), 8);
  CHECK(std::abs(circle[0][0] - Complex{2.5}) < 1e-15);
}

TEST_CASE("affine family in two dimensions") {
  BallGeometry g;
  g.dimension = 2;
  g.center = {Complex{0.0}, Complex{0.0}};
  g.radius = 1.0;
  const BranchFamily f = make_affine_family(g, {{Complex{0.5}, Complex{0.25}, {Complex{0.5}, Complex{0.0}}},
                                                {Complex{0.0, 1.0}, Complex{0.5}, {}}});
  CHECK(estimate_W(f, 256, 2).value == doctest::Approx(1.5));
  CHECK(estimate_r(f, 256, 2).value == doctest::Approx(0.75));
  CHECK(estimate_r(f, 4096, 2, false).value == doctest::Approx(0.75).epsilon(1e-3));
}
