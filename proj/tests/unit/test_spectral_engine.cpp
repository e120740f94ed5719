#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hspec/error.hpp"
#include "hspec/spectral_engine.hpp"

using namespace hspec;

namespace {

const AssemblyConstants kGauss{2.0 / 3.0, std::numbers::pi * std::numbers::pi / 2.0};

Eigen::MatrixXcd random_matrix(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) m(j, k) = {g(rng), g(rng)};
  }
  return m;
}

BallGeometry unit_disc() {
  BallGeometry g;
  g.center = {Complex{0.0}};
  g.radius = 1.0;
  return g;
}

}  // namespace

TEST_CASE("diagonal spectrum") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(6, 6);
  for (int k = 0; k < 6; ++k) m(k, k) = std::pow(0.5, 5 - k);
  const auto rep = eigenvalues(m);
  REQUIRE(rep.eigenvalues.size() == 6);
  for (int k = 0; k < 6; ++k) CHECK(rep.eigenvalues[static_cast<std::size_t>(k)] == Complex{std::pow(0.5, k)});
  CHECK(rep.singular_values[0] == doctest::Approx(1.0));
  CHECK(rep.significance_floor == 1e-12);
}

TEST_CASE("nilpotent shift has a zero spectrum") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(30, 30);
  for (int k = 0; k + 1 < 30; ++k) m(k + 1, k) = std::pow(0.5, k);
  const auto rep = eigenvalues(m);
  for (const Complex& l : rep.eigenvalues) CHECK(l == Complex{0.0});
  for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) CHECK_FALSE(rep.significant(i));
}

TEST_CASE("ordering by modulus then argument") {
  const std::vector<Complex> v{Complex{0.0, 1.0}, Complex{-1.0}, Complex{0.5}, Complex{1.0}, Complex{0.0, -1.0}};
  const auto s = sort_by_modulus(v);
  CHECK(s[0] == Complex{0.0, -1.0});
  CHECK(s[1] == Complex{1.0});
  CHECK(s[2] == Complex{0.0, 1.0});
  CHECK(s[3] == Complex{-1.0});
  CHECK(s[4] == Complex{0.5});
  CHECK(sort_by_modulus(s) == s);
}

TEST_CASE("random spectra are ordered and traces agree") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 10; ++t) {
    const Eigen::MatrixXcd m = random_matrix(rng, 12);
    const auto rep = eigenvalues(m);
    Complex sum{0.0};
    for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) {
      sum += rep.eigenvalues[i];
      if (i > 0) {
        CHECK(std::abs(rep.eigenvalues[i]) <= std::abs(rep.eigenvalues[i - 1]));
        CHECK(rep.singular_values[i] <= rep.singular_values[i - 1]);
      }
    }
    CHECK(std::abs(sum - m.trace()) <= 1e-9 * 12 * m.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("non-finite input is rejected") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(3, 3);
  m(1, 2) = Complex{std::nan(""), 0.0};
  CHECK_THROWS_AS(eigenvalues(m), NumericalError);
}

TEST_CASE("Weyl check on normal matrices is tight") {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXcd a = random_matrix(rng, 10);
  const Eigen::MatrixXcd h = a + a.adjoint();
  const auto rows = weyl_check(h, 10);
  for (const auto& row : rows) {
    CHECK(row.pass);
    CHECK(std::abs(row.lhs - row.rhs) < 1e-10);
  }
}

TEST_CASE("Weyl check on random matrices") {
  std::mt19937_64 rng(12345);
  for (int t = 0; t < 30; ++t) {
    const auto n = static_cast<Eigen::Index>(5 + t);
    for (const auto& row : weyl_check(random_matrix(rng, n), static_cast<std::size_t>(n))) CHECK(row.pass);
  }
  CHECK_THROWS(weyl_check(Eigen::MatrixXcd::Identity(3, 3), 4));
}

TEST_CASE("Gauss spectrum at N = 40") {
  AssemblyOptions opts;
  opts.size = 40;
  const GalerkinMatrix m = assemble(make_gauss_model(), opts, kGauss);
  const auto rep = eigenvalues(m);
  CHECK(std::abs(rep.eigenvalues[0] - 1.0) < 1e-10);
  CHECK(std::abs(rep.eigenvalues[1] - (-0.3036630028987)) < 1e-8);
  for (const auto& row : weyl_check(m, 40)) CHECK(row.pass);

  // 1/(1+w) in normalized coordinates u = (w - 1)/1.5 has coefficients (1/2)(-3/4)^j
  Eigen::VectorXcd v(40);
  for (int j = 0; j < 40; ++j) v(j) = 0.5 * std::pow(-0.75, j);
  CHECK(eigen_residual(m.entries, Complex{1.0}, v) < 1e-9);
}

TEST_CASE("convergence study") {
  const BranchFamily g = make_gauss_model();
  AssemblyOptions base;
  base.branch_cut = 5000;
  const auto study = convergence_study(g, {10, 20}, base, kGauss);
  REQUIRE(study.deltas.size() == 1);
  CHECK(study.deltas[0].size() == 10);
  // a 10 x 10 truncation carries |lambda_1 - 1| ~ 1e-4, so no index is stable to 1e-8 yet
  CHECK(study.deltas[0][0] > 1e-5);
  CHECK(study.deltas[0][0] < 1e-3);
  CHECK_FALSE(study.stable(0));

  const auto finer = convergence_study(g, {30, 60}, AssemblyOptions{}, kGauss);
  CHECK(finer.deltas[0][0] < 1e-10);
  // the 30 x 30 truncation itself moves lambda_2 by 1.87e-10
  CHECK(finer.deltas[0][1] < 1e-9);
  for (std::size_t n = 0; n < 5; ++n) CHECK(finer.stable(n));
  CHECK_FALSE(finer.stable(5));
  CHECK(finer.stable_prefix() == 5);

  const BranchFamily diag = make_affine_family(unit_disc(), {{Complex{1.0}, Complex{0.5}, {}}});
  const auto d = convergence_study(diag, {8, 16, 32}, AssemblyOptions{}, AssemblyConstants{0.5, 1.0});
  for (const auto& row : d.deltas) {
    for (double delta : row) CHECK(delta == 0.0);
  }
  CHECK_THROWS(convergence_study(g, {20, 10}, base, kGauss));
}
