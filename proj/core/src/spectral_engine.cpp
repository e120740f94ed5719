#include "hspec/spectral_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "hspec/error.hpp"

namespace hspec {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTieUlps = 8.0;

std::vector<double> singular_values_of(const Eigen::MatrixXcd& matrix) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(matrix);
  const Eigen::VectorXd s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

// An exactly triangular matrix has its diagonal as spectrum. The Schur
// iteration would otherwise smear defective eigenvalues (a nilpotent shift
// comes back with |lambda| ~ eps^{1/N}).
bool is_triangular(const Eigen::MatrixXcd& m) {
  bool upper = true;
  bool lower = true;
  for (Eigen::Index k = 0; k < m.cols() && (upper || lower); ++k) {
    for (Eigen::Index j = 0; j < m.rows(); ++j) {
      if (m(j, k) == Complex{0.0}) continue;
      if (j > k) upper = false;
      if (j < k) lower = false;
    }
  }
  return upper || lower;
}

}  // namespace

std::vector<Complex> sort_by_modulus(const std::vector<Complex>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(values[a]) > std::abs(values[b]); });

  // Near-equal moduli form a cluster ordered by argument, then input position.
  std::vector<Complex> out;
  out.reserve(values.size());
  std::size_t begin = 0;
  while (begin < order.size()) {
    std::size_t end = begin + 1;
    while (end < order.size()) {
      const double prev = std::abs(values[order[end - 1]]);
      const double cur = std::abs(values[order[end]]);
      if (prev - cur > kTieUlps * kEps * prev) break;
      ++end;
    }
    std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(begin), order.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](std::size_t a, std::size_t b) {
                       const double arg_a = std::arg(values[a]);
                       const double arg_b = std::arg(values[b]);
                       if (arg_a != arg_b) return arg_a < arg_b;
                       return a < b;
                     });
    for (std::size_t i = begin; i < end; ++i) out.push_back(values[order[i]]);
    begin = end;
  }
  return out;
}

SpectrumReport eigenvalues(const Eigen::MatrixXcd& matrix) {
  if (matrix.rows() != matrix.cols()) throw std::invalid_argument("eigenvalues: matrix must be square");
  if (!matrix.allFinite()) throw NumericalError("eigenvalues: matrix has non-finite entries");

  Eigen::VectorXcd ev;
  if (is_triangular(matrix)) {
    ev = matrix.diagonal();
  } else {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(matrix, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
      throw NumericalError("eigenvalues: Schur iteration did not converge");
    }
    ev = solver.eigenvalues();
  }

  SpectrumReport report;
  report.eigenvalues = sort_by_modulus({ev.data(), ev.data() + ev.size()});
  report.singular_values = singular_values_of(matrix);

  double max_column = 0.0;
  for (Eigen::Index k = 0; k < matrix.cols(); ++k) max_column = std::max(max_column, matrix.col(k).norm());
  report.significance_floor = std::max(1e-12, kEps * static_cast<double>(matrix.rows()) * max_column);
  return report;
}

SpectrumReport eigenvalues(const GalerkinMatrix& matrix) { return eigenvalues(matrix.entries); }

std::vector<WeylRow> weyl_check(const Eigen::MatrixXcd& matrix, std::size_t n_max) {
  if (n_max > static_cast<std::size_t>(matrix.rows())) {
    throw std::invalid_argument("weyl_check: n_max exceeds the matrix size");
  }
  const SpectrumReport report = eigenvalues(matrix);
  std::vector<WeylRow> rows;
  double lhs = 0.0;
  double rhs = 0.0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    lhs += std::log(std::abs(report.eigenvalues[n - 1]));
    rhs += std::log(report.singular_values[n - 1]);
    rows.push_back({n, lhs, rhs, lhs <= rhs + 1e-9});
  }
  return rows;
}

std::vector<WeylRow> weyl_check(const GalerkinMatrix& matrix, std::size_t n_max) {
  return weyl_check(matrix.entries, n_max);
}

double eigen_residual(const Eigen::MatrixXcd& matrix, Complex lambda, const Eigen::VectorXcd& v) {
  return (matrix * v - lambda * v).norm() / v.norm();
}

bool ConvergenceStudy::stable(std::size_t n) const {
  if (deltas.empty()) return false;
  const std::vector<double>& last = deltas.back();
  return n < last.size() && last[n] <= stability_tolerance;
}

std::size_t ConvergenceStudy::stable_prefix() const {
  std::size_t n = 0;
  while (stable(n)) ++n;
  return n;
}

ConvergenceStudy convergence_study(const BranchFamily& family, const std::vector<std::size_t>& sizes,
                                   const AssemblyOptions& base, const AssemblyConstants& constants) {
  if (sizes.empty()) throw ConfigError("numerics.sizes", "at least one size is required");
  if (!std::is_sorted(sizes.begin(), sizes.end()) ||
      std::adjacent_find(sizes.begin(), sizes.end()) != sizes.end()) {
    throw ConfigError("numerics.sizes", "sizes must be strictly ascending");
  }
  ConvergenceStudy study;
  study.sizes = sizes;
  for (std::size_t size : sizes) {
    AssemblyOptions opts = base;
    opts.size = size;
    if (base.samples) opts.samples = *base.samples * size / sizes.front();
    opts.branch_cut = std::max<std::size_t>(1, base.branch_cut * size / sizes.front());
    study.spectra.push_back(eigenvalues(assemble(family, opts, constants)));
  }
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    const auto& a = study.spectra[i].eigenvalues;
    const auto& b = study.spectra[i + 1].eigenvalues;
    std::vector<double> row(std::min(a.size(), b.size()));
    for (std::size_t n = 0; n < row.size(); ++n) row[n] = std::abs(a[n] - b[n]);
    study.deltas.push_back(std::move(row));
  }
  return study;
}

}  // namespace hspec
