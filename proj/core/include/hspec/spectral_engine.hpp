#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "hspec/galerkin_assembly.hpp"

namespace hspec {

/// Eigenvalues sorted by decreasing modulus with singular values and a noise
/// floor below which eigenvalues are not trusted.
struct SpectrumReport {
  std::vector<Complex> eigenvalues;
  std::vector<double> singular_values;  // descending
  double significance_floor = 0.0;

  bool significant(std::size_t i) const { return std::abs(eigenvalues.at(i)) > significance_floor; }
};

/// Decreasing modulus; moduli equal up to a few ulps are ordered by ascending
/// argument in (-pi, pi], then by input position.
std::vector<Complex> sort_by_modulus(const std::vector<Complex>& values);

SpectrumReport eigenvalues(const Eigen::MatrixXcd& matrix);
SpectrumReport eigenvalues(const GalerkinMatrix& matrix);

struct WeylRow {
  std::size_t n = 0;
  double lhs = 0.0;  // sum_{k<=n} log |lambda_k|
  double rhs = 0.0;  // sum_{k<=n} log s_k
  bool pass = false;
};

/// Weyl's product inequality on the truncated matrix, in log space with
/// tolerance 1e-9.
std::vector<WeylRow> weyl_check(const Eigen::MatrixXcd& matrix, std::size_t n_max);
std::vector<WeylRow> weyl_check(const GalerkinMatrix& matrix, std::size_t n_max);

/// ||A v - lambda v|| / ||v||.
double eigen_residual(const Eigen::MatrixXcd& matrix, Complex lambda, const Eigen::VectorXcd& v);

struct ConvergenceStudy {
  std::vector<std::size_t> sizes;
  std::vector<SpectrumReport> spectra;
  /// deltas[i][n] = |lambda_{n+1}(sizes[i]) - lambda_{n+1}(sizes[i+1])|.
  std::vector<std::vector<double>> deltas;
  double stability_tolerance = 1e-8;

  /// Index n (0-based) is stable when its delta between the last two sizes is
  /// within the tolerance.
  bool stable(std::size_t n) const;
  std::size_t stable_prefix() const;
};

/// Assembles at each size with M and N_b scaled in proportion to N (M keeps
/// its max(8N, 256) default when unset).
ConvergenceStudy convergence_study(const BranchFamily& family, const std::vector<std::size_t>& sizes,
                                   const AssemblyOptions& base, const AssemblyConstants& constants);

}  // namespace hspec
