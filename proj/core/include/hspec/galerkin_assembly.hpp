#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "hspec/operator_model.hpp"

namespace hspec {

struct AssemblyOptions {
  std::size_t size = 60;                 // N
  std::optional<double> rho;             // sampling radius, default (1 + r) / 2
  std::optional<std::size_t> samples;    // M, default max(8N, 256)
  std::size_t branch_cut = 10000;        // N_b
  bool tail_correction = true;           // use the family's moment hook when present
  unsigned threads = 0;                  // 0: HSPEC_THREADS or hardware concurrency

  std::size_t resolved_samples() const;
};

/// Certified constants the error metadata is expressed in.
struct AssemblyConstants {
  double r = 0.5;
  double W = 1.0;
};

/// Error metadata for one column k (the image of p_k).
struct ColumnError {
  double tail_bound = 0.0;      // tau(N_b) r^k: omitted branches, certified, before correction
  double tail_residual = 0.0;   // remaining tail error after the moment correction (estimate)
  double aliasing_bound = 0.0;  // W r^k rho^M / (1 - rho^M), certified
  double rounding = 0.0;        // floating-point estimate for the sampled values
};

struct GalerkinMeta {
  double rho = 0.0;
  std::size_t samples = 0;
  std::size_t branch_cut = 0;
  AssemblyConstants constants;
  bool tail_corrected = false;
  std::vector<ColumnError> columns;
  double seconds = 0.0;

  /// Error bound for entry (j, k): rho^{-j} (tail + rounding) + aliasing.
  double entry_error_bound(std::size_t j, std::size_t k) const;
};

/// Truncation of the operator to span{p_0, ..., p_{N-1}} in normalized
/// coordinates; entry (j, k) = <L p_k, p_j>.
struct GalerkinMatrix {
  Eigen::MatrixXcd entries;
  GalerkinMeta meta;

  std::size_t size() const { return static_cast<std::size_t>(entries.rows()); }
};

/// Samples L p_k on the circle |u| = rho (normalized coordinates) and reads
/// off Taylor coefficients by a discrete Fourier sum. d = 1 only.
GalerkinMatrix assemble(const BranchFamily& family, const AssemblyOptions& options,
                        const AssemblyConstants& constants);

/// Resolves (r, W) from closed forms or boundary sampling, then assembles.
GalerkinMatrix assemble(const BranchFamily& family, const AssemblyOptions& options);

struct ColumnDecayCheck {
  std::size_t k = 0;
  double norm = 0.0;
  double bound = 0.0;
  bool pass = false;
};

/// ||column k|| <= W r^k (1 + 1e-6) + recorded error terms.
std::vector<ColumnDecayCheck> check_column_decay(const GalerkinMatrix& matrix);

unsigned resolve_thread_count(unsigned requested);

}  // namespace hspec
