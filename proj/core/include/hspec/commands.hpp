#pragma once

#include <cstddef>
#include <vector>

#include "hspec/bound_engine.hpp"
#include "hspec/config.hpp"
#include "hspec/galerkin_assembly.hpp"
#include "hspec/spectral_engine.hpp"

namespace hspec {

enum class ExitCode : int { ok = 0, config_error = 2, numerical_failure = 3, bound_violation = 4 };

/// Relative slack applied to every bound comparison.
inline constexpr double kBoundTolerance = 1e-9;

struct BoundsResult {
  ResolvedParams resolved;
  std::vector<BoundRow> rows;
};

BoundsResult cmd_bounds(const RunConfig& config);

struct SpectrumRow {
  std::size_t n = 0;
  Complex lambda{};
  double modulus = 0.0;
  double bound_d1 = 0.0;
  double bound_explicit = 0.0;
  bool pass = false;
  bool significant = false;
};

/// Joins eigenvalues with the bound displays for the same index.
std::vector<SpectrumRow> spectrum_rows(const SpectrumReport& report, const BoundParams& params);

struct SpectrumResult {
  ResolvedParams resolved;
  GalerkinMatrix matrix;
  SpectrumReport report;
  std::vector<SpectrumRow> rows;
  double seconds = 0.0;
};

SpectrumResult cmd_spectrum(const RunConfig& config);

struct VerifyRow {
  SpectrumRow spectrum;
  double delta = 0.0;  // change against the doubled truncation
  bool stable = false;
  bool checked = false;
};

struct VerifySummary {
  std::size_t checked = 0;
  std::size_t passed = 0;
  std::size_t skipped_insignificant = 0;
  std::size_t skipped_unstable = 0;
  std::vector<std::size_t> failures;  // indices n

  bool ok() const { return failures.empty(); }
};

struct VerifyResult {
  ResolvedParams resolved;
  std::vector<VerifyRow> rows;
  VerifySummary summary;
  double seconds = 0.0;
};

/// Bound compliance for a given spectrum: index n is checked when it is
/// significant and its delta is within `stability_tolerance`; it passes when
/// |lambda_n| <= bound_d1(n) (1 + 1e-9). This is the seam tests use to inject
/// eigenvalues.
VerifyResult verify_spectrum(const SpectrumReport& report, const std::vector<double>& deltas,
                             const BoundParams& params, double stability_tolerance = 1e-8);

/// Assembles at N and 2N and verifies the N spectrum.
VerifyResult cmd_verify(const RunConfig& config);

struct ConvergeResult {
  ResolvedParams resolved;
  ConvergenceStudy study;
  double seconds = 0.0;
};

/// Uses numerics.sizes, or (N, 2N) when none are configured.
ConvergeResult cmd_converge(const RunConfig& config);

}  // namespace hspec
