#include "hspec/commands.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "hspec/error.hpp"

namespace hspec {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void require_d1(const ResolvedParams& resolved) {
  if (resolved.params.d != 1) {
    throw ConfigError("operator", "spectra are computed for d = 1 operators only");
  }
}

}  // namespace

BoundsResult cmd_bounds(const RunConfig& config) {
  config.validate();
  BoundsResult out;
  out.resolved = resolve_params(config);
  out.rows = bound_table(config.n_max, out.resolved.params);
  return out;
}

std::vector<SpectrumRow> spectrum_rows(const SpectrumReport& report, const BoundParams& params) {
  std::vector<SpectrumRow> rows;
  rows.reserve(report.eigenvalues.size());
  for (std::size_t i = 0; i < report.eigenvalues.size(); ++i) {
    SpectrumRow row;
    row.n = i + 1;
    row.lambda = report.eigenvalues[i];
    row.modulus = std::abs(row.lambda);
    row.bound_explicit = eigenvalue_bound_explicit(row.n, params);
    row.bound_d1 = params.d == 1 ? eigenvalue_bound_d1(row.n, params.r, params.W)
                                 : std::numeric_limits<double>::quiet_NaN();
    const double bound = params.d == 1 ? row.bound_d1 : row.bound_explicit;
    row.pass = row.modulus <= bound * (1.0 + kBoundTolerance);
    row.significant = report.significant(i);
    rows.push_back(row);
  }
  return rows;
}

SpectrumResult cmd_spectrum(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  const BranchFamily family = build_family(config);
  SpectrumResult out;
  out.resolved = resolve_params(config, family);
  require_d1(out.resolved);
  const AssemblyConstants constants{out.resolved.params.r, out.resolved.params.W};
  out.matrix = assemble(family, assembly_options(config), constants);
  out.report = eigenvalues(out.matrix);
  out.rows = spectrum_rows(out.report, out.resolved.params);
  out.seconds = seconds_since(start);
  return out;
}

VerifyResult verify_spectrum(const SpectrumReport& report, const std::vector<double>& deltas,
                             const BoundParams& params, double stability_tolerance) {
  if (params.d != 1) throw ConfigError("params.d", "verification uses the one-dimensional bound");
  VerifyResult out;
  out.resolved.params = params;
  for (const SpectrumRow& s : spectrum_rows(report, params)) {
    VerifyRow row;
    row.spectrum = s;
    const std::size_t i = s.n - 1;
    row.delta = i < deltas.size() ? deltas[i] : std::numeric_limits<double>::infinity();
    row.stable = row.delta <= stability_tolerance;
    if (!s.significant) {
      ++out.summary.skipped_insignificant;
    } else if (!row.stable) {
      ++out.summary.skipped_unstable;
    } else {
      row.checked = true;
      ++out.summary.checked;
      if (s.pass) {
        ++out.summary.passed;
      } else {
        out.summary.failures.push_back(s.n);
      }
    }
    out.rows.push_back(row);
  }
  return out;
}

VerifyResult cmd_verify(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  const BranchFamily family = build_family(config);
  const ResolvedParams resolved = resolve_params(config, family);
  require_d1(resolved);
  const AssemblyConstants constants{resolved.params.r, resolved.params.W};
  const std::size_t N = config.numerics.N;
  const ConvergenceStudy study = convergence_study(family, {N, 2 * N}, assembly_options(config), constants);
  VerifyResult out = verify_spectrum(study.spectra.front(), study.deltas.front(), resolved.params,
                                     study.stability_tolerance);
  out.resolved = resolved;
  out.seconds = seconds_since(start);
  return out;
}

ConvergeResult cmd_converge(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  const BranchFamily family = build_family(config);
  ConvergeResult out;
  out.resolved = resolve_params(config, family);
  require_d1(out.resolved);
  std::vector<std::size_t> sizes = config.numerics.sizes;
  if (sizes.empty()) sizes = {config.numerics.N, 2 * config.numerics.N};
  out.study = convergence_study(family, sizes, assembly_options(config),
                                AssemblyConstants{out.resolved.params.r, out.resolved.params.W});
  out.seconds = seconds_since(start);
  return out;
}

}  // namespace hspec
