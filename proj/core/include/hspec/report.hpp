#pragma once

#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "hspec/commands.hpp"

namespace hspec {

inline constexpr const char* kReportVersion = "hspec-report/1";

/// Shared `meta` block: report version, config hash and wall-clock timings.
nlohmann::json report_meta(const RunConfig& config, double seconds);

nlohmann::json bounds_to_json(const BoundsResult& result, const RunConfig& config);
void write_bounds_csv(std::ostream& out, const BoundsResult& result);

nlohmann::json spectrum_to_json(const SpectrumResult& result, const RunConfig& config);
/// Columns: n, re, im, modulus, bound_d1, bound_explicit, pass, significant.
void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumRow>& rows);

nlohmann::json verify_to_json(const VerifyResult& result, const RunConfig& config);
void write_verify_csv(std::ostream& out, const VerifyResult& result);

nlohmann::json convergence_to_json(const ConvergeResult& result, const RunConfig& config);
void write_convergence_csv(std::ostream& out, const ConvergeResult& result);

/// Columns: j, k, re, im.
void write_matrix_csv(std::ostream& out, const GalerkinMatrix& matrix);
nlohmann::json matrix_meta_json(const GalerkinMatrix& matrix);
/// {"meta": ..., "entries": [[ [re, im], ... ], ...]} with entries[j][k].
nlohmann::json matrix_to_json(const GalerkinMatrix& matrix);

}  // namespace hspec
