#include "hspec/report.hpp"

#include <cmath>
#include <cstdio>

namespace hspec {

using nlohmann::json;

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json params_json(const ResolvedParams& resolved) {
  return {{"d", resolved.params.d},
          {"r", resolved.params.r},
          {"W", resolved.params.W},
          {"r_source", resolved.r_source},
          {"W_source", resolved.W_source},
          {"certified", resolved.certified}};
}

json spectrum_row_json(const SpectrumRow& row) {
  return {{"n", row.n},
          {"re", row.lambda.real()},
          {"im", row.lambda.imag()},
          {"modulus", row.modulus},
          {"bound_d1", finite_or_null(row.bound_d1)},
          {"bound_explicit", row.bound_explicit},
          {"pass", row.pass},
          {"significant", row.significant}};
}

}  // namespace

json report_meta(const RunConfig& config, double seconds) {
  return {{"version", kReportVersion}, {"config_hash", config_hash(config)}, {"timings", {{"total_seconds", seconds}}}};
}

json bounds_to_json(const BoundsResult& result, const RunConfig& config) {
  json rows = json::array();
  for (const BoundRow& r : result.rows) {
    json row{{"n", r.n},
             {"explicit_general", r.explicit_general},
             {"geommean_weyl", r.geommean_weyl},
             {"approx_number", r.approx_number},
             {"chain", r.chain},
             {"best_bound", r.best},
             {"best_source", std::string(to_string(r.best_source))}};
    if (result.resolved.params.d == 1) row["explicit_d1"] = r.explicit_d1;
    rows.push_back(std::move(row));
  }
  return {{"meta", report_meta(config, 0.0)}, {"params", params_json(result.resolved)}, {"rows", std::move(rows)}};
}

void write_bounds_csv(std::ostream& out, const BoundsResult& result) {
  const bool d1 = result.resolved.params.d == 1;
  out << "n,explicit_general";
  if (d1) out << ",explicit_d1";
  out << ",geommean_weyl,approx_number,best_bound,best_source\n";
  for (const BoundRow& r : result.rows) {
    out << r.n << ',' << num(r.explicit_general);
    if (d1) out << ',' << num(r.explicit_d1);
    out << ',' << num(r.geommean_weyl) << ',' << num(r.approx_number) << ',' << num(r.best) << ','
        << to_string(r.best_source) << '\n';
  }
}

json spectrum_to_json(const SpectrumResult& result, const RunConfig& config) {
  json rows = json::array();
  for (const SpectrumRow& r : result.rows) rows.push_back(spectrum_row_json(r));
  json sv = result.report.singular_values;
  json meta = report_meta(config, result.seconds);
  meta["timings"]["assembly_seconds"] = result.matrix.meta.seconds;
  return {{"meta", std::move(meta)},
          {"params", params_json(result.resolved)},
          {"significance_floor", result.report.significance_floor},
          {"singular_values", std::move(sv)},
          {"assembly", matrix_meta_json(result.matrix)},
          {"rows", std::move(rows)}};
}

void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumRow>& rows) {
  out << "n,re,im,modulus,bound_d1,bound_explicit,pass,significant\n";
  for (const SpectrumRow& r : rows) {
    out << r.n << ',' << num(r.lambda.real()) << ',' << num(r.lambda.imag()) << ',' << num(r.modulus) << ','
        << num(r.bound_d1) << ',' << num(r.bound_explicit) << ',' << (r.pass ? 1 : 0) << ','
        << (r.significant ? 1 : 0) << '\n';
  }
}

json verify_to_json(const VerifyResult& result, const RunConfig& config) {
  json rows = json::array();
  for (const VerifyRow& r : result.rows) {
    json row = spectrum_row_json(r.spectrum);
    row["delta"] = finite_or_null(r.delta);
    row["stable"] = r.stable;
    row["checked"] = r.checked;
    rows.push_back(std::move(row));
  }
  const VerifySummary& s = result.summary;
  return {{"meta", report_meta(config, result.seconds)},
          {"params", params_json(result.resolved)},
          {"summary",
           {{"checked", s.checked},
            {"passed", s.passed},
            {"skipped_insignificant", s.skipped_insignificant},
            {"skipped_unstable", s.skipped_unstable},
            {"failures", s.failures}}},
          {"rows", std::move(rows)}};
}

void write_verify_csv(std::ostream& out, const VerifyResult& result) {
  out << "n,re,im,modulus,bound_d1,bound_explicit,pass,significant,delta,stable,checked\n";
  for (const VerifyRow& v : result.rows) {
    const SpectrumRow& r = v.spectrum;
    out << r.n << ',' << num(r.lambda.real()) << ',' << num(r.lambda.imag()) << ',' << num(r.modulus) << ','
        << num(r.bound_d1) << ',' << num(r.bound_explicit) << ',' << (r.pass ? 1 : 0) << ','
        << (r.significant ? 1 : 0) << ',' << num(v.delta) << ',' << (v.stable ? 1 : 0) << ','
        << (v.checked ? 1 : 0) << '\n';
  }
}

json convergence_to_json(const ConvergeResult& result, const RunConfig& config) {
  const ConvergenceStudy& st = result.study;
  json spectra = json::array();
  for (std::size_t i = 0; i < st.sizes.size(); ++i) {
    json values = json::array();
    for (const Complex& l : st.spectra[i].eigenvalues) values.push_back({l.real(), l.imag()});
    spectra.push_back({{"size", st.sizes[i]},
                       {"significance_floor", st.spectra[i].significance_floor},
                       {"eigenvalues", std::move(values)}});
  }
  json stable = json::array();
  const std::size_t count = st.deltas.empty() ? 0 : st.deltas.back().size();
  for (std::size_t n = 0; n < count; ++n) stable.push_back(st.stable(n));
  return {{"meta", report_meta(config, result.seconds)},
          {"params", params_json(result.resolved)},
          {"stability_tolerance", st.stability_tolerance},
          {"spectra", std::move(spectra)},
          {"deltas", st.deltas},
          {"stable", std::move(stable)}};
}

void write_convergence_csv(std::ostream& out, const ConvergeResult& result) {
  const ConvergenceStudy& st = result.study;
  out << "n";
  for (std::size_t size : st.sizes) out << ",re_N" << size << ",im_N" << size;
  for (std::size_t i = 0; i + 1 < st.sizes.size(); ++i) out << ",delta_" << st.sizes[i] << '_' << st.sizes[i + 1];
  out << ",stable\n";
  const std::size_t rows = st.spectra.front().eigenvalues.size();
  for (std::size_t n = 0; n < rows; ++n) {
    out << n + 1;
    for (const SpectrumReport& s : st.spectra) {
      out << ',' << num(s.eigenvalues[n].real()) << ',' << num(s.eigenvalues[n].imag());
    }
    for (const auto& d : st.deltas) out << ',' << (n < d.size() ? num(d[n]) : "");
    out << ',' << (st.stable(n) ? 1 : 0) << '\n';
  }
}

void write_matrix_csv(std::ostream& out, const GalerkinMatrix& matrix) {
  out << "j,k,re,im\n";
  for (Eigen::Index k = 0; k < matrix.entries.cols(); ++k) {
    for (Eigen::Index j = 0; j < matrix.entries.rows(); ++j) {
      const Complex v = matrix.entries(j, k);
      out << j << ',' << k << ',' << num(v.real()) << ',' << num(v.imag()) << '\n';
    }
  }
}

json matrix_meta_json(const GalerkinMatrix& matrix) {
  const GalerkinMeta& m = matrix.meta;
  json columns = json::array();
  for (const ColumnError& e : m.columns) {
    columns.push_back({{"tail_bound", e.tail_bound},
                       {"tail_residual", e.tail_residual},
                       {"aliasing_bound", e.aliasing_bound},
                       {"rounding", e.rounding}});
  }
  return {{"size", matrix.size()},
          {"rho", m.rho},
          {"samples", m.samples},
          {"branch_cut", m.branch_cut},
          {"r", m.constants.r},
          {"W", m.constants.W},
          {"tail_corrected", m.tail_corrected},
          {"columns", std::move(columns)}};
}

json matrix_to_json(const GalerkinMatrix& matrix) {
  json entries = json::array();
  for (Eigen::Index j = 0; j < matrix.entries.rows(); ++j) {
    json row = json::array();
    for (Eigen::Index k = 0; k < matrix.entries.cols(); ++k) {
      row.push_back({matrix.entries(j, k).real(), matrix.entries(j, k).imag()});
    }
    entries.push_back(std::move(row));
  }
  return {{"meta", matrix_meta_json(matrix)}, {"entries", std::move(entries)}};
}

}  // namespace hspec
