// hspec: eigenvalue bounds and Galerkin spectra of transfer operators.
//
//   hspec bounds   --params d=1,r=0.5,W=1 --n-max 20
//   hspec spectrum --preset gauss --size 60 --format json
//   hspec verify   --preset gauss
//   hspec converge --preset gauss --sizes 30,60,120
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 4 bound violation.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "hspec/commands.hpp"
#include "hspec/config.hpp"
#include "hspec/error.hpp"
#include "hspec/report.hpp"

namespace {

struct Options {
  std::string config_path;
  std::string preset;
  std::optional<std::uint64_t> n_max;
  std::optional<std::size_t> size;
  std::optional<std::size_t> branch_cut;
  std::string format;
  std::string out;
  std::string params;
  std::string sizes;
  std::string matrix_out;
};

hspec::RunConfig make_config(const Options& opts) {
  hspec::RunConfig cfg;
  if (!opts.config_path.empty() && !opts.preset.empty()) {
    throw hspec::ConfigError("--config", "cannot be combined with --preset");
  }
  if (!opts.config_path.empty()) cfg = hspec::load_config(opts.config_path);
  if (!opts.preset.empty()) cfg = hspec::preset_config(opts.preset);
  if (opts.n_max) cfg.n_max = *opts.n_max;
  if (opts.size) cfg.numerics.N = *opts.size;
  if (opts.branch_cut) cfg.numerics.branch_cut = *opts.branch_cut;
  if (!opts.format.empty()) cfg.output.format = opts.format;
  if (!opts.out.empty()) cfg.output.path = opts.out;
  if (!opts.params.empty()) {
    const hspec::ParamsOverride p = hspec::parse_params_override(opts.params);
    if (p.d) cfg.params.d = p.d;
    if (p.r) cfg.params.r = p.r;
    if (p.W) cfg.params.W = p.W;
  }
  if (!opts.sizes.empty()) {
    cfg.numerics.sizes.clear();
    std::stringstream ss(opts.sizes);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        cfg.numerics.sizes.push_back(std::stoul(item));
      } catch (const std::logic_error&) {
        throw hspec::ConfigError("--sizes", "cannot parse '" + item + "'");
      }
    }
  }
  cfg.validate();
  return cfg;
}

// Writes to the configured path, or stdout when none is set.
template <typename Fn>
void emit(const hspec::RunConfig& cfg, Fn&& write) {
  if (cfg.output.path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream file(cfg.output.path);
  if (!file) throw hspec::ConfigError("output.path", "cannot write '" + cfg.output.path + "'");
  write(file);
}

bool wants_json(const hspec::RunConfig& cfg) { return cfg.output.format == "json"; }

int run(const std::string& command, const Options& opts) {
  const hspec::RunConfig cfg = make_config(opts);

  if (command == "bounds") {
    const auto result = hspec::cmd_bounds(cfg);
    emit(cfg, [&](std::ostream& os) {
      if (wants_json(cfg)) {
        os << hspec::bounds_to_json(result, cfg).dump(2) << '\n';
      } else {
        hspec::write_bounds_csv(os, result);
      }
    });
    return 0;
  }

  if (command == "spectrum") {
    const auto result = hspec::cmd_spectrum(cfg);
    emit(cfg, [&](std::ostream& os) {
      if (wants_json(cfg)) {
        os << hspec::spectrum_to_json(result, cfg).dump(2) << '\n';
      } else {
        hspec::write_spectrum_csv(os, result.rows);
      }
    });
    if (!opts.matrix_out.empty()) {
      std::ofstream file(opts.matrix_out);
      if (!file) throw hspec::ConfigError("--matrix-out", "cannot write '" + opts.matrix_out + "'");
      if (opts.matrix_out.ends_with(".json")) {
        file << hspec::matrix_to_json(result.matrix).dump() << '\n';
      } else {
        hspec::write_matrix_csv(file, result.matrix);
      }
    }
    return 0;
  }

  if (command == "verify") {
    const auto result = hspec::cmd_verify(cfg);
    emit(cfg, [&](std::ostream& os) {
      if (wants_json(cfg)) {
        os << hspec::verify_to_json(result, cfg).dump(2) << '\n';
      } else {
        hspec::write_verify_csv(os, result);
      }
    });
    const auto& s = result.summary;
    std::cerr << "verify: checked=" << s.checked << " passed=" << s.passed
              << " skipped_insignificant=" << s.skipped_insignificant
              << " skipped_unstable=" << s.skipped_unstable << '\n';
    if (!s.ok()) {
      for (const auto& row : result.rows) {
        if (row.checked && !row.spectrum.pass) {
          std::cerr << "violation: n=" << row.spectrum.n << " |lambda|=" << row.spectrum.modulus
                    << " bound=" << row.spectrum.bound_d1 << '\n';
        }
      }
      return static_cast<int>(hspec::ExitCode::bound_violation);
    }
    return 0;
  }

  if (command == "converge") {
    const auto result = hspec::cmd_converge(cfg);
    emit(cfg, [&](std::ostream& os) {
      if (wants_json(cfg)) {
        os << hspec::convergence_to_json(result, cfg).dump(2) << '\n';
      } else {
        hspec::write_convergence_csv(os, result);
      }
    });
    return 0;
  }

  throw hspec::ConfigError("command", "unknown subcommand '" + command + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eigenvalue bounds and Galerkin spectra of transfer operators"};
  app.require_subcommand(1);
  Options opts;

  auto add_common = [&opts](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "JSON run configuration");
    sub->add_option("--preset", opts.preset, "Built-in configuration (gauss)");
    sub->add_option("--n-max", opts.n_max, "Largest index n in bound tables");
    sub->add_option("--size", opts.size, "Truncation size N");
    sub->add_option("--branch-cut", opts.branch_cut, "Number of branches summed explicitly (N_b)");
    sub->add_option("--format", opts.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", opts.out, "Output path (default: stdout)");
    sub->add_option("--params", opts.params, "Certified constants, e.g. d=1,r=0.6667,W=4.9348");
  };

  auto* bounds = app.add_subcommand("bounds", "Tabulate the eigenvalue bounds for n = 1..n_max");
  auto* spectrum = app.add_subcommand("spectrum", "Assemble the Galerkin matrix and report its spectrum");
  auto* verify = app.add_subcommand("verify", "Check computed eigenvalues against the bounds");
  auto* converge = app.add_subcommand("converge", "Eigenvalue deltas across truncation sizes");
  for (auto* sub : {bounds, spectrum, verify, converge}) add_common(sub);
  spectrum->add_option("--matrix-out", opts.matrix_out, "Write the matrix as CSV (or JSON for *.json)");
  converge->add_option("--sizes", opts.sizes, "Comma-separated ascending truncation sizes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(hspec::ExitCode::config_error);
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, opts);
  } catch (const hspec::ConfigError& e) {
    std::cerr << "hspec: configuration error: " << e.what() << '\n';
    return static_cast<int>(hspec::ExitCode::config_error);
  } catch (const hspec::HypothesisError& e) {
    std::cerr << "hspec: operator violates the hypotheses: " << e.what() << '\n';
    return static_cast<int>(hspec::ExitCode::config_error);
  } catch (const hspec::NumericalError& e) {
    std::cerr << "hspec: numerical failure: " << e.what() << '\n';
    return static_cast<int>(hspec::ExitCode::numerical_failure);
  } catch (const std::exception& e) {
    std::cerr << "hspec: numerical failure: " << e.what() << '\n';
    return static_cast<int>(hspec::ExitCode::numerical_failure);
  }
}
