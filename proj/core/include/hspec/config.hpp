#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hspec/bound_engine.hpp"
#include "hspec/galerkin_assembly.hpp"
#include "hspec/operator_model.hpp"

namespace hspec {

inline constexpr int kConfigSchemaVersion = 1;

struct OperatorSpec {
  std::string catalog;  // gauss | mobius_power | affine | expression
  double s = 2.0;       // mobius_power only
  std::vector<AffineBranchSpec> affine;
  std::vector<ExpressionBranchSpec> branches;

  friend bool operator==(const OperatorSpec&, const OperatorSpec&) = default;
};

struct GeometrySpec {
  int dimension = 1;
  std::vector<Complex> center;
  double radius = 1.0;

  friend bool operator==(const GeometrySpec&, const GeometrySpec&) = default;
};

/// Certified constants supplied by the user; they bypass estimation.
struct ParamsOverride {
  std::optional<int> d;
  std::optional<double> r;
  std::optional<double> W;

  friend bool operator==(const ParamsOverride&, const ParamsOverride&) = default;
};

struct NumericsSpec {
  std::size_t N = 60;
  std::optional<std::size_t> M;
  std::optional<double> rho;
  std::size_t branch_cut = 10000;
  std::vector<std::size_t> sizes;
  std::size_t estimate_samples = 4096;
  bool tail_correction = true;

  friend bool operator==(const NumericsSpec&, const NumericsSpec&) = default;
};

struct OutputSpec {
  std::string format = "csv";  // csv | json
  std::string path;            // empty: stdout

  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct RunConfig {
  int schema_version = kConfigSchemaVersion;
  std::optional<OperatorSpec> op;
  std::optional<GeometrySpec> geometry;
  ParamsOverride params;
  NumericsSpec numerics;
  OutputSpec output;
  std::uint64_t n_max = 50;

  /// Structural checks; throws ConfigError naming the offending field.
  void validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Strict parse: unknown keys and wrong types are rejected with ConfigError.
RunConfig parse_config(const nlohmann::json& document);
RunConfig load_config(const std::string& path);
nlohmann::json to_json(const RunConfig& config);

/// Built-in configurations ("gauss").
RunConfig preset_config(const std::string& name);

/// Parses "d=1,r=0.5,W=2" into the override block.
ParamsOverride parse_params_override(const std::string& text);

/// FNV-1a of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const RunConfig& config);

/// Operator family described by the config.
BranchFamily build_family(const RunConfig& config);

struct ResolvedParams {
  BoundParams params;
  std::string r_source;
  std::string W_source;
  bool certified = false;
};

/// (d, r, W) from overrides, registered closed forms or boundary sampling, in
/// that order of preference.
ResolvedParams resolve_params(const RunConfig& config);
ResolvedParams resolve_params(const RunConfig& config, const BranchFamily& family);

AssemblyOptions assembly_options(const RunConfig& config);

}  // namespace hspec
