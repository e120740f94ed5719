#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hspec/config.hpp"
#include "hspec/error.hpp"

using namespace hspec;
using nlohmann::json;

namespace {

std::string field_of(const json& doc) {
  try {
    parse_config(doc).validate();
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_CASE("bundled configs load") {
  for (const char* name : {"gauss", "diagonal", "shift"}) {
    const RunConfig cfg = load_config(std::string(HSPEC_CONFIG_DIR) + "/" + name + ".json");
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.op.has_value());
  }
  const RunConfig gauss = load_config(std::string(HSPEC_CONFIG_DIR) + "/gauss.json");
  CHECK(gauss == preset_config("gauss"));
}

TEST_CASE("round trip through JSON") {
  RunConfig cfg = preset_config("gauss");
  cfg.params.W = 4.5;
  cfg.numerics.rho = 0.9;
  cfg.numerics.M = 1024;
  cfg.output.format = "json";
  CHECK(parse_config(to_json(cfg)) == cfg);
  CHECK(parse_config(json::parse(to_json(cfg).dump())) == cfg);

  RunConfig aff;
  aff.op = OperatorSpec{"affine", 2.0, {{Complex{1.0, -0.5}, Complex{0.25}, {Complex{0.1, 0.2}}}}, {}};
  aff.geometry = GeometrySpec{1, {Complex{0.0}}, 1.0};
  CHECK(parse_config(to_json(aff)) == aff);

  RunConfig ex;
  ex.op = OperatorSpec{"expression", 2.0, {}, {{"z", {"z/2"}, 1.0}}};
  ex.geometry = GeometrySpec{1, {Complex{0.0}}, 1.0};
  ex.numerics.sizes = {10, 20};
  CHECK(parse_config(to_json(ex)) == ex);
}

TEST_CASE("unknown keys are rejected with their path") {
  CHECK(field_of(json{{"schema_version", 1}, {"colour", 1}}) == "colour");
  CHECK(field_of(json{{"schema_version", 1}, {"numerics", {{"NN", 3}}}}) == "numerics.NN");
  CHECK(field_of(json{{"schema_version", 1}, {"operator", {{"catalog", "gauss"}, {"extra", 1}}}}) == "operator.extra");
}

TEST_CASE("field validation") {
  CHECK(field_of(json::object()) == "schema_version");
  CHECK(field_of(json{{"schema_version", 2}}) == "schema_version");
  CHECK(field_of(json{{"schema_version", 1}, {"params", {{"r", 1.5}}}}) == "params.r");
  CHECK(field_of(json{{"schema_version", 1}, {"params", {{"W", -1}}}}) == "params.W");
  CHECK(field_of(json{{"schema_version", 1}, {"numerics", {{"N", 1}}}}) == "numerics.N");
  CHECK(field_of(json{{"schema_version", 1}, {"numerics", {{"N", 10}, {"M", 20}}}}) == "numerics.M");
  CHECK(field_of(json{{"schema_version", 1}, {"numerics", {{"rho", 1.2}}}}) == "numerics.rho");
  CHECK(field_of(json{{"schema_version", 1}, {"numerics", {{"sizes", {20, 10}}}}}) == "numerics.sizes");
  CHECK(field_of(json{{"schema_version", 1}, {"output", {{"format", "xml"}}}}) == "output.format");
  CHECK(field_of(json{{"schema_version", 1}, {"operator", {{"catalog", "nope"}}}}) == "operator.catalog");
  CHECK(field_of(json{{"schema_version", 1}, {"operator", {{"catalog", "affine"}, {"branches", {{{"weight", 1}}}}}},
                      {"geometry", {{"radius", 1}}}}) == "operator.branches[0].scale");
  CHECK(field_of(json{{"schema_version", 1}, {"operator", {{"catalog", "expression"}, {"branches", {{{"weight", "z"}, {"map", "z/2"}}}}}}}) ==
        "geometry");
  CHECK(field_of(json{{"schema_version", 1}, {"operator", {{"catalog", "mobius_power"}, {"s", 1.0}}}}) == "operator.s");
}

TEST_CASE("complex values accept both spellings") {
  const json doc{{"schema_version", 1},
                 {"operator", {{"catalog", "affine"}, {"branches", {{{"weight", {{"re", 0.5}, {"im", -1}}}, {"scale", 0.5}}}}}},
                 {"geometry", {{"center", {0}}, {"radius", 1}}}};
  const RunConfig cfg = parse_config(doc);
  CHECK(cfg.op->affine[0].weight == Complex{0.5, -1.0});
  CHECK(cfg.op->affine[0].scale == Complex{0.5});
}

TEST_CASE("params override parsing") {
  const auto p = parse_params_override("d=1, r=0.6666666666666666,W=4.934802200544679");
  CHECK(p.d == 1);
  CHECK(*p.r == doctest::Approx(2.0 / 3.0));
  CHECK(*p.W == doctest::Approx(std::numbers::pi * std::numbers::pi / 2.0));
  CHECK_THROWS_AS(parse_params_override("q=1"), ConfigError);
  CHECK_THROWS_AS(parse_params_override("r=abc"), ConfigError);
  CHECK_THROWS_AS(parse_params_override("r"), ConfigError);
}

TEST_CASE("config hash is stable and sensitive") {
  const RunConfig a = preset_config("gauss");
  RunConfig b = a;
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.numerics.N = 61;
  CHECK(config_hash(a) != config_hash(b));
  CHECK_THROWS_AS(preset_config("lorenz"), ConfigError);
}

TEST_CASE("parameter resolution order") {
  RunConfig cfg = preset_config("gauss");
  auto res = resolve_params(cfg);
  CHECK(res.certified);
  CHECK(res.params.d == 1);
  CHECK(res.params.r == doctest::Approx(2.0 / 3.0));
  CHECK(res.params.W == doctest::Approx(std::numbers::pi * std::numbers::pi / 2.0));

  cfg.params.W = 10.0;
  res = resolve_params(cfg);
  CHECK(res.params.W == 10.0);
  CHECK(res.W_source == "user override");

  RunConfig bare;
  bare.params = {1, 0.5, 2.0};
  res = resolve_params(bare);
  CHECK(res.params.r == 0.5);
  bare.params.W.reset();
  CHECK_THROWS_AS(resolve_params(bare), ConfigError);

  RunConfig shift = load_config(std::string(HSPEC_CONFIG_DIR) + "/shift.json");
  res = resolve_params(shift);
  CHECK_FALSE(res.certified);
  CHECK(res.params.r == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(res.params.W == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("build_family and assembly options follow the config") {
  RunConfig cfg = preset_config("gauss");
  cfg.numerics.M = 512;
  cfg.numerics.rho = 0.8;
  const AssemblyOptions opts = assembly_options(cfg);
  CHECK(opts.size == 60);
  CHECK(opts.samples == 512);
  CHECK(opts.rho == 0.8);
  CHECK(opts.branch_cut == 10000);
  CHECK(build_family(cfg).name() == "gauss");
  RunConfig none;
  CHECK_THROWS_AS(build_family(none), ConfigError);
}
