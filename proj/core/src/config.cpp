#include "hspec/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "hspec/error.hpp"

namespace hspec {

using nlohmann::json;

namespace {

void reject_unknown(const json& object, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!object.is_object()) throw ConfigError(where, "expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& item : object.items()) {
    if (!keys.contains(item.key())) {
      throw ConfigError(where.empty() ? item.key() : where + "." + item.key(), "unknown key");
    }
  }
}

double get_number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigError(field, "expected a number");
  return v.get<double>();
}

std::size_t get_count(const json& v, const std::string& field) {
  if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError(field, "expected a non-negative integer");
  return v.get<std::size_t>();
}

Complex get_complex(const json& v, const std::string& field) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_object()) {
    reject_unknown(v, field, {"re", "im"});
    return {v.contains("re") ? get_number(v["re"], field + ".re") : 0.0,
            v.contains("im") ? get_number(v["im"], field + ".im") : 0.0};
  }
  throw ConfigError(field, "expected a number or {\"re\", \"im\"}");
}

json complex_to_json(Complex c) {
  if (c.imag() == 0.0) return c.real();
  return json{{"re", c.real()}, {"im", c.imag()}};
}

std::vector<Complex> get_point(const json& v, const std::string& field) {
  if (v.is_array()) {
    std::vector<Complex> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_complex(v[i], field + "[" + std::to_string(i) + "]"));
    return out;
  }
  return {get_complex(v, field)};
}

json point_to_json(const std::vector<Complex>& p) {
  json arr = json::array();
  for (const Complex& c : p) arr.push_back(complex_to_json(c));
  return arr;
}

OperatorSpec parse_operator(const json& v) {
  const std::string where = "operator";
  reject_unknown(v, where, {"catalog", "s", "branches"});
  if (!v.contains("catalog") || !v["catalog"].is_string()) throw ConfigError(where + ".catalog", "required string");
  OperatorSpec op;
  op.catalog = v["catalog"].get<std::string>();
  if (op.catalog == "gauss") {
    if (v.contains("s") || v.contains("branches")) throw ConfigError(where, "gauss takes no parameters");
  } else if (op.catalog == "mobius_power") {
    if (!v.contains("s")) throw ConfigError(where + ".s", "required for mobius_power");
    op.s = get_number(v["s"], where + ".s");
    if (v.contains("branches")) throw ConfigError(where + ".branches", "not used by mobius_power");
  } else if (op.catalog == "affine" || op.catalog == "expression") {
    if (v.contains("s")) throw ConfigError(where + ".s", "only used by mobius_power");
    if (!v.contains("branches") || !v["branches"].is_array() || v["branches"].empty()) {
      throw ConfigError(where + ".branches", "required non-empty array");
    }
    const json& list = v["branches"];
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string field = where + ".branches[" + std::to_string(i) + "]";
      const json& b = list[i];
      if (op.catalog == "affine") {
        reject_unknown(b, field, {"weight", "scale", "shift"});
        AffineBranchSpec spec;
        if (b.contains("weight")) spec.weight = get_complex(b["weight"], field + ".weight");
        if (!b.contains("scale")) throw ConfigError(field + ".scale", "required");
        spec.scale = get_complex(b["scale"], field + ".scale");
        if (b.contains("shift")) spec.shift = get_point(b["shift"], field + ".shift");
        op.affine.push_back(std::move(spec));
      } else {
        reject_unknown(b, field, {"weight", "map", "weight_sup"});
        ExpressionBranchSpec spec;
        if (!b.contains("weight") || !b["weight"].is_string()) throw ConfigError(field + ".weight", "required string");
        spec.weight = b["weight"].get<std::string>();
        if (!b.contains("map")) throw ConfigError(field + ".map", "required");
        if (b["map"].is_string()) {
          spec.map.push_back(b["map"].get<std::string>());
        } else if (b["map"].is_array()) {
          for (const json& m : b["map"]) {
            if (!m.is_string()) throw ConfigError(field + ".map", "expected strings");
            spec.map.push_back(m.get<std::string>());
          }
        } else {
          throw ConfigError(field + ".map", "expected a string or an array of strings");
        }
        if (b.contains("weight_sup")) spec.weight_sup = get_number(b["weight_sup"], field + ".weight_sup");
        op.branches.push_back(std::move(spec));
      }
    }
  } else {
    throw ConfigError(where + ".catalog", "unknown catalog entry '" + op.catalog + "'");
  }
  return op;
}

json operator_to_json(const OperatorSpec& op) {
  json out{{"catalog", op.catalog}};
  if (op.catalog == "mobius_power") out["s"] = op.s;
  if (op.catalog == "affine") {
    json list = json::array();
    for (const AffineBranchSpec& b : op.affine) {
      json item{{"weight", complex_to_json(b.weight)}, {"scale", complex_to_json(b.scale)}};
      if (!b.shift.empty()) item["shift"] = point_to_json(b.shift);
      list.push_back(std::move(item));
    }
    out["branches"] = std::move(list);
  }
  if (op.catalog == "expression") {
    json list = json::array();
    for (const ExpressionBranchSpec& b : op.branches) {
      json item{{"weight", b.weight}, {"map", b.map}};
      if (b.weight_sup) item["weight_sup"] = *b.weight_sup;
      list.push_back(std::move(item));
    }
    out["branches"] = std::move(list);
  }
  return out;
}

}  // namespace

void RunConfig::validate() const {
  if (schema_version != kConfigSchemaVersion) {
    throw ConfigError("schema_version", "unsupported version " + std::to_string(schema_version));
  }
  if (params.d && *params.d < 1) throw ConfigError("params.d", "must be >= 1");
  if (params.r && !(*params.r > 0.0 && *params.r < 1.0)) throw ConfigError("params.r", "must lie in (0, 1)");
  if (params.W && !(*params.W > 0.0)) throw ConfigError("params.W", "must be positive");
  if (geometry) {
    if (geometry->dimension < 1) throw ConfigError("geometry.dimension", "must be >= 1");
    if (!geometry->center.empty() && static_cast<int>(geometry->center.size()) != geometry->dimension) {
      throw ConfigError("geometry.center", "expected " + std::to_string(geometry->dimension) + " coordinates");
    }
    if (!(geometry->radius > 0.0)) throw ConfigError("geometry.radius", "must be positive");
  }
  if (op && (op->catalog == "gauss" || op->catalog == "mobius_power")) {
    if (geometry && geometry->dimension != 1) throw ConfigError("geometry.dimension", "catalog entry is one-dimensional");
    if (op->catalog == "mobius_power" && !(op->s > 1.0)) throw ConfigError("operator.s", "must exceed 1");
  }
  if (op && (op->catalog == "affine" || op->catalog == "expression") && !geometry) {
    throw ConfigError("geometry", "required for affine and expression operators");
  }
  if (numerics.N < 2) throw ConfigError("numerics.N", "must be >= 2");
  if (numerics.M && *numerics.M < 4 * numerics.N) throw ConfigError("numerics.M", "must be >= 4N");
  if (numerics.rho && !(*numerics.rho > 0.0 && *numerics.rho < 1.0)) {
    throw ConfigError("numerics.rho", "must lie in (0, 1)");
  }
  if (numerics.branch_cut < 1) throw ConfigError("numerics.branch_cut", "must be >= 1");
  if (numerics.estimate_samples < 64) throw ConfigError("numerics.estimate_samples", "must be >= 64");
  for (std::size_t i = 0; i < numerics.sizes.size(); ++i) {
    if (numerics.sizes[i] < 2) throw ConfigError("numerics.sizes", "sizes must be >= 2");
    if (i > 0 && numerics.sizes[i] <= numerics.sizes[i - 1]) {
      throw ConfigError("numerics.sizes", "sizes must be strictly ascending");
    }
  }
  if (output.format != "csv" && output.format != "json") throw ConfigError("output.format", "must be csv or json");
}

RunConfig parse_config(const json& doc) {
  reject_unknown(doc, "", {"schema_version", "operator", "geometry", "params", "numerics", "output", "bounds"});
  RunConfig cfg;
  if (!doc.contains("schema_version")) throw ConfigError("schema_version", "required");
  if (!doc["schema_version"].is_number_integer()) throw ConfigError("schema_version", "expected an integer");
  cfg.schema_version = doc["schema_version"].get<int>();

  if (doc.contains("operator")) cfg.op = parse_operator(doc["operator"]);

  if (doc.contains("geometry")) {
    const json& g = doc["geometry"];
    reject_unknown(g, "geometry", {"dimension", "center", "radius"});
    GeometrySpec geo;
    if (g.contains("dimension")) geo.dimension = static_cast<int>(get_count(g["dimension"], "geometry.dimension"));
    if (g.contains("center")) geo.center = get_point(g["center"], "geometry.center");
    if (!g.contains("radius")) throw ConfigError("geometry.radius", "required");
    geo.radius = get_number(g["radius"], "geometry.radius");
    if (geo.center.empty()) geo.center.assign(static_cast<std::size_t>(std::max(geo.dimension, 1)), Complex{0.0});
    cfg.geometry = std::move(geo);
  }

  if (doc.contains("params")) {
    const json& p = doc["params"];
    reject_unknown(p, "params", {"d", "r", "W"});
    if (p.contains("d")) cfg.params.d = static_cast<int>(get_count(p["d"], "params.d"));
    if (p.contains("r")) cfg.params.r = get_number(p["r"], "params.r");
    if (p.contains("W")) cfg.params.W = get_number(p["W"], "params.W");
  }

  if (doc.contains("numerics")) {
    const json& n = doc["numerics"];
    reject_unknown(n, "numerics", {"N", "M", "rho", "branch_cut", "sizes", "estimate_samples", "tail_correction"});
    if (n.contains("N")) cfg.numerics.N = get_count(n["N"], "numerics.N");
    if (n.contains("M")) cfg.numerics.M = get_count(n["M"], "numerics.M");
    if (n.contains("rho")) cfg.numerics.rho = get_number(n["rho"], "numerics.rho");
    if (n.contains("branch_cut")) cfg.numerics.branch_cut = get_count(n["branch_cut"], "numerics.branch_cut");
    if (n.contains("sizes")) {
      if (!n["sizes"].is_array()) throw ConfigError("numerics.sizes", "expected an array");
      for (const json& s : n["sizes"]) cfg.numerics.sizes.push_back(get_count(s, "numerics.sizes"));
    }
    if (n.contains("estimate_samples")) {
      cfg.numerics.estimate_samples = get_count(n["estimate_samples"], "numerics.estimate_samples");
    }
    if (n.contains("tail_correction")) {
      if (!n["tail_correction"].is_boolean()) throw ConfigError("numerics.tail_correction", "expected a boolean");
      cfg.numerics.tail_correction = n["tail_correction"].get<bool>();
    }
  }

  if (doc.contains("output")) {
    const json& o = doc["output"];
    reject_unknown(o, "output", {"format", "path"});
    if (o.contains("format")) {
      if (!o["format"].is_string()) throw ConfigError("output.format", "expected a string");
      cfg.output.format = o["format"].get<std::string>();
    }
    if (o.contains("path")) {
      if (!o["path"].is_string()) throw ConfigError("output.path", "expected a string");
      cfg.output.path = o["path"].get<std::string>();
    }
  }

  if (doc.contains("bounds")) {
    const json& b = doc["bounds"];
    reject_unknown(b, "bounds", {"n_max"});
    if (b.contains("n_max")) cfg.n_max = get_count(b["n_max"], "bounds.n_max");
  }

  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

json to_json(const RunConfig& cfg) {
  json doc{{"schema_version", cfg.schema_version}};
  if (cfg.op) doc["operator"] = operator_to_json(*cfg.op);
  if (cfg.geometry) {
    doc["geometry"] = {{"dimension", cfg.geometry->dimension},
                       {"center", point_to_json(cfg.geometry->center)},
                       {"radius", cfg.geometry->radius}};
  }
  json params = json::object();
  if (cfg.params.d) params["d"] = *cfg.params.d;
  if (cfg.params.r) params["r"] = *cfg.params.r;
  if (cfg.params.W) params["W"] = *cfg.params.W;
  if (!params.empty()) doc["params"] = std::move(params);

  json numerics{{"N", cfg.numerics.N},
                {"branch_cut", cfg.numerics.branch_cut},
                {"estimate_samples", cfg.numerics.estimate_samples},
                {"tail_correction", cfg.numerics.tail_correction}};
  if (cfg.numerics.M) numerics["M"] = *cfg.numerics.M;
  if (cfg.numerics.rho) numerics["rho"] = *cfg.numerics.rho;
  if (!cfg.numerics.sizes.empty()) numerics["sizes"] = cfg.numerics.sizes;
  doc["numerics"] = std::move(numerics);
  doc["output"] = {{"format", cfg.output.format}, {"path", cfg.output.path}};
  doc["bounds"] = {{"n_max", cfg.n_max}};
  return doc;
}

RunConfig preset_config(const std::string& name) {
  if (name != "gauss") throw ConfigError("preset", "unknown preset '" + name + "'");
  RunConfig cfg;
  cfg.op = OperatorSpec{"gauss", 2.0, {}, {}};
  cfg.numerics.N = 60;
  cfg.numerics.branch_cut = 10000;
  cfg.numerics.sizes = {30, 60, 120};
  cfg.n_max = 60;
  return cfg;
}

ParamsOverride parse_params_override(const std::string& text) {
  auto trim = [](std::string v) {
    const auto b = v.find_first_not_of(" \t");
    const auto e = v.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
  };
  ParamsOverride out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("params", "expected key=value, got '" + item + "'");
    const std::string key = trim(item.substr(0, eq));
    const std::string value = trim(item.substr(eq + 1));
    if (key != "d" && key != "r" && key != "W") throw ConfigError("params." + key, "unknown parameter");
    std::size_t used = 0;
    try {
      if (key == "d") {
        out.d = std::stoi(value, &used);
      } else if (key == "r") {
        out.r = std::stod(value, &used);
      } else {
        out.W = std::stod(value, &used);
      }
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) throw ConfigError("params." + key, "cannot parse '" + value + "'");
  }
  return out;
}

std::string config_hash(const RunConfig& config) {
  const std::string text = to_json(config).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

BranchFamily build_family(const RunConfig& config) {
  if (!config.op) throw ConfigError("operator", "no operator configured");
  const OperatorSpec& op = *config.op;
  if (op.catalog == "gauss" || op.catalog == "mobius_power") {
    double center = 1.0;
    double radius = 1.5;
    if (config.geometry) {
      if (config.geometry->center.size() != 1 || config.geometry->center[0].imag() != 0.0) {
        throw ConfigError("geometry.center", "catalog entry needs a real center");
      }
      center = config.geometry->center[0].real();
      radius = config.geometry->radius;
    }
    return op.catalog == "gauss" ? make_gauss_model(center, radius) : make_mobius_power_family(op.s, center, radius);
  }
  BallGeometry geometry;
  geometry.dimension = config.geometry->dimension;
  geometry.center = config.geometry->center;
  geometry.radius = config.geometry->radius;
  if (op.catalog == "affine") return make_affine_family(geometry, op.affine);
  return make_expression_family(geometry, op.branches);
}

ResolvedParams resolve_params(const RunConfig& config, const BranchFamily& family) {
  ResolvedParams out;
  out.params.d = family.dimension();
  if (config.params.d && *config.params.d != family.dimension()) {
    throw ConfigError("params.d", "does not match the operator dimension");
  }
  const std::size_t samples = config.numerics.estimate_samples;
  const std::size_t cut = config.numerics.branch_cut;
  bool certified = true;
  if (config.params.r) {
    out.params.r = *config.params.r;
    out.r_source = "user override";
  } else {
    const REstimate r = estimate_r(family, samples, cut);
    out.params.r = r.value;
    out.r_source = r.certificate;
    certified = certified && r.certified;
  }
  if (config.params.W) {
    out.params.W = *config.params.W;
    out.W_source = "user override";
  } else {
    const WEstimate W = estimate_W(family, samples, cut);
    out.params.W = W.value;
    out.W_source = W.certificate;
    certified = certified && W.certified;
  }
  out.certified = certified;
  out.params.validate();
  return out;
}

ResolvedParams resolve_params(const RunConfig& config) {
  if (config.op) return resolve_params(config, build_family(config));
  if (!(config.params.d && config.params.r && config.params.W)) {
    throw ConfigError("params", "without an operator, d, r and W must all be given");
  }
  ResolvedParams out;
  out.params = {*config.params.d, *config.params.r, *config.params.W};
  out.params.validate();
  out.r_source = "user override";
  out.W_source = "user override";
  out.certified = true;
  return out;
}

AssemblyOptions assembly_options(const RunConfig& config) {
  AssemblyOptions opts;
  opts.size = config.numerics.N;
  opts.samples = config.numerics.M;
  opts.rho = config.numerics.rho;
  opts.branch_cut = config.numerics.branch_cut;
  opts.tail_correction = config.numerics.tail_correction;
  return opts;
}

}  // namespace hspec
