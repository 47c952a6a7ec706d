#include "svjd/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "svjd/errors.hpp"

namespace svjd {

namespace {

using nlohmann::json;

constexpr int kVersion = 1;

json asset_tree(const AssetParams& a) {
  return {{"s0", a.s0},
          {"q", a.q},
          {"vol",
           {{"xi", a.vol.xi},
            {"eta", a.vol.eta},
            {"sigma", a.vol.sigma},
            {"v0", a.vol.v0},
            {"lambda_rp", a.vol.lambda_rp}}},
          {"jump", {{"lambda", a.jump.lambda}, {"mu_j", a.jump.mu_j}, {"sigma_j", a.jump.sigma_j}}},
          {"tilt", {{"gamma", a.tilt.gamma}, {"nu", a.tilt.nu}}}};
}

json defaults() {
  const RunConfig rc;
  const LSMConfig lc;
  const QuadratureConfig qc;
  const SweepConfig sw;
  const MarketModel m;
  return {{"version", kVersion},
          {"seed", rc.seed},
          {"model",
           {{"r", m.r},
            {"asset1", asset_tree(m.asset1)},
            {"asset2", asset_tree(m.asset2)},
            {"corr",
             {{"rho_w", m.corr.rho_w},
              {"rho_wz1", m.corr.rho_wz1},
              {"rho_wz2", m.corr.rho_wz2},
              {"rho_z", m.corr.rho_z}}}}},
          {"contract", {{"t", rc.t}, {"T", rc.T}, {"K", rc.K}}},
          {"fourier", {{"delta", qc.delta}, {"z_max", qc.z_max}, {"n_nodes", qc.n_nodes}, {"scheme", "trapezoid"}}},
          {"mc", {{"paths", std::int64_t{100000}}, {"steps", 100}, {"scheme", "euler"}, {"antithetic", false}}},
          {"american",
           {{"degree", lc.degree},
            {"dates", lc.dates},
            {"steps_per_date", lc.steps_per_date},
            {"paths", lc.paths},
            {"training_paths", lc.training_paths},
            {"hermite_nodes", lc.hermite_nodes},
            {"boundary_paths", lc.boundary_paths},
            {"scheme", "euler"}}},
          {"convergence", {{"start", sw.start}, {"stop", sw.stop}, {"factor", sw.factor}}}};
}

// Value of the default's type built from a user value; throws on mismatch.
json coerce(const json& def, const json& val, const std::string& key) {
  if (def.is_number_float()) {
    if (!val.is_number()) throw ValidationError("config: " + key + " must be a number");
    return val.get<double>();
  }
  if (def.is_number_integer()) {
    if (val.is_number_integer()) return val;
    if (val.is_number_float()) {
      const double d = val.get<double>();
      if (d == static_cast<double>(static_cast<std::int64_t>(d))) return static_cast<std::int64_t>(d);
    }
    throw ValidationError("config: " + key + " must be an integer");
  }
  if (def.is_boolean()) {
    if (!val.is_boolean()) throw ValidationError("config: " + key + " must be true or false");
    return val;
  }
  if (def.is_string()) {
    if (!val.is_string()) throw ValidationError("config: " + key + " must be a string");
    return val;
  }
  throw ValidationError("config: " + key + " must be an object");
}

void merge(json& into, const json& src, const std::string& prefix) {
  if (!src.is_object()) throw ValidationError("config: " + (prefix.empty() ? "top level" : prefix) + " must be an object");
  for (auto it = src.begin(); it != src.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!into.contains(it.key())) throw ValidationError("config: unknown key " + key);
    json& slot = into[it.key()];
    if (slot.is_object()) {
      merge(slot, it.value(), key);
    } else {
      slot = coerce(slot, it.value(), key);
    }
  }
}

json parse_scalar(const json& def, const std::string& text, const std::string& key) {
  if (def.is_string()) return text;
  json v;
  try {
    v = json::parse(text);
  } catch (const json::parse_error&) {
    throw ValidationError("config: cannot parse value '" + text + "' for " + key);
  }
  return coerce(def, v, key);
}

void apply_override(json& tree, const Override& o) {
  json* node = &tree;
  std::stringstream ss(o.first);
  std::string part;
  while (std::getline(ss, part, '.')) {
    if (!node->is_object() || !node->contains(part)) throw ValidationError("config: override names unknown key " + o.first);
    node = &(*node)[part];
  }
  if (node->is_object()) throw ValidationError("config: override must name a leaf key, not " + o.first);
  *node = parse_scalar(*node, o.second, o.first);
}

AssetParams read_asset(const json& j) {
  AssetParams a;
  a.s0 = j["s0"];
  a.q = j["q"];
  a.vol = {j["vol"]["xi"], j["vol"]["eta"], j["vol"]["sigma"], j["vol"]["v0"], j["vol"]["lambda_rp"]};
  a.jump = {j["jump"]["lambda"], j["jump"]["mu_j"], j["jump"]["sigma_j"]};
  a.tilt = {j["tilt"]["gamma"], j["tilt"]["nu"]};
  return a;
}

VarianceScheme read_scheme(const json& j, const std::string& key) {
  const std::string s = j;
  if (s == "euler") return VarianceScheme::full_truncation_euler;
  if (s == "qe") return VarianceScheme::qe;
  throw ValidationError("config: " + key + " must be \"euler\" or \"qe\"");
}

}  // namespace

Override parse_override(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ValidationError("override must look like key=value: " + text);
  return {text.substr(0, eq), text.substr(eq + 1)};
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string default_config_json() { return defaults().dump(2); }

RunConfig load_config(const std::string& json_text, const std::vector<Override>& overrides) {
  json user;
  try {
    user = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: malformed JSON: ") + e.what());
  }
  if (!user.is_object() || !user.contains("version")) throw ValidationError("config: missing version");
  if (user["version"] != kVersion) throw ValidationError("config: unsupported version (expected 1)");
  json tree = defaults();
  merge(tree, user, "");
  for (const auto& o : overrides) apply_override(tree, o);

  RunConfig rc;
  rc.canonical = tree.dump();
  rc.hash = fnv1a_hex(rc.canonical);
  rc.seed = tree["seed"];
  const json& m = tree["model"];
  rc.model.r = m["r"];
  rc.model.asset1 = read_asset(m["asset1"]);
  rc.model.asset2 = read_asset(m["asset2"]);
  rc.model.corr = {m["corr"]["rho_w"], m["corr"]["rho_wz1"], m["corr"]["rho_wz2"], m["corr"]["rho_z"]};
  rc.t = tree["contract"]["t"];
  rc.T = tree["contract"]["T"];
  rc.K = tree["contract"]["K"];

  const json& f = tree["fourier"];
  rc.quad.delta = f["delta"];
  rc.quad.z_max = f["z_max"];
  rc.quad.n_nodes = f["n_nodes"];
  const std::string qs = f["scheme"];
  if (qs == "trapezoid") {
    rc.quad.scheme = QuadScheme::trapezoid;
  } else if (qs == "adaptive") {
    rc.quad.scheme = QuadScheme::adaptive;
  } else {
    throw ValidationError("config: fourier.scheme must be \"trapezoid\" or \"adaptive\"");
  }

  const json& mc = tree["mc"];
  rc.sim.n_paths = mc["paths"];
  rc.sim.n_steps = mc["steps"];
  rc.sim.scheme = read_scheme(mc["scheme"], "mc.scheme");
  rc.sim.antithetic = mc["antithetic"];
  rc.sim.seed = rc.seed;

  const json& am = tree["american"];
  rc.american.degree = am["degree"];
  rc.american.dates = am["dates"];
  rc.american.steps_per_date = am["steps_per_date"];
  rc.american.paths = am["paths"];
  rc.american.training_paths = am["training_paths"];
  rc.american.hermite_nodes = am["hermite_nodes"];
  rc.american.boundary_paths = am["boundary_paths"];
  rc.american.scheme = read_scheme(am["scheme"], "american.scheme");
  rc.american.seed = rc.seed;

  rc.sweep = {tree["convergence"]["start"], tree["convergence"]["stop"], tree["convergence"]["factor"]};

  if (!(rc.T > rc.t) || rc.t < 0.0) throw ValidationError("config: contract requires 0 <= t < T");
  if (rc.K < 0.0) throw ValidationError("config: contract.K must be >= 0");
  rc.quad.validate();
  rc.sim.validate();
  rc.american.validate();
  require_valid(rc.model);
  return rc;
}

RunConfig load_config_file(const std::string& path, const std::vector<Override>& overrides) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_config(ss.str(), overrides);
}

std::string resolve_output_path(const std::string& path) {
  const char* dir = std::getenv("SVJD_OUTPUT_DIR");
  if (dir == nullptr || *dir == '\0' || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(dir) / path).string();
}

}  // namespace svjd
