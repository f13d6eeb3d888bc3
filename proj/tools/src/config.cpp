#include "bonnet_cli/config.hpp"

#include <cmath>
#include <fstream>

#include "bonnet/errors.hpp"

namespace bonnet::cli {

namespace {

using nlohmann::json;

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

template <class T>
T require(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("config is missing '") + key + "'");
  return get_or<T>(j, key, T{});
}

const json& section(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_object())
    throw ConfigError(std::string("config needs an object '") + key + "'");
  return j.at(key);
}

}  // namespace

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig cfg;

  const json& fam = section(j, "family");
  try {
    cfg.family.kind = q_kind_from_string(require<std::string>(fam, "kind"));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  cfg.family.sign = require<int>(fam, "sign");
  cfg.family.a = get_or<double>(fam, "a", 1.0);
  try {
    cfg.family.validate();
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }

  const json& psi = section(j, "psi");
  const std::string branch = require<std::string>(psi, "branch");
  if (branch == "integrate") {
    cfg.psi.psi0 = get_or<double>(psi, "psi0", 0.0);
  } else {
    PsiBranch b;
    try {
      b.kind = psi_case_from_string(branch);
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
    b.sigma = get_or<double>(psi, "sigma", 0.0);
    b.eta = get_or<double>(psi, "eta", 0.0);
    b.family = cfg.family;
    try {
      b.validate();
    } catch (const PreconditionError& e) {
      throw ConfigError(e.what());
    }
    cfg.psi.branch = b;
  }

  const json& h = section(j, "h");
  cfg.h.s0 = get_or<double>(h, "s0", std::nan(""));
  cfg.h.H0 = require<double>(h, "H0");
  cfg.h.H0p = require<double>(h, "H0p");
  cfg.h.H0pp = require<double>(h, "H0pp");
  cfg.h.tau_c = require<double>(h, "tau_c");

  const json& g = section(j, "grid");
  cfg.grid.s_min = require<double>(g, "s_min");
  cfg.grid.s_max = require<double>(g, "s_max");
  cfg.grid.t_min = require<double>(g, "t_min");
  cfg.grid.t_max = require<double>(g, "t_max");
  cfg.grid.ns = require<std::size_t>(g, "ns");
  cfg.grid.nt = require<std::size_t>(g, "nt");
  if (std::isnan(cfg.h.s0)) cfg.h.s0 = cfg.grid.s_min;

  cfg.substeps = get_or<std::size_t>(j, "substeps", 4);
  cfg.levels = get_or<std::size_t>(j, "levels", 1);
  cfg.tolerance_scale = get_or<double>(j, "tolerance_scale", 1.0);
  cfg.out = get_or<std::string>(j, "out", "out");
  if (j.contains("deform")) cfg.t0 = get_or<double>(section(j, "deform"), "t0", 1.0);
  if (!std::isfinite(cfg.t0)) throw ConfigError("deform.t0 must be finite");

  if (cfg.substeps == 0) throw ConfigError("substeps must be positive");
  if (cfg.levels == 0) throw ConfigError("levels must be at least 1");
  if (!(cfg.tolerance_scale > 0.0)) throw ConfigError("tolerance_scale must be positive");
  try {
    cfg.h.validate();
    cfg.grid.grid();
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
  if (cfg.h.s0 != cfg.grid.s_min)
    throw ConfigError("h.s0 must equal grid.s_min (initial data sit on the first s-node)");

  // both ends inside the guarded domain; the domain is an interval, so
  // the whole s-range is then admissible
  const SingularityGuard guard(cfg.family);
  guard.check(cfg.grid.s_min);
  guard.check(cfg.grid.s_max);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

json to_json(const RunConfig& cfg) {
  json j;
  j["family"] = {{"kind", to_string(cfg.family.kind)},
                 {"sign", cfg.family.sign},
                 {"a", cfg.family.a}};
  if (cfg.psi.branch) {
    const PsiBranch& b = *cfg.psi.branch;
    j["psi"] = {{"branch", to_string(b.kind)},
                {"sigma", b.sigma},
                {"eta", b.eta},
                {"derived_mirror", b.derived_mirror()}};
  } else {
    j["psi"] = {{"branch", "integrate"}, {"psi0", cfg.psi.psi0}};
  }
  j["h"] = {{"s0", cfg.h.s0},   {"H0", cfg.h.H0},       {"H0p", cfg.h.H0p},
            {"H0pp", cfg.h.H0pp}, {"tau_c", cfg.h.tau_c}};
  j["grid"] = {{"s_min", cfg.grid.s_min}, {"s_max", cfg.grid.s_max},
               {"t_min", cfg.grid.t_min}, {"t_max", cfg.grid.t_max},
               {"ns", cfg.grid.ns},       {"nt", cfg.grid.nt}};
  j["substeps"] = cfg.substeps;
  j["levels"] = cfg.levels;
  j["tolerance_scale"] = cfg.tolerance_scale;
  j["deform"] = {{"t0", cfg.t0}};
  return j;
}

Grid level_grid(const RunConfig& cfg, std::size_t k) {
  const std::size_t f = std::size_t{1} << k;
  return Grid(cfg.grid.s_min, cfg.grid.s_max, cfg.grid.t_min, cfg.grid.t_max, cfg.grid.ns * f,
              cfg.grid.nt * f);
}

}  // namespace bonnet::cli
