#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "bonnet/bonnet_solver.hpp"
#include "bonnet/errors.hpp"
#include "bonnet/forms2d.hpp"
#include "bonnet/lax_psi.hpp"
#include "bonnet/q_family.hpp"

namespace bonnet::cli {

/// Bad or inconsistent configuration (exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct PsiSpec {
  std::optional<PsiBranch> branch;  ///< closed form; empty means integrate
  double psi0 = 0.0;
};

struct GridSpec {
  double s_min = 1.0, s_max = 2.0, t_min = 0.0, t_max = 1.0;
  std::size_t ns = 64, nt = 64;

  Grid grid() const { return Grid(s_min, s_max, t_min, t_max, ns, nt); }
};

struct RunConfig {
  QFamily family;
  PsiSpec psi;
  HInitialData h;
  GridSpec grid;
  std::size_t substeps = 4;     ///< H steps per grid spacing
  std::size_t levels = 1;       ///< grids in a refinement study
  double t0 = 1.0;              ///< deformation parameter used by verify
  double tolerance_scale = 1.0;
  std::filesystem::path out = "out";
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& cfg);

/// Grid at refinement level k: 2^k times the configured node counts
/// (0 is the configured grid).
Grid level_grid(const RunConfig& cfg, std::size_t k);

}  // namespace bonnet::cli
