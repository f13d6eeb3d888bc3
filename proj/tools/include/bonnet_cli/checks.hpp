#pragma once

// Named residual checks over a refinement sequence.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bonnet/surface_embed.hpp"
#include "bonnet_cli/config.hpp"

namespace bonnet::cli {

/// Lazily built pipeline artifacts on one grid.
class Pipeline {
 public:
  Pipeline(const RunConfig& cfg, Grid grid);

  const RunConfig& config() const { return cfg_; }
  const Grid& grid() const { return grid_; }
  double h() const { return std::max(grid_.hs(), grid_.ht()); }

  const SurfaceProfile& profile();
  const PsiField& psi();
  const CoframeSet& coframes();
  const FrameField& frame(IntegrationPath path = IntegrationPath::TEdgeThenSLines);
  const FundamentalForms& forms();
  const DeformationParam& deformation(double t0,
                                      IntegrationPath path = IntegrationPath::TEdgeThenSLines);
  const DeformedSurface& deformed(double t0);

 private:
  RunConfig cfg_;
  Grid grid_;
  std::optional<SurfaceProfile> profile_;
  std::optional<PsiField> psi_;
  std::optional<CoframeSet> cf_;
  std::map<int, FrameField> frames_;
  std::optional<FundamentalForms> forms_;
  std::map<std::pair<double, int>, DeformationParam> deformations_;
  std::map<double, DeformedSurface> deformed_;
};

enum class CheckKind {
  Convergent,  ///< O(h^2): below 25 h^2 scale and order >= 1.9 (or at the roundoff floor)
  Algebraic,   ///< below 1e-10 scale on every level
  Threshold,   ///< below scale itself on every level
  LowerBound,  ///< above 10 x 25 h^2 scale on the finest level
};

std::string to_string(CheckKind k);

struct Sample {
  double value;
  double scale = 1.0;
};

struct CheckSpec {
  std::string section;
  std::string name;
  CheckKind kind;
  std::function<Sample(Pipeline&)> eval;
};

/// Every check the library knows for this configuration, in report order.
std::vector<CheckSpec> all_checks(const RunConfig& cfg);

struct CheckResult {
  std::string section;
  std::string name;
  CheckKind kind;
  std::vector<double> h;
  std::vector<double> values;
  double tolerance;  ///< on the finest level
  double observed_order;
  bool passed;
};

/// Runs the selected checks on cfg.levels grids.
std::vector<CheckResult> run_checks(const RunConfig& cfg, const std::vector<CheckSpec>& checks);

nlohmann::ordered_json to_json(const CheckResult& r);
/// {name: {...}} in the given order.
nlohmann::ordered_json report(const std::vector<CheckResult>& results);

/// Pass rule shared with the acceptance suite.
inline constexpr double kMinOrder = 1.9;
inline constexpr double kFdFactor = 25.0;
inline constexpr double kAlgebraicTolerance = 1e-10;
inline constexpr double kRoundoffFloor = 1e-10;

}  // namespace bonnet::cli
