#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "bonnet_cli/config.hpp"

namespace bonnet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitResidual = 1;
inline constexpr int kExitConfig = 2;

/// The six branches of the Q table with domains and first-integral constants.
nlohmann::ordered_json families_listing(double a);
int cmd_families(std::ostream& out, bool as_json, double a);

/// profile.csv, psi.csv, solve_report.json
int cmd_solve(const RunConfig& cfg, std::ostream& out);
/// surface.obj, fundamental_forms.csv, mesh_report.json
int cmd_mesh(const RunConfig& cfg, std::ostream& out);
/// deformed.obj, deform_report.json
int cmd_deform(const RunConfig& cfg, double t0, std::ostream& out);

/// Report of every check whose name contains `only` (all when empty) or
/// whose section equals it.
nlohmann::ordered_json verify_report(const RunConfig& cfg, const std::string& only,
                                     bool* all_passed = nullptr);
/// verify_report.json
int cmd_verify(const RunConfig& cfg, const std::string& only, std::ostream& out);

/// Full command line: parses, dispatches and maps errors to exit codes.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace bonnet::cli
