#pragma once

// Machine-readable reports: panel JSON with explicit nulls for undefined
// invariants, rank reports, table verification reports, scenario reports,
// and trajectory CSV emission.

#include <string>
#include <vector>

#include "rolling/scenarios.hpp"

namespace rolling {

std::string panel_json(const GeometryPair& gp, const RollingState& q);

// ScenarioConfig JSON (schema "v1"), with validation diagnostics on load
std::string scenario_config_json(const ScenarioConfig& cfg);
ScenarioConfig scenario_config_from_json(const std::string& text);

std::string rank_report_json(const BuiltScenario& s, const RankReport& rep);

std::string tables_report_json(const std::vector<TableRunRow>& rows, double tol, uint64_t seed);

std::string scenario_report_json(const BuiltScenario& s, const std::vector<CheckResult>& results);

// CSV columns: t, x1, x2, xh1..xh3, A11..A32 row-major, then tracked columns
void write_trajectory_csv(std::ostream& os, const GeometryPair& gp, const Trajectory& traj,
                          const std::vector<std::string>& tracks);

}  // namespace rolling
