// Batch front-end: run scenarios, verify the bracket tables, integrate rolls,
// emit CSV trajectories and JSON reports.
//
// Exit codes: 0 pass, 1 check failure, 2 usage/config error.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rolling/report.hpp"

using namespace rolling;

namespace {

void write_out(const std::string& outdir, const std::string& file, const std::string& content) {
  if (outdir.empty()) return;
  std::filesystem::create_directories(outdir);
  std::ofstream os(outdir + "/" + file);
  os << content;
}

int cmd_list() {
  std::cout << "scenarios:\n";
  for (const auto& n : scenario_names()) std::cout << "  " << n << "\n";
  std::cout << "identity tables:\n";
  for (const auto& t : all_table_ids()) std::cout << "  " << t << "\n";
  return 0;
}

int cmd_verify_tables(const std::string& table, double tol, int states, uint64_t seed,
                      const std::string& outdir) {
  auto rows = run_verify_tables(table, tol, states, seed);
  if (rows.empty()) {
    std::cerr << "no identities matched the filter\n";
    return 2;
  }
  bool all = true;
  for (const auto& r : rows) {
    all = all && r.pass;
    std::cout << (r.pass ? "[pass] " : "[FAIL] ") << r.table << "#" << r.index << " " << r.name
              << "  states=" << r.states << " skipped=" << r.skipped
              << " max_rel_err=" << r.max_rel_err << "\n";
  }
  write_out(outdir, "verify_tables.json", tables_report_json(rows, tol, seed));
  std::cout << (all ? "all identities pass" : "identity failures present") << "\n";
  return all ? 0 : 1;
}

ScenarioConfig load_config(const std::string& name, const std::string& config_path) {
  if (config_path.empty()) return scenario_by_name(name);
  std::ifstream is(config_path);
  if (!is) throw ConfigError("cannot open scenario config: " + config_path);
  std::stringstream ss;
  ss << is.rdbuf();
  return scenario_config_from_json(ss.str());
}

int cmd_rank(const std::string& name, const std::string& config_path, int depth, double tau,
             uint64_t seed, const std::string& outdir) {
  ScenarioConfig cfg = load_config(name, config_path);
  if (seed) cfg.seed = seed;
  if (depth) cfg.numeric.depth = depth;
  if (tau > 0) cfg.numeric.tau = tau;
  BuiltScenario s = build_geometry(cfg);
  RankReport rep = orbit_dimension(*s.gp, s.q0, s.cfg.numeric.depth, s.cfg.numeric.tau);
  std::cout << "scenario " << s.cfg.name << ": rank " << rep.rank << " (gap ratio "
            << rep.gap_ratio << (rep.confident ? ", confident" : ", LOW CONFIDENCE") << ")\n";
  std::cout << "singular values:";
  for (double v : rep.singvals) std::cout << " " << v;
  std::cout << "\n";
  write_out(outdir, "rank_" + s.cfg.name + ".json", rank_report_json(s, rep));
  bool ok = rep.confident && (s.cfg.rank_is_upper_bound ? rep.rank <= s.cfg.expected_rank
                                                        : rep.rank == s.cfg.expected_rank);
  return ok ? 0 : 1;
}

int cmd_roll(const std::string& name, const std::string& curve_kind, double T, double step,
             const std::string& tracks_csv, uint64_t seed, const std::string& outpath) {
  ScenarioConfig cfg = scenario_by_name(name);
  if (seed) cfg.seed = seed;
  BuiltScenario s = build_geometry(cfg);
  std::mt19937_64 rng(s.cfg.seed);
  CurveFn2 curve;
  if (curve_kind == "random")
    curve = random_curve(s.q0.x, rng, 0.35);
  else if (curve_kind == "line")
    curve = line_curve(s.q0.x, V2{{0.4, 0.25}});
  else if (curve_kind == "circle")
    curve = circle_curve(V2{{s.q0.x[0] - 0.2, s.q0.x[1]}}, 0.2, 2.0, 0.0);
  else if (curve_kind == "geodesic") {
    auto g = geodesic(s.gp->M, s.q0.x, orthonormal_frame(s.gp->M, s.q0.x).E.col(0), T, step);
    curve = g.as_fn();
  } else {
    std::cerr << "unknown curve kind: " << curve_kind << "\n";
    return 2;
  }
  Trajectory traj = roll_along(*s.gp, s.q0, curve, T, step);
  std::vector<std::string> tracks;
  if (!tracks_csv.empty()) {
    size_t pos = 0;
    std::string rest = tracks_csv;
    while ((pos = rest.find(',')) != std::string::npos) {
      tracks.push_back(rest.substr(0, pos));
      rest.erase(0, pos + 1);
    }
    if (!rest.empty()) tracks.push_back(rest);
  }
  if (outpath.empty()) {
    write_trajectory_csv(std::cout, *s.gp, traj, tracks);
  } else {
    std::filesystem::path p(outpath);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream os(outpath);
    write_trajectory_csv(os, *s.gp, traj, tracks);
  }
  return 0;
}

int cmd_scenario(const std::string& name, const std::string& config_path,
                 const std::string& dump_path, uint64_t seed, const std::string& outdir) {
  ScenarioConfig cfg = load_config(name, config_path);
  if (seed) cfg.seed = seed;
  if (!dump_path.empty()) {
    std::filesystem::path p(dump_path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream os(dump_path);
    os << scenario_config_json(cfg);
    std::cout << "wrote scenario config to " << dump_path << "\n";
    return 0;
  }
  BuiltScenario s = build_geometry(cfg);
  auto results = run_scenario_checks(s);
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    std::cout << (r.pass ? "[pass] " : "[FAIL] ") << s.cfg.name << "." << r.name
              << "  value=" << r.value << " tol=" << r.tol
              << (r.details.empty() ? "" : "  (" + r.details + ")") << "\n";
  }
  write_out(outdir, "scenario_" + s.cfg.name + ".json", scenario_report_json(s, results));
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rolling of a 2-D against a 3-D Riemannian manifold: scenarios, bracket-table "
               "verification, orbit ranks"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "list scenarios and identity tables");

  std::string table, outdir, scenario_name, curve_kind = "random", tracks, outpath;
  std::string config_path, dump_path;
  double tol = 1e-4, tau = 0, T = 1.0, step = 1e-3;
  int states = 10, depth = 0;
  uint64_t seed = 0;

  auto* vt = app.add_subcommand("verify-tables", "verify the bracket/derivative tables");
  vt->add_option("--table", table, "restrict to one table id");
  vt->add_option("--tol", tol, "relative tolerance (default 1e-4)");
  vt->add_option("--states", states, "admissible states per table (default 10)");
  vt->add_option("--seed", seed, "sampling seed");
  vt->add_option("--out", outdir, "output directory for the JSON report");

  auto* rk = app.add_subcommand("rank", "estimate the local rolling-orbit dimension");
  rk->add_option("scenario", scenario_name, "scenario name");
  rk->add_option("--config", config_path, "scenario config JSON (overrides the name)");
  rk->add_option("--depth", depth, "bracket depth (default from scenario)");
  rk->add_option("--tau", tau, "singular-value threshold");
  rk->add_option("--seed", seed, "seed");
  rk->add_option("--out", outdir, "output directory");

  auto* rl = app.add_subcommand("roll", "integrate a rolling trajectory, emit CSV");
  rl->add_option("scenario", scenario_name, "scenario name")->required();
  rl->add_option("--curve", curve_kind, "line | circle | geodesic | random");
  rl->add_option("--T", T, "final time (default 1)");
  rl->add_option("--step", step, "integration step (default 1e-3)");
  rl->add_option("--track", tracks, "comma-separated invariant columns (alpha,U,I,P,rol_norm)");
  rl->add_option("--seed", seed, "seed");
  rl->add_option("--out", outpath, "CSV path (default stdout)");

  auto* sc = app.add_subcommand("scenario", "run a scenario's full check list");
  sc->add_option("name", scenario_name, "scenario name");
  sc->add_option("--config", config_path, "scenario config JSON (overrides the name)");
  sc->add_option("--dump-config", dump_path, "write the scenario config JSON and exit");
  sc->add_option("--seed", seed, "seed");
  sc->add_option("--out", outdir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) return cmd_list();
    if (vt->parsed()) return cmd_verify_tables(table, tol, states, seed ? seed : 20260809, outdir);
    if (rk->parsed()) {
      if (scenario_name.empty() && config_path.empty()) {
        std::cerr << "rank needs a scenario name or --config\n";
        return 2;
      }
      return cmd_rank(scenario_name, config_path, depth, tau, seed, outdir);
    }
    if (rl->parsed()) return cmd_roll(scenario_name, curve_kind, T, step, tracks, seed, outpath);
    if (sc->parsed()) {
      if (scenario_name.empty() && config_path.empty()) {
        std::cerr << "scenario needs a name or --config\n";
        return 2;
      }
      return cmd_scenario(scenario_name, config_path, dump_path, seed, outdir);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
