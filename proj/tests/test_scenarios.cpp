#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rolling/report.hpp"

using namespace rolling;

TEST_SUITE_BEGIN("scenarios");

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(build_case_ii(1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(build_case_iii(1.0, 4.0, 1.0), ConfigError);
  CHECK_THROWS_AS(build_case_iii(1.0, 4.0, 0.0), ConfigError);
  CHECK_THROWS_AS(build_ss12("exp", {1.0, 1.0}, 1.0, 0.0, 0.0), ConfigError);
  CHECK_THROWS_AS(build_ss12("cosh", {1.0, 1.0}, 0.5, 0.0, 0.0), ConfigError);
}

TEST_CASE("case (i) parameter sweep: the radius does not change the classification") {
  BuiltScenario s = build_geometry(build_case_i(2.0));
  CHECK(frobenius_norm(rol_tensor(*s.gp, s.q0)) < 1e-8);
  RankReport rep = orbit_dimension(*s.gp, s.q0);
  CHECK(rep.rank == 2);
  CHECK(rep.confident);
}

TEST_CASE("initial-state recipes satisfy the scenario predicates") {
  BuiltScenario s3 = build_geometry(scenario_by_name("case_iii_matched"));
  ProductPanel pp = product_panel(*s3.gp, s3.q0);
  CHECK(std::abs(pp.alpha) == doctest::Approx(0.5).epsilon(1e-12));
  CurvaturePanel p = curvature_panel(*s3.gp, s3.q0);
  CHECK(p.k_equals_sigma());
  CHECK(p.pi_nonzero());

  BuiltScenario ss = build_geometry(scenario_by_name("ss12_exp"));
  ProductPanel ps = product_panel(*ss.gp, ss.q0);
  CHECK(std::abs(ps.P - 0.6) < 1e-12);
  CHECK(std::abs(ps.I) < 1e-12);
  REQUIRE(ps.U.has_value());
  CHECK(std::abs(*ps.U) < 1e-10);
}

TEST_CASE("ss12 warping relations hold pointwise") {
  for (const char* name : {"ss12_exp", "ss12_affine"}) {
    ScenarioConfig cfg = scenario_by_name(name);
    Ss12Residuals res = ss12_warping_residuals(cfg, 41);
    CHECK_MESSAGE(res.first_order < 1e-6, name);
    CHECK_MESSAGE(res.second_order < 1e-6, name);
  }
}

TEST_CASE("warped geodesic invariant: radial, fiber and generic starts") {
  ScenarioConfig cfg = scenario_by_name("ss12_exp");
  BuiltScenario s = build_geometry(cfg);
  // C0 = 0: radial geodesic has r(t) = t + r0 (checked inside the drift fn
  // for the 3-D factor; here the 2-D factor)
  auto g = geodesic(s.gp->M, s.q0.x, V2{{1, 0}}, 0.3, 1e-3);
  for (size_t i = 0; i < g.ts.size(); ++i)
    CHECK(std::abs(g.us[i][0] - (s.q0.x[0] + g.ts[i])) < 1e-9);
  // C0 = 1: fiber-tangent start has r'(0) = 0
  auto gf = geodesic(s.gp->M, s.q0.x, V2{{0, 1}}, 0.05, 1e-3);
  CHECK(std::abs(gf.vs.front()[0]) < 1e-12);
  // generic starts drift below 1e-7
  double d2 = warped_geodesic_invariant_drift(s.gp->M, s.q0.x, V2{{0.6, 0.8}}, 0.3, 1e-3);
  CHECK(d2 < 1e-7);
  double d3 = warped_geodesic_invariant_drift(s.gp->Mh, s.q0.xh, V3{{0.5, 0.6, 0.4}}, 0.3, 1e-3);
  CHECK(d3 < 1e-7);
}

TEST_CASE("alpha conservation on the product scenario, with step scaling") {
  BuiltScenario s = build_geometry(scenario_by_name("case_iii_generic"));
  std::mt19937_64 rng(3);
  CurveFn2 curve = random_curve(s.q0.x, rng, 0.4);
  Trajectory t1 = roll_along(*s.gp, s.q0, curve, 1.0, 2e-3);
  Trajectory t2 = roll_along(*s.gp, s.q0, curve, 1.0, 1e-3);
  double d1 = alpha_drift(*s.gp, t1);
  double d2 = alpha_drift(*s.gp, t2);
  CHECK(d2 < 1e-6);
  // roughly fourth-order decay of the conservation drift
  CHECK(d1 / std::max(d2, 1e-300) > 6.0);
}

TEST_CASE("full check lists of the shipped scenarios pass") {
  for (const std::string& name : scenario_names()) {
    BuiltScenario s = build_geometry(scenario_by_name(name));
    auto results = run_scenario_checks(s);
    for (const auto& r : results)
      CHECK_MESSAGE(r.pass, name, ".", r.name, " value ", r.value, " tol ", r.tol, " ",
                    r.details);
  }
}

TEST_CASE("scenario config JSON round trip (schema v1)") {
  for (const char* name : {"case_iii_matched", "ss12_exp"}) {
    ScenarioConfig cfg = scenario_by_name(name);
    std::string text = scenario_config_json(cfg);
    CHECK(text.find("\"version\": \"v1\"") != std::string::npos);
    ScenarioConfig back = scenario_config_from_json(text);
    CHECK(back.name == cfg.name);
    CHECK(back.recipe == cfg.recipe);
    CHECK(back.checks == cfg.checks);
    CHECK(back.numeric.step == cfg.numeric.step);
    // the rebuilt geometry produces the same initial state
    BuiltScenario a = build_geometry(cfg);
    BuiltScenario b = build_geometry(back);
    CHECK(norm(a.q0.x - b.q0.x) < 1e-15);
    CHECK(frobenius_norm(a.q0.A - b.q0.A) < 1e-15);
  }
  CHECK_THROWS_AS(scenario_config_from_json("{ not json"), ConfigError);
  CHECK_THROWS_AS(scenario_config_from_json("{\"version\":\"v0\"}"), ConfigError);
  CHECK_THROWS_AS(scenario_config_from_json("{\"version\":\"v1\",\"name\":\"x\"}"), ConfigError);
}

TEST_CASE("reports: panel JSON nulls, CSV header and determinism") {
  BuiltScenario s = build_geometry(scenario_by_name("case_i"));
  std::string pj = panel_json(*s.gp, s.q0);
  // case (i): phi undefined -> explicit null
  CHECK(pj.find("\"phi\": null") != std::string::npos);
  CHECK(pj.find("\"hypotheses\"") != std::string::npos);

  std::mt19937_64 rng(9);
  CurveFn2 curve = random_curve(s.q0.x, rng, 0.3);
  Trajectory traj = roll_along(*s.gp, s.q0, curve, 0.2, 1e-3);
  std::ostringstream a, b;
  write_trajectory_csv(a, *s.gp, traj, {"alpha", "rol_norm"});
  write_trajectory_csv(b, *s.gp, traj, {"alpha", "rol_norm"});
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("t,x1,x2,xh1,xh2,xh3,A11,A12,A21,A22,A31,A32,alpha,rol_norm", 0) == 0);
}

TEST_SUITE_END();
