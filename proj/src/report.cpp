#include "rolling/report.hpp"

#include <json.hpp>
#include <ostream>

#include "rolling/errors.hpp"

namespace rolling {

using nlohmann::json;

static json opt(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::string panel_json(const GeometryPair& gp, const RollingState& q) {
  CurvaturePanel p = curvature_panel(gp, q, /*with_beta=*/true);
  json j;
  j["sigma1"] = p.sigma1;
  j["sigma2"] = p.sigma2;
  j["sigma"] = p.sigma3;
  j["Pi_X"] = p.pi_x;
  j["Pi_Y"] = p.pi_y;
  j["Pi_Z"] = p.pi_z;
  j["K"] = p.K;
  j["beta"] = opt(p.beta);
  j["r"] = opt(p.r);
  j["phi"] = opt(p.phi);
  j["omega"] = opt(p.omega);
  j["sigma1_tilde"] = opt(p.sigma1_t);
  j["sigma2_tilde"] = opt(p.sigma2_t);
  j["PiZ_tilde"] = opt(p.pi_z_t);
  j["lambda"] = opt(p.lambda);
  json hyp;
  hyp["pi_nonzero"] = p.pi_nonzero();
  hyp["k_equals_sigma"] = p.k_equals_sigma();
  hyp["case"] = p.case_label();
  hyp["tolerances"] = {{"radius", kRadiusTol},
                       {"equality", kEqualityTol},
                       {"inequality", kInequalityTol},
                       {"omega", kOmegaTol}};
  j["hypotheses"] = hyp;
  if (gp.Mh.has_base_direction()) {
    ProductPanel pp = product_panel(gp, q);
    json prod;
    prod["alpha"] = pp.alpha;
    prod["tau1"] = pp.tau1;
    prod["tau2"] = pp.tau2;
    prod["P"] = pp.P;
    prod["I"] = pp.I;
    prod["Theta"] = opt(pp.Theta);
    prod["Psi"] = opt(pp.Psi);
    prod["K_N"] = opt(pp.KN);
    prod["U"] = opt(pp.U);
    j["product"] = prod;
  }
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// scenario config schema "v1"

static json warp_json(const WarpFn& w) {
  json j;
  switch (w.kind) {
    case WarpFn::Kind::Exp: j["family"] = "exp"; j["coeffs"] = {w.a, w.k}; break;
    case WarpFn::Kind::Cosh: j["family"] = "cosh"; j["coeffs"] = {w.a, w.k}; break;
    case WarpFn::Kind::Affine: j["family"] = "affine"; j["coeffs"] = {w.a, w.b}; break;
    case WarpFn::Kind::Poly: j["family"] = "poly"; j["coeffs"] = w.coeffs; break;
    case WarpFn::Kind::Ss12:
      j["family"] = "ss12";
      j["sub"] = w.ss12.sub == WarpFn::Kind::Exp ? "exp" : "affine";
      j["a"] = w.ss12.a;
      j["k"] = w.ss12.k;
      j["b"] = w.ss12.b;
      j["P0"] = w.ss12.P0;
      j["r0"] = w.ss12.r0;
      j["rhat0"] = w.ss12.rhat0;
      j["fhat0"] = w.ss12.fhat0;
      break;
  }
  return j;
}

static WarpFn warp_from_json(const json& j) {
  std::string family = j.at("family");
  if (family == "ss12") {
    WarpFn w;
    w.kind = WarpFn::Kind::Ss12;
    w.ss12.sub = j.at("sub") == "exp" ? WarpFn::Kind::Exp : WarpFn::Kind::Affine;
    w.ss12.a = j.at("a");
    w.ss12.k = j.at("k");
    w.ss12.b = j.at("b");
    w.ss12.P0 = j.at("P0");
    w.ss12.r0 = j.at("r0");
    w.ss12.rhat0 = j.at("rhat0");
    w.ss12.fhat0 = j.at("fhat0");
    return w;
  }
  return make_warp(family, j.at("coeffs").get<std::vector<double>>());
}

static json model_json(const ModelSpec& m) {
  json j;
  j["model"] = m.model;
  j["params"] = m.params;
  if (m.warp) j["warp"] = warp_json(*m.warp);
  if (m.fiber) {
    j["fiber"] = {{"kind", m.fiber->kind == Fiber::Kind::Sphere ? "sphere" : "flat"},
                  {"rho", m.fiber->rho}};
  }
  return j;
}

static ModelSpec model_from_json(const json& j) {
  ModelSpec m;
  m.model = j.at("model");
  if (j.contains("params"))
    m.params = j.at("params").get<std::map<std::string, double>>();
  if (j.contains("warp")) m.warp = warp_from_json(j.at("warp"));
  if (j.contains("fiber")) {
    Fiber f;
    f.kind = j.at("fiber").at("kind") == "sphere" ? Fiber::Kind::Sphere : Fiber::Kind::Flat;
    f.rho = j.at("fiber").value("rho", 1.0);
    m.fiber = f;
  }
  return m;
}

std::string scenario_config_json(const ScenarioConfig& cfg) {
  json j;
  j["version"] = "v1";
  j["name"] = cfg.name;
  j["M"] = model_json(cfg.M);
  j["Mhat"] = model_json(cfg.Mh);
  j["initial_state"] = {{"recipe", cfg.recipe},
                        {"alpha0", cfg.alpha0},
                        {"P0", cfg.P0},
                        {"normal_angle", cfg.normal_angle},
                        {"column_angle", cfg.column_angle},
                        {"x", {cfg.x0[0], cfg.x0[1]}},
                        {"xh", {cfg.xh0[0], cfg.xh0[1], cfg.xh0[2]}}};
  j["checks"] = cfg.checks;
  j["numeric"] = {{"step", cfg.numeric.step},
                  {"depth", cfg.numeric.depth},
                  {"tau", cfg.numeric.tau},
                  {"tol", cfg.numeric.tol}};
  j["seed"] = cfg.seed;
  j["expected_rank"] = cfg.expected_rank;
  j["rank_is_upper_bound"] = cfg.rank_is_upper_bound;
  return j.dump(2);
}

ScenarioConfig scenario_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("scenario config is not valid JSON: ") + e.what());
  }
  try {
    if (j.value("version", "") != "v1")
      throw ConfigError("scenario config must declare \"version\": \"v1\"");
    ScenarioConfig cfg;
    cfg.name = j.at("name");
    cfg.M = model_from_json(j.at("M"));
    cfg.Mh = model_from_json(j.at("Mhat"));
    const json& init = j.at("initial_state");
    cfg.recipe = init.at("recipe");
    cfg.alpha0 = init.value("alpha0", 0.0);
    cfg.P0 = init.value("P0", 0.0);
    cfg.normal_angle = init.value("normal_angle", 0.4);
    cfg.column_angle = init.value("column_angle", 0.3);
    cfg.x0 = V2{{init.at("x").at(0), init.at("x").at(1)}};
    cfg.xh0 = V3{{init.at("xh").at(0), init.at("xh").at(1), init.at("xh").at(2)}};
    cfg.checks = j.value("checks", std::vector<std::string>{});
    if (j.contains("numeric")) {
      const json& n = j.at("numeric");
      cfg.numeric.step = n.value("step", 1e-3);
      cfg.numeric.depth = n.value("depth", 4);
      cfg.numeric.tau = n.value("tau", 1e-7);
      cfg.numeric.tol = n.value("tol", 1e-4);
    }
    cfg.seed = j.value("seed", uint64_t(20260809));
    cfg.expected_rank = j.value("expected_rank", 0);
    cfg.rank_is_upper_bound = j.value("rank_is_upper_bound", false);
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario config is missing or mistypes a field: ") +
                      e.what());
  }
}

static json state_json(const RollingState& q) {
  json j;
  j["x"] = {q.x[0], q.x[1]};
  j["xh"] = {q.xh[0], q.xh[1], q.xh[2]};
  j["A"] = {{q.A(0, 0), q.A(0, 1)}, {q.A(1, 0), q.A(1, 1)}, {q.A(2, 0), q.A(2, 1)}};
  return j;
}

std::string rank_report_json(const BuiltScenario& s, const RankReport& rep) {
  json j;
  j["scenario"] = s.cfg.name;
  j["q0"] = state_json(s.q0);
  j["depth"] = rep.family.depth_reached;
  j["singvals"] = rep.singvals;
  j["rank"] = rep.rank;
  j["gap_ratio"] = rep.gap_ratio;
  j["confident"] = rep.confident;
  j["classification"] = rep.classification;
  j["labels"] = rep.family.labels;
  j["expected_rank"] = s.cfg.expected_rank;
  j["rank_is_upper_bound"] = s.cfg.rank_is_upper_bound;
  j["seed"] = s.cfg.seed;
  std::vector<std::function<double(const RollingState&)>> fns;
  std::vector<std::string> names;
  if (s.cfg.recipe == "alpha") {
    const GeometryPair& gp = *s.gp;
    fns.push_back([&gp](const RollingState& q) { return product_panel(gp, q).alpha; });
    names.push_back("alpha");
  } else if (s.cfg.recipe == "p0") {
    const GeometryPair& gp = *s.gp;
    fns.push_back([&gp](const RollingState& q) { return *product_panel(gp, q).U; });
    fns.push_back([&gp](const RollingState& q) { return product_panel(gp, q).I; });
    names.push_back("U");
    names.push_back("I");
  }
  json ann = json::array();
  for (size_t i = 0; i < fns.size(); ++i) {
    auto res = annihilation_residuals(*s.gp, s.q0, rep.family, fns[i]);
    double worst = 0;
    for (double r : res) worst = std::max(worst, r);
    ann.push_back({{"function", names[i]}, {"max_directional_derivative", worst}});
  }
  j["conserved_annihilation"] = ann;
  return j.dump(2);
}

std::string tables_report_json(const std::vector<TableRunRow>& rows, double tol, uint64_t seed) {
  json arr = json::array();
  bool all = true;
  for (const auto& r : rows) {
    arr.push_back({{"table", r.table},
                   {"index", r.index},
                   {"name", r.name},
                   {"states", r.states},
                   {"skipped", r.skipped},
                   {"max_rel_err", r.max_rel_err},
                   {"pass", r.pass}});
    all = all && r.pass;
  }
  json j;
  j["tol"] = tol;
  j["seed"] = seed;
  j["identities"] = arr;
  j["all_pass"] = all;
  return j.dump(2);
}

std::string scenario_report_json(const BuiltScenario& s, const std::vector<CheckResult>& results) {
  json arr = json::array();
  bool all = true;
  for (const auto& r : results) {
    arr.push_back({{"name", r.name},
                   {"pass", r.pass},
                   {"value", r.value},
                   {"tol", r.tol},
                   {"details", r.details}});
    all = all && r.pass;
  }
  json j;
  j["scenario"] = s.cfg.name;
  j["seed"] = s.cfg.seed;
  j["q0"] = state_json(s.q0);
  j["panel_q0"] = json::parse(panel_json(*s.gp, s.q0));
  j["checks"] = arr;
  j["all_pass"] = all;
  return j.dump(2);
}

void write_trajectory_csv(std::ostream& os, const GeometryPair& gp, const Trajectory& traj,
                          const std::vector<std::string>& tracks) {
  os << "t,x1,x2,xh1,xh2,xh3,A11,A12,A21,A22,A31,A32";
  for (const auto& t : tracks) os << "," << t;
  os << "\n";
  char buf[64];
  auto emit = [&](double v) {
    snprintf(buf, sizeof buf, ",%.17g", v);
    os << buf;
  };
  for (size_t i = 0; i < traj.states.size(); ++i) {
    const RollingState& q = traj.states[i];
    snprintf(buf, sizeof buf, "%.17g", traj.ts[i]);
    os << buf;
    emit(q.x[0]);
    emit(q.x[1]);
    emit(q.xh[0]);
    emit(q.xh[1]);
    emit(q.xh[2]);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 2; ++c) emit(q.A(r, c));
    for (const auto& t : tracks) {
      double v = 0;
      if (t == "alpha")
        v = product_panel(gp, q).alpha;
      else if (t == "U") {
        auto pp = product_panel(gp, q);
        if (!pp.U) throw ScenarioMismatch("U track requires warped factors");
        v = *pp.U;
      } else if (t == "I")
        v = product_panel(gp, q).I;
      else if (t == "P")
        v = product_panel(gp, q).P;
      else if (t == "rol_norm")
        v = frobenius_norm(rol_tensor(gp, q));
      else if (t == "K_sigma_gap") {
        CurvaturePanel p = curvature_panel(gp, q);
        v = p.K - p.sigma3;
      } else
        throw ConfigError("unknown track column: " + t);
      emit(v);
    }
    os << "\n";
  }
}

}  // namespace rolling
