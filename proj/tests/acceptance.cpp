// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
//
//  1. state-space dimension 8 (chart differential rank at random states)
//  2. rolling correctness (no-slip, transport oracle, geodesic -> geodesic)
//  3. orbit classification ranks with confident gaps
//  4. conserved quantities along rolls and under the bracket family
//  5. bracket/derivative tables + curvature component formulas
//  6. spectral structure of the curvature operator
//  7. warped geodesic invariant + warping-function relations
//  8. fourth-order convergence of the roll integrator

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <random>

#include "rolling/report.hpp"

using namespace rolling;

namespace {

int failures = 0;

void report(int idx, const char* what, bool pass, const std::string& detail) {
  printf("[%s] criterion %d: %s  (%s)\n", pass ? "PASS" : "FAIL", idx, what, detail.c_str());
  if (!pass) ++failures;
}

std::string fmt(double v) {
  char b[40];
  snprintf(b, sizeof b, "%.3g", v);
  return b;
}

M32 random_isometry(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  double w = gauss(rng), x = gauss(rng), y = gauss(rng), z = gauss(rng);
  double n = std::sqrt(w * w + x * x + y * y + z * z);
  w /= n;
  x /= n;
  y /= n;
  z /= n;
  M32 A{};
  A(0, 0) = 1 - 2 * (y * y + z * z);
  A(0, 1) = 2 * (x * y - w * z);
  A(1, 0) = 2 * (x * y + w * z);
  A(1, 1) = 1 - 2 * (x * x + z * z);
  A(2, 0) = 2 * (x * z - w * y);
  A(2, 1) = 2 * (y * z + w * x);
  return A;
}

// 1 -------------------------------------------------------------------------
void criterion1() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> uni(-1, 1);
  WarpFn wexp = make_warp("exp", {1.0, 0.6});
  WarpFn waff = make_warp("affine", {1.5, 0.4});
  WarpFn wcosh = make_warp("cosh", {1.0, 0.8});
  Fiber sph{Fiber::Kind::Sphere, 1.1};
  Fiber flat{Fiber::Kind::Flat, 1.0};
  std::vector<GeometryPair> pairs;
  pairs.push_back({make_chart2("euclidean2"), make_chart3("euclidean3")});
  pairs.push_back({make_chart2("sphere2", {{"rho", 1.0}}),
                   make_chart3("product3", {{"c", 1.0}}, nullptr, &sph)});
  pairs.push_back({make_chart2("hyperbolic2", {{"rho", 1.0}}),
                   make_chart3("warped3", {}, &wexp, &sph)});
  pairs.push_back({make_chart2("warped2", {}, &wcosh),
                   make_chart3("warped3", {}, &waff, &flat)});
  pairs.push_back({make_chart2("sphere2", {{"rho", 2.0}}), make_chart3("euclidean3")});

  double worst_ratio = 1.0;
  int count = 0;
  bool ok = true;
  while (count < 50) {
    const GeometryPair& gp = pairs[count % pairs.size()];
    V2 x{{0, 0}};
    V3 xh{{0, 0, 0}};
    for (int i = 0; i < 2; ++i)
      x[i] = 0.5 * (gp.M.domain.lo[i] + gp.M.domain.hi[i]) +
             0.3 * uni(rng) * (gp.M.domain.hi[i] - gp.M.domain.lo[i]);
    for (int i = 0; i < 3; ++i)
      xh[i] = 0.5 * (gp.Mh.domain.lo[i] + gp.Mh.domain.hi[i]) +
              0.3 * uni(rng) * (gp.Mh.domain.hi[i] - gp.Mh.domain.lo[i]);
    RollingState q = make_state(gp, x, xh, random_isometry(rng));
    QChart chart(gp, q);
    Mat<double, 8, 8> B = basis_matrix(chart, q);
    Eigen::Matrix<double, 8, 8> m;
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) m(i, j) = B(i, j);
    Eigen::JacobiSVD<Eigen::Matrix<double, 8, 8>> svd(m);
    double ratio = svd.singularValues()(7) / svd.singularValues()(0);
    worst_ratio = std::min(worst_ratio, ratio);
    ok = ok && ratio > 1e-6;
    ++count;
  }
  report(1, "state-space dimension 8 at 50 random states", ok,
         "worst sigma_min/sigma_max = " + fmt(worst_ratio));
}

// 2 -------------------------------------------------------------------------
void criterion2() {
  double worst_slip = 0, worst_spin = 0, worst_geo = 0;
  for (const char* name : {"case_i", "case_iii_generic", "ss12_exp"}) {
    BuiltScenario s = build_geometry(scenario_by_name(name));
    std::mt19937_64 rng(s.cfg.seed + 1);
    CurveFn2 curve = random_curve(s.q0.x, rng, 0.35);
    Trajectory traj = roll_along(*s.gp, s.q0, curve, 1.0, 1e-3);
    worst_slip = std::max(worst_slip, noslip_residual(*s.gp, traj, curve));
    DenseCurve<3> mh = traj.mhat_curve(*s.gp, curve);
    M32 oracle = double_transport_oracle(*s.gp, s.q0, curve, mh.as_fn(), 1.0, 1e-3);
    worst_spin = std::max(worst_spin, frobenius_norm(traj.back().A - oracle));
    Development dev =
        develop_geodesic(*s.gp, s.q0, V2{{std::cos(0.6), std::sin(0.6)}}, 0.5, 1e-3);
    DenseCurve<3> devh = dev.traj.mhat_curve(*s.gp, dev.base.as_fn());
    worst_geo = std::max(worst_geo, geodesic_residual(s.gp->Mh, devh));
  }
  bool ok = worst_slip < 1e-9 && worst_spin < 1e-6 && worst_geo < 1e-6;
  report(2, "rolling correctness (no-slip, transport oracle, geodesic image)", ok,
         "slip " + fmt(worst_slip) + ", transport " + fmt(worst_spin) + ", geodesic " +
             fmt(worst_geo));
}

// 3 -------------------------------------------------------------------------
void criterion3() {
  bool ok = true;
  std::string detail;
  struct Expect {
    const char* name;
    int rank;
    bool upper;
  };
  for (auto [name, expected, upper] : {Expect{"case_i", 2, false}, Expect{"case_ii", 5, false},
                                       Expect{"case_iii_matched", 7, false},
                                       Expect{"case_iii_generic", 7, false},
                                       Expect{"ss12_exp", 6, true}}) {
    BuiltScenario s = build_geometry(scenario_by_name(name));
    RankReport rep = orbit_dimension(*s.gp, s.q0, 4, 1e-7);
    bool match = upper ? rep.rank <= expected : rep.rank == expected;
    ok = ok && match && rep.confident;
    detail += std::string(name) + "=" + std::to_string(rep.rank) + "(gap " +
              fmt(rep.gap_ratio) + ") ";
    if (std::string(name) == "case_ii") {
      ImageRankReport img = mhat_image_rank(*s.gp, s.q0, rep.family);
      ok = ok && img.rank == 2 && img.max_z_component < 1e-6;
      detail += "image=" + std::to_string(img.rank) + " ";
    }
  }
  report(3, "orbit classification with confident gaps", ok, detail);
}

// 4 -------------------------------------------------------------------------
void criterion4() {
  BuiltScenario s3 = build_geometry(scenario_by_name("case_iii_matched"));
  std::mt19937_64 rng(s3.cfg.seed + 2);
  double alpha_worst = 0;
  for (int i = 0; i < 10; ++i) {
    CurveFn2 c = random_curve(s3.q0.x, rng, 0.4);
    alpha_worst = std::max(alpha_worst, alpha_drift(*s3.gp, roll_along(*s3.gp, s3.q0, c, 1.0, 1e-3)));
  }
  BuiltScenario ss = build_geometry(scenario_by_name("ss12_exp"));
  std::mt19937_64 rng2(ss.cfg.seed + 3);
  double ui_worst = 0;
  for (int i = 0; i < 10; ++i) {
    CurveFn2 c = random_curve(ss.q0.x, rng2, 0.3);
    ui_worst = std::max(ui_worst, ui_drift(*ss.gp, roll_along(*ss.gp, ss.q0, c, 0.5, 1e-3)));
  }
  const GeometryPair& g3 = *s3.gp;
  BracketFamily fam3 = bracket_family(g3, s3.q0, 4);
  auto resa = annihilation_residuals(g3, s3.q0, fam3, [&g3](const RollingState& q) {
    return product_panel(g3, q).alpha;
  });
  const GeometryPair& gs = *ss.gp;
  BracketFamily fams = bracket_family(gs, ss.q0, 4);
  auto resu = annihilation_residuals(gs, ss.q0, fams, [&gs](const RollingState& q) {
    return *product_panel(gs, q).U;
  });
  auto resi = annihilation_residuals(gs, ss.q0, fams, [&gs](const RollingState& q) {
    return product_panel(gs, q).I;
  });
  double ann = 0;
  for (double r : resa) ann = std::max(ann, r);
  for (double r : resu) ann = std::max(ann, r);
  for (double r : resi) ann = std::max(ann, r);
  bool ok = alpha_worst < 1e-6 && ui_worst < 1e-6 && ann < 1e-5;
  report(4, "conserved quantities (alpha; U, I; bracket-family annihilation)", ok,
         "alpha drift " + fmt(alpha_worst) + ", (U,I) drift " + fmt(ui_worst) +
             ", max directional derivative " + fmt(ann));
}

// 5 -------------------------------------------------------------------------
void criterion5() {
  auto rows = run_verify_tables("", 1e-4, 10, 20260809);
  bool ok = true;
  int identities = 0, skipped_rows = 0;
  double worst = 0;
  for (const auto& r : rows) {
    ++identities;
    if (r.states == 0) {
      ++skipped_rows;
      continue;
    }
    ok = ok && r.pass;
    worst = std::max(worst, r.max_rel_err);
    if (!r.pass)
      printf("       failing identity: %s#%d %s rel_err %.3g\n", r.table.c_str(), r.index,
             r.name.c_str(), r.max_rel_err);
  }
  report(5, "bracket/derivative tables and curvature components", ok,
         std::to_string(identities) + " identities, worst rel err " + fmt(worst) + ", " +
             std::to_string(skipped_rows) + " fully skipped");
}

// 6 -------------------------------------------------------------------------
void criterion6() {
  BuiltScenario s3 = build_geometry(scenario_by_name("case_iii_matched"));
  double worst_matched = 0;
  {
    std::mt19937_64 rng(7);
    std::vector<RollingState> states{s3.q0};
    for (int i = 0; i < 3; ++i) {
      CurveFn2 c = random_curve(s3.q0.x, rng, 0.3);
      states.push_back(roll_along(*s3.gp, s3.q0, c, 0.5, 1e-3).back());
    }
    for (const auto& q : states) {
      CurvaturePanel p = curvature_panel(*s3.gp, q);
      EigenStructure es = eigen_structure(*s3.gp, q);
      double simple = -(p.K * p.K + *p.r * *p.r) / p.K;
      worst_matched = std::max(worst_matched, std::abs(es.eigenvalues[0] - simple));
      worst_matched = std::max(worst_matched, std::abs(es.eigenvalues[1]));
      worst_matched = std::max(worst_matched, std::abs(es.eigenvalues[2]));
    }
  }
  BuiltScenario ss = build_geometry(scenario_by_name("ss12_exp"));
  double worst_warped = 0;
  {
    std::mt19937_64 rng(8);
    std::vector<RollingState> states{ss.q0};
    for (int i = 0; i < 3; ++i) {
      CurveFn2 c = random_curve(ss.q0.x, rng, 0.25);
      states.push_back(roll_along(*ss.gp, ss.q0, c, 0.3, 1e-3).back());
    }
    for (const auto& q : states) {
      CurvaturePanel p = curvature_panel(*ss.gp, q);
      EigenStructure es = eigen_structure(*ss.gp, q);
      std::array<double, 3> expect{{-p.K, -p.K, *p.lambda}};
      std::sort(expect.begin(), expect.end());
      for (int i = 0; i < 3; ++i)
        worst_warped = std::max(worst_warped, std::abs(es.eigenvalues[i] - expect[i]));
    }
  }
  bool ok = worst_matched < 1e-8 && worst_warped < 1e-6;
  report(6, "spectral structure of the curvature operator", ok,
         "matched " + fmt(worst_matched) + ", warped " + fmt(worst_warped));
}

// 7 -------------------------------------------------------------------------
void criterion7() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> uni(-1, 1);
  double worst = 0;
  {
    WarpFn wexp = make_warp("exp", {1.0, 0.7});
    WarpFn wcosh = make_warp("cosh", {1.0, 0.9});
    Fiber sph{Fiber::Kind::Sphere, 1.0};
    Chart2 m_exp = make_chart2("warped2", {{"rmin", -1.5}, {"rmax", 1.5}}, &wexp);
    Chart2 m_cosh = make_chart2("warped2", {{"rmin", -1.5}, {"rmax", 1.5}}, &wcosh);
    Chart3 mh = make_chart3("warped3", {{"rmin", -1.5}, {"rmax", 1.5}}, &wexp, &sph);
    for (int i = 0; i < 10; ++i) {
      double a = M_PI * uni(rng);
      V2 v{{std::cos(a), std::sin(a)}};
      worst = std::max(worst, warped_geodesic_invariant_drift(m_exp, V2{{0.1, 0.2}}, v, 0.4, 1e-3));
      worst = std::max(worst, warped_geodesic_invariant_drift(m_cosh, V2{{0.0, 0.1}}, v, 0.4, 1e-3));
      double b = 0.5 * M_PI * uni(rng);
      V3 vh{{std::sin(b), std::cos(b) * std::cos(a), std::cos(b) * std::sin(a)}};
      worst = std::max(worst,
                       warped_geodesic_invariant_drift(mh, V3{{0.0, 1.2, 0.3}}, vh, 0.4, 1e-3));
    }
  }
  double ss_worst = 0;
  for (const char* name : {"ss12_exp", "ss12_affine"}) {
    Ss12Residuals r = ss12_warping_residuals(scenario_by_name(name), 41);
    ss_worst = std::max({ss_worst, r.first_order, r.second_order});
  }
  bool ok = worst < 1e-7 && ss_worst < 1e-6;
  report(7, "warped geodesic invariant and warping-function relations", ok,
         "invariant drift " + fmt(worst) + ", construction residual " + fmt(ss_worst));
}

// 8 -------------------------------------------------------------------------
void criterion8() {
  BuiltScenario s = build_geometry(scenario_by_name("case_iii_matched"));
  std::mt19937_64 rng(s.cfg.seed + 4);
  CurveFn2 curve = random_curve(s.q0.x, rng, 0.4);
  auto terminal = [&](double h) { return roll_along(*s.gp, s.q0, curve, 1.0, h).back(); };
  RollingState ref = terminal(1.25e-4);
  auto err = [&](const RollingState& a) {
    return std::max(norm(a.xh - ref.xh), frobenius_norm(a.A - ref.A));
  };
  double e1 = err(terminal(2e-3)), e2 = err(terminal(1e-3));
  double factor = e1 / std::max(e2, 1e-300);
  report(8, "fourth-order convergence of the roll integrator", factor >= 8.0,
         "error ratio " + fmt(factor));
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  printf(failures == 0 ? "acceptance: all criteria pass\n"
                       : "acceptance: %d criterion(s) failing\n",
         failures);
  return failures == 0 ? 0 : 1;
}
