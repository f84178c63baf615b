#include <doctest.h>

#include <cmath>
#include <random>

#include "rolling/brackets.hpp"
#include "rolling/scenarios.hpp"

using namespace rolling;

TEST_SUITE_BEGIN("invariants");

namespace {

RollingState rotate_source_frame(const GeometryPair& gp, const RollingState& q, double psi) {
  double c = std::cos(psi), s = std::sin(psi);
  M32 A{};
  A.set_col(0, q.A.col(0) * c + q.A.col(1) * s);
  A.set_col(1, -(q.A.col(0) * s) + q.A.col(1) * c);
  return make_state(gp, q.x, q.xh, A);
}

}  // namespace

TEST_CASE("flat target: all curvature functions vanish, phi undefined") {
  GeometryPair gp{make_chart2("sphere2", {{"rho", 1.0}}), make_chart3("euclidean3")};
  M32 A{};
  A(0, 0) = 1;
  A(1, 1) = 1;
  RollingState q = make_state(gp, V2{{1.1, 0.0}}, V3{{0, 0, 0}}, A);
  CurvaturePanel p = curvature_panel(gp, q);
  CHECK(std::abs(p.sigma1) < 1e-10);
  CHECK(std::abs(p.sigma3) < 1e-10);
  CHECK(std::abs(p.pi_x) < 1e-12);
  CHECK(!p.phi.has_value());
  CHECK(p.K == doctest::Approx(1.0).epsilon(1e-7));
  CHECK_THROWS_AS(eval_scalar(gp, q, ScalarId::Phi), HypothesesViolated);
  CHECK_THROWS_AS(rolbar(gp, q), HypothesesViolated);

  // Rol for M = S^2(1) against flat: rows (0,-1),(1,0),(0,0) in the moving frame
  M32 rol = rol_tensor(gp, q);
  CHECK(dot(rol.col(0), q.A.col(1)) == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(dot(rol.col(1), q.A.col(0)) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(dot(rol.col(0), q.zhat())) < 1e-10);
}

TEST_CASE("product target: sigma = alpha^2 K_N, Pi_i = -alpha K_N tau_i, orthonormality") {
  BuiltScenario s = build_geometry(scenario_by_name("case_iii_generic"));
  const GeometryPair& gp = *s.gp;
  double KN = 4.0;
  std::mt19937_64 rng(3);
  std::vector<RollingState> states{s.q0};
  for (int i = 0; i < 4; ++i) {
    CurveFn2 c = random_curve(s.q0.x, rng, 0.3);
    states.push_back(roll_along(gp, s.q0, c, 0.4, 1e-3).back());
  }
  for (const auto& q : states) {
    CurvaturePanel p = curvature_panel(gp, q);
    ProductPanel pp = product_panel(gp, q);
    CHECK(p.sigma3 == doctest::Approx(pp.alpha * pp.alpha * KN).epsilon(1e-8));
    CHECK(p.pi_x == doctest::Approx(-pp.alpha * KN * pp.tau1).epsilon(1e-8));
    CHECK(p.pi_y == doctest::Approx(-pp.alpha * KN * pp.tau2).epsilon(1e-8));
    CHECK(pp.tau1 * pp.tau1 + pp.tau2 * pp.tau2 + pp.alpha * pp.alpha ==
          doctest::Approx(1.0).epsilon(1e-10));
    // Theta + alpha Psi = K
    CHECK(*pp.Theta + pp.alpha * *pp.Psi == doctest::Approx(p.K).epsilon(1e-10));
  }
}

TEST_CASE("fiber-aligned start: the normal is the base direction") {
  BuiltScenario s = build_geometry(scenario_by_name("case_i"));
  ProductPanel pp = product_panel(*s.gp, s.q0);
  CHECK(std::abs(std::abs(pp.alpha) - 1.0) < 1e-12);
  CHECK(std::abs(pp.tau1) < 1e-12);
  CHECK(std::abs(pp.tau2) < 1e-12);
}

TEST_CASE("constant-curvature target: beta vanishes") {
  BuiltScenario s = build_geometry(scenario_by_name("case_iii_generic"));
  CHECK(std::abs(beta_invariant(*s.gp, s.q0)) < 1e-8);
}

TEST_CASE("panel trace identity and polar pair") {
  SampleContext ctx = sample_states(SampleKind::KNotSigma, 5, 99);
  for (const auto& q : ctx.states) {
    CurvaturePanel p = curvature_panel(*ctx.gp, q);
    REQUIRE(p.phi.has_value());
    CHECK(*p.sigma1_t + *p.sigma2_t == doctest::Approx(p.sigma1 + p.sigma2).epsilon(1e-10));
    CHECK(*p.r * std::cos(*p.phi) == doctest::Approx(p.pi_x).epsilon(1e-10));
    CHECK(*p.r * std::sin(*p.phi) == doctest::Approx(p.pi_y).epsilon(1e-10));
  }
}

TEST_CASE("frame-rotation covariance of the panel") {
  SampleContext ctx = sample_states(SampleKind::KNotSigma, 3, 123);
  for (const auto& q : ctx.states) {
    CurvaturePanel p = curvature_panel(*ctx.gp, q);
    for (double psi : {0.3, 1.1}) {
      RollingState qr = rotate_source_frame(*ctx.gp, q, psi);
      CurvaturePanel pr = curvature_panel(*ctx.gp, qr);
      CHECK(pr.K == doctest::Approx(p.K).epsilon(1e-8));
      CHECK(pr.sigma3 == doctest::Approx(p.sigma3).epsilon(1e-8));
      CHECK(*pr.r == doctest::Approx(*p.r).epsilon(1e-8));
      CHECK(*pr.omega == doctest::Approx(*p.omega).epsilon(1e-8));
      double shift = std::remainder(*pr.phi - (*p.phi - psi), 2 * M_PI);
      CHECK(std::abs(shift) < 1e-8);
      // the globally defined combination Pi_X^2 + Pi_Y^2
      CHECK(pr.pi_x * pr.pi_x + pr.pi_y * pr.pi_y ==
            doctest::Approx(p.pi_x * p.pi_x + p.pi_y * p.pi_y).epsilon(1e-8));
    }
  }
}

TEST_CASE("rol tensor equals the two-sided assembly oracle") {
  SampleContext ctx = sample_states(SampleKind::Generic, 5, 44);
  const GeometryPair& gp = *ctx.gp;
  for (const auto& q : ctx.states) {
    M32 rol = rol_tensor(gp, q);
    // oracle: A R(X,Y) - Rhat(AX, AY) A assembled from the Riemann tensors
    M22 E;
    std::array<M22, 2> dE;
    chart2_frame(gp.M, q.x, E, dE);
    M33 Eh;
    std::array<M33, 3> dEh;
    chart3_frame(gp.Mh, q.xh, Eh, dEh);
    M33 Ehinv = inverse(Eh);
    // columns: value on X and on Y, in frame coefficients
    M32 oracle{};
    for (int j = 0; j < 2; ++j) {
      // A R(X,Y) E_j: R(X,Y)E_j on M in chart components
      V2 rxy = riemann_apply(gp.M, q.x, E.col(0), E.col(1), E.col(j));
      V2 rxy_frame = inverse(E) * rxy;
      V3 first = q.A * rxy_frame;
      // Rhat(AX, AY) A E_j
      V3 axc = Eh * q.A.col(0), ayc = Eh * q.A.col(1), ajc = Eh * q.A.col(j);
      V3 rh = riemann_apply(gp.Mh, q.xh, axc, ayc, ajc);
      V3 second = Ehinv * rh;
      oracle.set_col(j, first - second);
    }
    CHECK(frobenius_norm(rol - oracle) < 1e-7 * std::max(1.0, frobenius_norm(oracle)));
    // vertical compatibility A^T B + B^T A = 0
    M22 compat{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        compat(i, j) = dot(q.A.col(i), rol.col(j)) + dot(rol.col(i), q.A.col(j));
    CHECK(frobenius_norm(compat) < 1e-10);
  }
}

TEST_CASE("rolbar: Rol = -(K - sigma) Rolbar and compatibility") {
  SampleContext ctx = sample_states(SampleKind::KNotSigma, 5, 77);
  const GeometryPair& gp = *ctx.gp;
  for (const auto& q : ctx.states) {
    CurvaturePanel p = curvature_panel(gp, q);
    M32 rb = rolbar(gp, q);
    M32 rol = rol_tensor(gp, q);
    M32 expect = rb * (-(p.K - p.sigma3));
    CHECK(frobenius_norm(rol - expect) < 1e-8 * std::max(1.0, frobenius_norm(rol)));
    M22 compat{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        compat(i, j) = dot(q.A.col(i), rb.col(j)) + dot(rb.col(i), q.A.col(j));
    CHECK(frobenius_norm(compat) < 1e-10);
  }
}

TEST_CASE("condition panel closed forms against vertical flow differences") {
  SampleContext ctx = sample_states(SampleKind::KNotSigma, 4, 7);
  const GeometryPair& gp = *ctx.gp;
  for (const auto& q : ctx.states) {
    ConditionPanel cp = condition_panel(gp, q);
    CurvaturePanel p = curvature_panel(gp, q);
    // nu(A(X^Y)) phi = -1
    double nxy_phi = deriv_along(gp, as_field(gp, FieldId::NU_XY), ScalarId::Phi, q, 1e-4);
    CHECK(nxy_phi == doctest::Approx(-1.0).epsilon(1e-6));
    // closed forms vs finite differences
    Field nutyt = as_field(gp, FieldId::NU_TYt);
    double fd_c4 = *p.omega * deriv_along(gp, nutyt, ScalarId::Phi, q, 1e-4) - 1.0;
    double fd_c5 = deriv_along(gp, nutyt, ScalarId::Omega, q, 1e-4);
    CHECK(std::abs(cp.c4 - fd_c4) < 1e-5 * std::max(1.0, std::abs(fd_c4)));
    CHECK(std::abs(cp.c5 - fd_c5) < 1e-5 * std::max(1.0, std::abs(fd_c5)));
  }
}

TEST_CASE("eigen structure: flat target is identically zero") {
  GeometryPair gp{make_chart2("sphere2", {{"rho", 1.0}}), make_chart3("euclidean3")};
  M32 A{};
  A(0, 0) = 1;
  A(1, 1) = 1;
  RollingState q = make_state(gp, V2{{1.1, 0.0}}, V3{{0, 0, 0}}, A);
  EigenStructure es = eigen_structure(gp, q);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(es.eigenvalues[i]) < 1e-10);
  CHECK(es.multiplicity[0] == 3);
}

TEST_CASE("eigen structure of the matched product scenario") {
  BuiltScenario s = build_geometry(scenario_by_name("case_iii_matched"));
  CurvaturePanel p = curvature_panel(*s.gp, s.q0);
  EigenStructure es = eigen_structure(*s.gp, s.q0);
  REQUIRE(p.r.has_value());
  double expect = -(p.K * p.K + *p.r * *p.r) / p.K;
  CHECK(es.eigenvalues[0] == doctest::Approx(expect).epsilon(1e-8));
  CHECK(std::abs(es.eigenvalues[1]) < 1e-8);
  CHECK(std::abs(es.eigenvalues[2]) < 1e-8);
  CHECK(es.multiplicity[0] == 1);
  CHECK(es.multiplicity[1] == 2);
}

TEST_SUITE_END();
