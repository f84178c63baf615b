#include <doctest.h>

#include <cmath>
#include <random>

#include "rolling/state_space.hpp"

using namespace rolling;

TEST_SUITE_BEGIN("state_space");

namespace {

GeometryPair flat_pair() {
  return {make_chart2("euclidean2"), make_chart3("euclidean3")};
}

GeometryPair generic_pair() {
  WarpFn w = make_warp("exp", {1.0, 0.6});
  Fiber fib{Fiber::Kind::Sphere, 1.1};
  GeometryPair gp;
  gp.M = make_chart2("sphere2", {{"rho", 1.2}});
  gp.Mh = make_chart3("warped3", {{"rmin", -2.0}, {"rmax", 2.0}}, &w, &fib);
  return gp;
}

RollingState generic_state(const GeometryPair& gp, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  double w = gauss(rng), x = gauss(rng), y = gauss(rng), z = gauss(rng);
  double n = std::sqrt(w * w + x * x + y * y + z * z);
  w /= n; x /= n; y /= n; z /= n;
  M32 A{};
  A(0, 0) = 1 - 2 * (y * y + z * z);
  A(0, 1) = 2 * (x * y - w * z);
  A(1, 0) = 2 * (x * y + w * z);
  A(1, 1) = 1 - 2 * (x * x + z * z);
  A(2, 0) = 2 * (x * z - w * y);
  A(2, 1) = 2 * (y * z + w * x);
  return make_state(gp, V2{{1.3, 0.2}}, V3{{0.2, 1.4, 0.3}}, A);
}

}  // namespace

TEST_CASE("make_state accepts, projects, rejects") {
  GeometryPair gp = flat_pair();
  M32 A{};
  A(0, 0) = 1;
  A(1, 1) = 1;
  RollingState q = make_state(gp, V2{{0, 0}}, V3{{0, 0, 0}}, A);
  CHECK(norm(q.zhat() - V3{{0, 0, 1}}) < 1e-14);

  // A^T A = diag(1, 1 + 1e-8) gets polar-projected
  M32 A2 = A;
  A2(1, 1) = std::sqrt(1 + 1e-8);
  RollingState q2 = make_state(gp, V2{{0, 0}}, V3{{0, 0, 0}}, A2);
  CHECK(isometry_deviation(q2.A) < 1e-12);

  // columns of norm 2 are rejected
  M32 A3 = A;
  A3(0, 0) = 2;
  A3(1, 1) = 2;
  CHECK_THROWS_AS(make_state(gp, V2{{0, 0}}, V3{{0, 0, 0}}, A3), NotAnIsometry);
}

TEST_CASE("ns_lift slots and vertical decomposition") {
  GeometryPair gp = generic_pair();
  RollingState q = generic_state(gp, 3);

  // v = X, vh = AX realizes the first rolling basis vector
  QTangent t = ns_lift(gp, q, V2{{1, 0}}, q.A * V2{{1, 0}});
  CHECK(t.c[0] == doctest::Approx(1.0));
  for (int i = 1; i < 8; ++i) CHECK(std::abs(t.c[i]) < 1e-14);

  QTangent tz = ns_lift(gp, q, V2{{0, 0}}, q.zhat());
  CHECK(tz.c[4] == doctest::Approx(1.0));
  for (int i : {0, 1, 2, 3, 5, 6, 7}) CHECK(std::abs(tz.c[i]) < 1e-14);

  // vertical basis round trips
  V3 z = q.zhat();
  M32 B{};
  B.set_col(0, q.A.col(1));
  B.set_col(1, -q.A.col(0));  // A(X^Y)
  QTangent v = vertical(gp, q, B);
  CHECK(v.c[5] == doctest::Approx(1.0));
  CHECK(std::abs(v.c[6]) + std::abs(v.c[7]) < 1e-13);

  M32 B2{};
  B2.set_col(0, z);  // theta_X (x) Z
  QTangent v2 = vertical(gp, q, B2);
  CHECK(v2.c[6] == doctest::Approx(1.0));

  // random compatible B reconstructs exactly
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> uni(-1, 1);
  for (int i = 0; i < 10; ++i) {
    double c6 = uni(rng), c7 = uni(rng), c8 = uni(rng);
    M32 Br{};
    Br.set_col(0, q.A.col(1) * c6 + z * c7);
    Br.set_col(1, -(q.A.col(0) * c6) + z * c8);
    QTangent vr = vertical(gp, q, Br);
    M32 back = vertical_matrix(q, vr);
    CHECK(frobenius_norm(back - Br) < 1e-12);
  }

  // incompatible B is rejected
  M32 bad{};
  bad.set_col(0, q.A.col(0));
  CHECK_THROWS_AS(vertical(gp, q, bad), HypothesesViolated);
}

TEST_CASE("chart round trip and rank 8 of the moving basis") {
  GeometryPair gp = generic_pair();
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> uni(-1, 1);
  for (int trial = 0; trial < 5; ++trial) {
    RollingState q0 = generic_state(gp, 100 + trial);
    QChart chart(gp, q0);
    V8 y{};
    for (int i = 0; i < 8; ++i) y[i] = 0.05 * uni(rng);
    RollingState q = chart.state(y);
    V8 back = chart.coords(q);
    CHECK(norm(back - y) < 1e-10);

    // the rotation coordinate is capped to keep the chart injective
    V8 far{};
    far[5] = 1.7;
    CHECK_THROWS_AS(chart.state(far), ChartRadiusExceeded);

    Mat<double, 8, 8> B = basis_matrix(chart, q0);
    // smallest singular value via the 8x8 Gram determinant route is fragile;
    // use a crude power check on B^T B instead: rank 8 iff invertible
    // (full SVD checks live in the orbit-rank tests)
    double det = 1.0;
    // LU by hand would be overkill: check via solving 8 unit systems
    for (int j = 0; j < 8; ++j) {
      V8 e{};
      e[j] = 1;
      QTangent t = from_chart_velocity(chart, q0, e);
      V8 rec{};
      for (int k = 0; k < 8; ++k) {
        QTangent b;
        b.c[k] = 1;
        rec += chart_velocity(chart, q0, b) * t.c[k];
      }
      CHECK(norm(rec - e) < 1e-9);
    }
    (void)det;
  }
}

TEST_CASE("flat/flat: the no-spinning lift keeps the coefficient matrix constant") {
  GeometryPair gp = flat_pair();
  M32 A{};
  A(0, 0) = std::cos(0.5);
  A(1, 0) = std::sin(0.5);
  A(0, 1) = -std::sin(0.5) * std::cos(0.2);
  A(1, 1) = std::cos(0.5) * std::cos(0.2);
  A(2, 1) = std::sin(0.2);
  RollingState q = make_state(gp, V2{{0.1, 0.2}}, V3{{0, 0.1, 0.2}}, A);
  StateVelocity sv = realize(gp, q, ns_lift(gp, q, V2{{0.7, -0.2}}, V3{{0.1, 0.4, 0.2}}));
  CHECK(frobenius_norm(sv.dA) < 1e-12);
}

TEST_CASE("vertical tangents project to zero on both factors") {
  GeometryPair gp = generic_pair();
  RollingState q = generic_state(gp, 23);
  for (int slot : {5, 6, 7}) {
    QTangent t;
    t.c[slot] = 1;
    StateVelocity sv = realize(gp, q, t);
    CHECK(norm(sv.dx) < 1e-14);
    CHECK(norm(sv.dxh) < 1e-14);
  }
  // and the projection of the rolling part is the identity on T_x M
  M22 E;
  std::array<M22, 2> dE;
  chart2_frame(gp.M, q.x, E, dE);
  for (int slot : {0, 1}) {
    QTangent t;
    t.c[slot] = 1;
    StateVelocity sv = realize(gp, q, t);
    V2 f = inverse(E) * sv.dx;
    CHECK(f[slot] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(f[1 - slot]) < 1e-12);
  }
}

TEST_CASE("jet realization of the rolling lifts matches the double path") {
  GeometryPair gp = generic_pair();
  RollingState q0 = generic_state(gp, 31);
  QChart chart(gp, q0);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> uni(-0.04, 0.04);
  for (int which : {0, 1}) {
    for (int trial = 0; trial < 4; ++trial) {
      V8 y{};
      for (int i = 0; i < 8; ++i) y[i] = uni(rng);
      // double path
      V8 direct = lr_field_chart(gp, chart.q0.x, chart.q0.xh, chart.R0, y, which);
      RollingState q = chart.state(y);
      QTangent lr;
      lr.c[which] = 1;
      V8 via_realize = chart_velocity(chart, q, lr);
      CHECK(norm(direct - via_realize) < 1e-10);
    }
  }
}

TEST_SUITE_END();
