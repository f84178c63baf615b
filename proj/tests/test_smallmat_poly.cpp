#include <doctest.h>

#include <cmath>
#include <random>

#include "rolling/poly3.hpp"
#include "rolling/smallmat.hpp"

using namespace rolling;

TEST_SUITE_BEGIN("smallmat_poly");

TEST_CASE("so3 exp/log round trip") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(-0.8, 0.8);
  for (int i = 0; i < 50; ++i) {
    V3 th{{uni(rng), uni(rng), uni(rng)}};
    M33 R = so3_exp(th);
    // orthogonality
    M33 err = R * R.transposed() - M33::identity();
    CHECK(frobenius_norm(err) < 1e-12);
    V3 back = so3_log(R);
    CHECK(norm(back - th) < 1e-10);
  }
}

TEST_CASE("left Jacobian inverse matches finite differences of exp") {
  // Rdot R^T = [Jl(th) thdot]_x  =>  thdot = Jl^{-1} axial(Rdot R^T)
  V3 th{{0.3, -0.2, 0.15}};
  V3 thdot{{0.11, 0.07, -0.05}};
  double h = 1e-6;
  M33 Rp = so3_exp(th + thdot * h);
  M33 Rm = so3_exp(th - thdot * h);
  M33 Rdot = (Rp - Rm) * (0.5 / h);
  M33 R = so3_exp(th);
  V3 w = axial(Rdot * R.transposed());
  V3 rec = so3_left_jacobian_inv(th) * w;
  CHECK(norm(rec - thdot) < 1e-8);
}

TEST_CASE("poly3 reproduces derivatives of a closed form") {
  // f(y) = sin(y0) * exp(y1) + y2^3 / (1 + y3^2)
  Poly3 y0 = Poly3::variable(0, 0.3);
  Poly3 y1 = Poly3::variable(1, -0.2);
  Poly3 y2 = Poly3::variable(2, 0.5);
  Poly3 y3 = Poly3::variable(3, 0.1);
  Poly3 f = sin(y0) * exp(y1) + y2 * y2 * y2 / (1.0 + y3 * y3);

  double s = std::sin(0.3), c = std::cos(0.3), e = std::exp(-0.2);
  CHECK(f.value() == doctest::Approx(s * e + 0.125 / 1.01).epsilon(1e-14));

  std::array<uint8_t, 8> a{};
  a[0] = 1;
  CHECK(f.derivative(a) == doctest::Approx(c * e).epsilon(1e-13));
  a[0] = 2;
  CHECK(f.derivative(a) == doctest::Approx(-s * e).epsilon(1e-13));
  a[0] = 1;
  a[1] = 1;
  CHECK(f.derivative(a) == doctest::Approx(c * e).epsilon(1e-13));
  a = {};
  a[2] = 3;
  CHECK(f.derivative(a) == doctest::Approx(6.0 / 1.01).epsilon(1e-13));
  a = {};
  a[2] = 2;
  a[3] = 1;
  // d^3/dy2^2 dy3 [y2^3/(1+y3^2)] = 6 y2 * (-2 y3)/(1+y3^2)^2
  double expect = 6 * 0.5 * (-2 * 0.1) / (1.01 * 1.01);
  CHECK(f.derivative(a) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("poly3 sqrt and division consistency") {
  Poly3 y = Poly3::variable(4, 2.0);
  Poly3 r = sqrt(y) * sqrt(y) - y;
  for (double c : r.c) CHECK(std::abs(c) < 1e-13);
  Poly3 d = (1.0 / y) * y - 1.0;
  for (double c : d.c) CHECK(std::abs(c) < 1e-13);
}

TEST_SUITE_END();
