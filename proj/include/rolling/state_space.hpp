#pragma once

// The rolling state space Q = Q(M, Mhat), its local charts, the moving-basis
// representation of tangent vectors, and the no-spinning lift / vertical
// constructors. A state stores the contact isometry A as a 3x2 array of
// orthonormal-frame coefficients, which makes A^T A = I the exact constraint
// and the normal Z_A a cross product of the columns.

#include <functional>
#include <type_traits>

#include "rolling/geometry.hpp"

namespace rolling {

struct GeometryPair {
  Chart2 M;
  Chart3 Mh;
};

struct RollingState {
  V2 x;
  V3 xh;
  M32 A;  // columns = frame coefficients of (AX, AY)
  V3 zhat() const { return cross(A.col(0), A.col(1)); }
};

// coefficients in the moving basis
// (L_R(X), L_R(Y), L_NS(AX), L_NS(AY), L_NS(Z),
//  nu(A(X^Y)), nu(theta_X (x) Z), nu(theta_Y (x) Z))
struct QTangent {
  V8 c{};
};

struct StateVelocity {
  V2 dx{};
  V3 dxh{};
  M32 dA{};
};

double isometry_deviation(const M32& A);
M32 polar_project(const M32& A);
RollingState make_state(const GeometryPair& gp, const V2& x, const V3& xh, const M32& A);

// ---------------------------------------------------------------------------
// scalar-generic lift core

template <class S>
void chart2_frame(const Chart2& c, const Vec<S, 2>& u, Mat<S, 2, 2>& E,
                  std::array<Mat<S, 2, 2>, 2>& dE) {
  if constexpr (std::is_same_v<S, double>)
    frame_and_derivs(c, default_frame_field(c), u, E, dE);
  else
    frame_diag(c, u, E, dE);
}
template <class S>
void chart3_frame(const Chart3& c, const Vec<S, 3>& u, Mat<S, 3, 3>& E,
                  std::array<Mat<S, 3, 3>, 3>& dE) {
  if constexpr (std::is_same_v<S, double>)
    frame_and_derivs(c, default_frame_field(c), u, E, dE);
  else
    frame_diag(c, u, E, dE);
}
template <class S>
Mat<S, 2, 2> chart2_gamma(const Chart2& c, const Vec<S, 2>& u, const Vec<S, 2>& v) {
  if constexpr (std::is_same_v<S, double>)
    return christoffel_dir(c, u, v);
  else
    return christoffel_dir_diag(c, u, v);
}
template <class S>
Mat<S, 3, 3> chart3_gamma(const Chart3& c, const Vec<S, 3>& u, const Vec<S, 3>& v) {
  if constexpr (std::is_same_v<S, double>)
    return christoffel_dir(c, u, v);
  else
    return christoffel_dir_diag(c, u, v);
}

// time derivative of the frame-coefficient matrix A(t) of the no-spinning
// lift through (v, vh), given in chart components
template <class S>
Mat<S, 3, 2> ns_lift_dA(const GeometryPair& gp, const Vec<S, 2>& x, const Vec<S, 3>& xh,
                        const Mat<S, 3, 2>& Af, const Vec<S, 2>& v_chart,
                        const Vec<S, 3>& vh_chart) {
  Mat<S, 2, 2> E;
  std::array<Mat<S, 2, 2>, 2> dE;
  chart2_frame(gp.M, x, E, dE);
  Mat<S, 3, 3> Eh;
  std::array<Mat<S, 3, 3>, 3> dEh;
  chart3_frame(gp.Mh, xh, Eh, dEh);
  Mat<S, 2, 2> Einv = inverse(E);
  Mat<S, 3, 3> Ehinv = inverse(Eh);

  Mat<S, 2, 2> dE_v{};
  for (int k = 0; k < 2; ++k) dE_v += dE[k] * v_chart[k];
  Mat<S, 3, 3> dEh_v{};
  for (int k = 0; k < 3; ++k) dEh_v += dEh[k] * vh_chart[k];

  Mat<S, 2, 2> Gm = chart2_gamma(gp.M, x, v_chart);
  Mat<S, 3, 3> Gh = chart3_gamma(gp.Mh, xh, vh_chart);

  Mat<S, 3, 2> dA = -(Ehinv * (dEh_v * Af)) - Ehinv * (Gh * (Eh * Af)) +
                    Af * (Einv * (Gm * E)) + Af * (Einv * dE_v);
  return dA;
}

// chart-coordinate velocity of the rolling lift L_R(E_which) at the state
// with chart coordinates y (chart centered at (x0, xh0, R0))
template <class S>
Vec<S, 8> lr_field_chart(const GeometryPair& gp, const V2& x0, const V3& xh0, const M33& R0,
                         const Vec<S, 8>& y, int which) {
  Vec<S, 2> x{{S(x0[0]) + y[0], S(x0[1]) + y[1]}};
  Vec<S, 3> xh{{S(xh0[0]) + y[2], S(xh0[1]) + y[3], S(xh0[2]) + y[4]}};
  Vec<S, 3> th{{y[5], y[6], y[7]}};
  Mat<S, 3, 3> R0s;
  for (int i = 0; i < 9; ++i) R0s.a[i] = S(R0.a[i]);
  Mat<S, 3, 3> R = so3_exp(th) * R0s;
  Mat<S, 3, 2> Af;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j) Af(i, j) = R(i, j);

  Mat<S, 2, 2> E;
  std::array<Mat<S, 2, 2>, 2> dE;
  chart2_frame(gp.M, x, E, dE);
  Mat<S, 3, 3> Eh;
  std::array<Mat<S, 3, 3>, 3> dEh;
  chart3_frame(gp.Mh, xh, Eh, dEh);

  Vec<S, 2> v_chart = E.col(which);
  Vec<S, 3> vh_frame = Af.col(which);
  Vec<S, 3> vh_chart = Eh * vh_frame;

  Mat<S, 3, 2> dA = ns_lift_dA(gp, x, xh, Af, v_chart, vh_chart);

  // complete to a rotation velocity and convert to exponential coordinates
  Vec<S, 3> a1 = Af.col(0), a2 = Af.col(1);
  Vec<S, 3> dz = cross(dA.col(0), a2) + cross(a1, dA.col(1));
  Mat<S, 3, 3> dR;
  for (int i = 0; i < 3; ++i) {
    dR(i, 0) = dA(i, 0);
    dR(i, 1) = dA(i, 1);
    dR(i, 2) = dz[i];
  }
  Mat<S, 3, 3> W = dR * R.transposed();
  Vec<S, 3> thdot = so3_left_jacobian_inv(th) * axial(W);

  Vec<S, 8> out;
  out[0] = v_chart[0];
  out[1] = v_chart[1];
  out[2] = vh_chart[0];
  out[3] = vh_chart[1];
  out[4] = vh_chart[2];
  out[5] = thdot[0];
  out[6] = thdot[1];
  out[7] = thdot[2];
  return out;
}

// ---------------------------------------------------------------------------
// moving-basis constructors and realization (double path)

// v, vh given in frame coefficients (X,Y) and (E1h,E2h,E3h)
QTangent ns_lift(const GeometryPair& gp, const RollingState& q, const V2& v_frame,
                 const V3& vh_frame);
// B in frame coefficients with A^T B + B^T A = 0
QTangent vertical(const GeometryPair& gp, const RollingState& q, const M32& B);
// reassemble the vertical part of a tangent as a 3x2 array
M32 vertical_matrix(const RollingState& q, const QTangent& t);

StateVelocity realize(const GeometryPair& gp, const RollingState& q, const QTangent& t);

// ---------------------------------------------------------------------------
// charts of Q

struct QChart {
  const GeometryPair* gp = nullptr;
  RollingState q0;
  M33 R0;          // completed rotation [A0 | Z0]
  double theta_cap = M_PI / 2;

  QChart() = default;
  QChart(const GeometryPair& pair, const RollingState& center);

  RollingState state(const V8& y) const;
  V8 coords(const RollingState& q) const;
};

V8 chart_velocity(const QChart& ch, const RollingState& q, const StateVelocity& sv);
V8 chart_velocity(const QChart& ch, const RollingState& q, const QTangent& t);

using Field = std::function<QTangent(const RollingState&)>;

// columns = chart velocities of the eight moving-basis fields
Mat<double, 8, 8> basis_matrix(const QChart& ch, const RollingState& q);
std::function<V8(const V8&)> push_to_chart(const QChart& ch, const Field& field);
QTangent from_chart_velocity(const QChart& ch, const RollingState& q, const V8& ydot);

}  // namespace rolling
