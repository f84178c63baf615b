#include "rolling/state_space.hpp"

#include <Eigen/Dense>

#include "rolling/errors.hpp"

namespace rolling {

double isometry_deviation(const M32& A) {
  M22 s{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) s(i, j) = dot(A.col(i), A.col(j)) - (i == j ? 1.0 : 0.0);
  return frobenius_norm(s);
}

M32 polar_project(const M32& A) {
  // A (A^T A)^{-1/2} with the closed-form 2x2 inverse square root
  M22 s{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) s(i, j) = dot(A.col(i), A.col(j));
  double det = s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0);
  double sq = std::sqrt(det);
  double t = std::sqrt(s(0, 0) + s(1, 1) + 2 * sq);
  M22 sqrtS = s;
  sqrtS(0, 0) += sq;
  sqrtS(1, 1) += sq;
  sqrtS = sqrtS * (1.0 / t);
  return A * inverse(sqrtS);
}

RollingState make_state(const GeometryPair& gp, const V2& x, const V3& xh, const M32& A) {
  gp.M.require_interior(x);
  gp.Mh.require_interior(xh);
  double dev = isometry_deviation(A);
  if (dev >= 1e-6) throw NotAnIsometry(dev);
  return {x, xh, polar_project(A)};
}

QTangent ns_lift(const GeometryPair&, const RollingState& q, const V2& v_frame,
                 const V3& vh_frame) {
  // L_NS(v, vh) = L_R(v) + L_NS(0, vh - A v)
  QTangent t;
  t.c[0] = v_frame[0];
  t.c[1] = v_frame[1];
  V3 w = vh_frame - q.A * v_frame;
  t.c[2] = dot(w, q.A.col(0));
  t.c[3] = dot(w, q.A.col(1));
  t.c[4] = dot(w, q.zhat());
  return t;
}

QTangent vertical(const GeometryPair&, const RollingState& q, const M32& B) {
  M22 compat{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      compat(i, j) = dot(q.A.col(i), B.col(j)) + dot(B.col(i), q.A.col(j));
  if (frobenius_norm(compat) > 1e-8)
    throw HypothesesViolated("vertical generator violates A^T B + B^T A = 0");
  V3 z = q.zhat();
  QTangent t;
  t.c[5] = 0.5 * (dot(B.col(0), q.A.col(1)) - dot(B.col(1), q.A.col(0)));
  t.c[6] = dot(B.col(0), z);
  t.c[7] = dot(B.col(1), z);
  return t;
}

M32 vertical_matrix(const RollingState& q, const QTangent& t) {
  V3 z = q.zhat();
  M32 B{};
  // c6 * A(X^Y) + c7 * theta_X (x) Z + c8 * theta_Y (x) Z
  B.set_col(0, q.A.col(1) * t.c[5] + z * t.c[6]);
  B.set_col(1, -(q.A.col(0) * t.c[5]) + z * t.c[7]);
  return B;
}

StateVelocity realize(const GeometryPair& gp, const RollingState& q, const QTangent& t) {
  // horizontal part is one combined no-spinning lift
  V2 vf{{t.c[0], t.c[1]}};
  V3 vhf = q.A * vf + q.A.col(0) * t.c[2] + q.A.col(1) * t.c[3] + q.zhat() * t.c[4];

  M22 E;
  std::array<M22, 2> dE;
  chart2_frame(gp.M, q.x, E, dE);
  M33 Eh;
  std::array<M33, 3> dEh;
  chart3_frame(gp.Mh, q.xh, Eh, dEh);

  StateVelocity sv;
  sv.dx = E * vf;
  sv.dxh = Eh * vhf;
  sv.dA = ns_lift_dA(gp, q.x, q.xh, q.A, sv.dx, sv.dxh);
  sv.dA += vertical_matrix(q, t);
  return sv;
}

QChart::QChart(const GeometryPair& pair, const RollingState& center) : gp(&pair), q0(center) {
  V3 z = center.zhat();
  for (int i = 0; i < 3; ++i) {
    R0(i, 0) = center.A(i, 0);
    R0(i, 1) = center.A(i, 1);
    R0(i, 2) = z[i];
  }
}

RollingState QChart::state(const V8& y) const {
  V3 th{{y[5], y[6], y[7]}};
  if (norm(th) > theta_cap) throw ChartRadiusExceeded("rotation coordinate beyond chart radius");
  RollingState q;
  q.x = V2{{q0.x[0] + y[0], q0.x[1] + y[1]}};
  q.xh = V3{{q0.xh[0] + y[2], q0.xh[1] + y[3], q0.xh[2] + y[4]}};
  gp->M.require_interior(q.x);
  gp->Mh.require_interior(q.xh);
  M33 R = so3_exp(th) * R0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j) q.A(i, j) = R(i, j);
  return q;
}

V8 QChart::coords(const RollingState& q) const {
  M33 R;
  V3 z = q.zhat();
  for (int i = 0; i < 3; ++i) {
    R(i, 0) = q.A(i, 0);
    R(i, 1) = q.A(i, 1);
    R(i, 2) = z[i];
  }
  V3 th = so3_log(R * R0.transposed());
  if (norm(th) > theta_cap) throw ChartRadiusExceeded("state beyond chart radius");
  return V8{{q.x[0] - q0.x[0], q.x[1] - q0.x[1], q.xh[0] - q0.xh[0], q.xh[1] - q0.xh[1],
             q.xh[2] - q0.xh[2], th[0], th[1], th[2]}};
}

V8 chart_velocity(const QChart& ch, const RollingState& q, const StateVelocity& sv) {
  M33 R;
  V3 z = q.zhat();
  for (int i = 0; i < 3; ++i) {
    R(i, 0) = q.A(i, 0);
    R(i, 1) = q.A(i, 1);
    R(i, 2) = z[i];
  }
  V3 th = so3_log(R * ch.R0.transposed());
  V3 dz = cross(sv.dA.col(0), q.A.col(1)) + cross(q.A.col(0), sv.dA.col(1));
  M33 dR;
  for (int i = 0; i < 3; ++i) {
    dR(i, 0) = sv.dA(i, 0);
    dR(i, 1) = sv.dA(i, 1);
    dR(i, 2) = dz[i];
  }
  V3 thdot = so3_left_jacobian_inv(th) * axial(dR * R.transposed());
  return V8{{sv.dx[0], sv.dx[1], sv.dxh[0], sv.dxh[1], sv.dxh[2], thdot[0], thdot[1], thdot[2]}};
}

V8 chart_velocity(const QChart& ch, const RollingState& q, const QTangent& t) {
  return chart_velocity(ch, q, realize(*ch.gp, q, t));
}

Mat<double, 8, 8> basis_matrix(const QChart& ch, const RollingState& q) {
  Mat<double, 8, 8> B;
  for (int j = 0; j < 8; ++j) {
    QTangent e;
    e.c[j] = 1.0;
    V8 col = chart_velocity(ch, q, e);
    for (int i = 0; i < 8; ++i) B(i, j) = col[i];
  }
  return B;
}

std::function<V8(const V8&)> push_to_chart(const QChart& ch, const Field& field) {
  return [&ch, field](const V8& y) {
    RollingState q = ch.state(y);
    return chart_velocity(ch, q, field(q));
  };
}

QTangent from_chart_velocity(const QChart& ch, const RollingState& q, const V8& ydot) {
  Mat<double, 8, 8> B = basis_matrix(ch, q);
  Eigen::Matrix<double, 8, 8> eb;
  Eigen::Matrix<double, 8, 1> ev;
  for (int i = 0; i < 8; ++i) {
    ev(i) = ydot[i];
    for (int j = 0; j < 8; ++j) eb(i, j) = B(i, j);
  }
  Eigen::Matrix<double, 8, 1> sol = eb.partialPivLu().solve(ev);
  QTangent t;
  for (int i = 0; i < 8; ++i) t.c[i] = sol(i);
  return t;
}

}  // namespace rolling
