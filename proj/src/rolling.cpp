#include "rolling/rolling.hpp"

#include <cmath>

#include "rolling/errors.hpp"

namespace rolling {

namespace {

struct RollRhs {
  const GeometryPair& gp;
  const CurveFn2& gamma;

  void eval(double t, const V3& xh, const M32& Af, V3& dxh, M32& dAf) const {
    V2 x = gamma.pos(t);
    V2 gdot = gamma.vel(t);
    if (!gp.M.domain.contains(x)) throw DomainExit("base curve exits the chart domain", t);
    if (!gp.Mh.domain.contains(xh)) throw DomainExit("development exits the chart domain", t);
    M22 E;
    std::array<M22, 2> dE;
    chart2_frame(gp.M, x, E, dE);
    M33 Eh;
    std::array<M33, 3> dEh;
    chart3_frame(gp.Mh, xh, Eh, dEh);
    V2 gdot_frame = inverse(E) * gdot;
    dxh = Eh * (Af * gdot_frame);
    dAf = ns_lift_dA(gp, x, xh, Af, gdot, dxh);
  }
};

}  // namespace

Trajectory roll_along(const GeometryPair& gp, const RollingState& q0, const CurveFn2& gamma,
                      double T, double step) {
  V2 start = gamma.pos(0.0);
  if (norm(start - q0.x) > 1e-9)
    throw ConfigError("control curve does not start at the state's contact point");

  RollRhs rhs{gp, gamma};
  int n = std::max(1, int(std::ceil(std::abs(T) / step)));
  double h = T / n;

  Trajectory out;
  out.ts.push_back(0.0);
  out.states.push_back(q0);
  V3 xh = q0.xh;
  M32 Af = q0.A;
  for (int i = 0; i < n; ++i) {
    double t = i * h;
    V3 k1x, k2x, k3x, k4x;
    M32 k1a, k2a, k3a, k4a;
    rhs.eval(t, xh, Af, k1x, k1a);
    rhs.eval(t + h / 2, xh + k1x * (h / 2), Af + k1a * (h / 2), k2x, k2a);
    rhs.eval(t + h / 2, xh + k2x * (h / 2), Af + k2a * (h / 2), k3x, k3a);
    rhs.eval(t + h, xh + k3x * h, Af + k3a * h, k4x, k4a);
    xh += (k1x + k2x * 2.0 + k3x * 2.0 + k4x) * (h / 6);
    Af += (k1a + k2a * 2.0 + k3a * 2.0 + k4a) * (h / 6);
    double drift = isometry_deviation(Af);
    if (drift > 1e-4)
      throw StepTooLarge("isometry drift exceeds tolerance before projection; reduce the step");
    out.max_preprojection_drift = std::max(out.max_preprojection_drift, drift);
    Af = polar_project(Af);
    out.ts.push_back((i + 1) * h);
    out.states.push_back({gamma.pos((i + 1) * h), xh, Af});
  }
  return out;
}

double noslip_residual(const GeometryPair& gp, const Trajectory& traj, const CurveFn2& gamma) {
  double h = traj.ts[1] - traj.ts[0];
  double worst = 0;
  for (size_t i = 2; i + 2 < traj.states.size(); ++i) {
    V3 xdot = (traj.states[i - 2].xh - traj.states[i - 1].xh * 8.0 + traj.states[i + 1].xh * 8.0 -
               traj.states[i + 2].xh) *
              (1.0 / (12 * h));
    const RollingState& q = traj.states[i];
    M22 E;
    std::array<M22, 2> dE;
    chart2_frame(gp.M, q.x, E, dE);
    M33 Eh;
    std::array<M33, 3> dEh;
    chart3_frame(gp.Mh, q.xh, Eh, dEh);
    V2 gdot_frame = inverse(E) * gamma.vel(traj.ts[i]);
    V3 slip = xdot - Eh * (q.A * gdot_frame);
    // measure in the metric at xh
    M33 g = gp.Mh.metric(q.xh);
    worst = std::max(worst, std::sqrt(dot(g * slip, slip)));
  }
  return worst;
}

DenseCurve<3> Trajectory::mhat_curve(const GeometryPair& gp, const CurveFn2& gamma) const {
  DenseCurve<3> c;
  c.ts = ts;
  c.us.reserve(states.size());
  c.vs.reserve(states.size());
  for (size_t i = 0; i < states.size(); ++i) {
    const RollingState& q = states[i];
    M22 E;
    std::array<M22, 2> dE;
    chart2_frame(gp.M, q.x, E, dE);
    M33 Eh;
    std::array<M33, 3> dEh;
    chart3_frame(gp.Mh, q.xh, Eh, dEh);
    c.us.push_back(q.xh);
    c.vs.push_back(Eh * (q.A * (inverse(E) * gamma.vel(ts[i]))));
  }
  return c;
}

DenseCurve<2> Trajectory::m_curve(const CurveFn2& gamma) const {
  DenseCurve<2> c;
  c.ts = ts;
  for (double t : ts) {
    c.us.push_back(gamma.pos(t));
    c.vs.push_back(gamma.vel(t));
  }
  return c;
}

Development develop_geodesic(const GeometryPair& gp, const RollingState& q0, const V2& v0_frame,
                             double T, double step) {
  if (std::abs(norm(v0_frame) - 1.0) > 1e-9)
    throw ConfigError("develop_geodesic expects a unit initial velocity");
  M22 E;
  std::array<M22, 2> dE;
  chart2_frame(gp.M, q0.x, E, dE);
  DenseCurve<2> base = geodesic(gp.M, q0.x, E * v0_frame, T, step);
  Development dev;
  dev.base = base;
  dev.traj = roll_along(gp, q0, base.as_fn(), T, step);
  return dev;
}

RollingState flow(const GeometryPair& gp, const Field& field, const RollingState& q0, double t,
                  double step) {
  RollingState q = q0;
  double remaining = t;
  double dir = t >= 0 ? 1.0 : -1.0;
  while (std::abs(remaining) > 1e-15) {
    QChart chart(gp, q);
    auto f = push_to_chart(chart, field);
    V8 y{};
    // integrate inside this chart until the rotation coordinate grows
    double done = 0;
    double target = std::abs(remaining);
    int n = std::max(2, int(std::ceil(target / step)));
    double h = dir * target / n;
    bool recenter = false;
    for (int i = 0; i < n; ++i) {
      V8 k1 = f(y);
      V8 k2 = f(y + k1 * (h / 2));
      V8 k3 = f(y + k2 * (h / 2));
      V8 k4 = f(y + k3 * h);
      y += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6);
      done += std::abs(h);
      double thn = std::sqrt(y[5] * y[5] + y[6] * y[6] + y[7] * y[7]);
      if (thn > 0.5 * chart.theta_cap && i + 1 < n) {
        recenter = true;
        break;
      }
    }
    q = chart.state(y);
    remaining -= dir * done;
    if (!recenter && std::abs(remaining) < 1e-15) break;
  }
  return q;
}

M32 double_transport_oracle(const GeometryPair& gp, const RollingState& q0, const CurveFn2& gamma,
                            const CurveFn3& gamma_hat, double T, double step) {
  // transport the M-frame backwards along gamma and the image frame forwards
  // along gamma_hat, then sandwich A0 between them
  M22 E0;
  std::array<M22, 2> dE;
  chart2_frame(gp.M, q0.x, E0, dE);
  M33 Eh0;
  std::array<M33, 3> dEh;
  chart3_frame(gp.Mh, q0.xh, Eh0, dEh);

  // chart matrix of A0 at t=0
  M33 A0c{};
  M32 tmp = q0.A * inverse(E0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j) A0c(i, j) = tmp(i, j);
  M33 A0chart3 = Eh0 * A0c;  // 3x2 embedded in 3x3 (third column zero)

  // P_M(T): transport of the coordinate basis 0 -> T along gamma
  M22 Pm = parallel_transport(gp.M, gamma, T, step, M22::identity());
  M33 Ph = parallel_transport(gp.Mh, gamma_hat, T, step, M33::identity());

  // A_c(T) = Ph * A0_c * Pm^{-1}
  M33 AcT = Ph * A0chart3;
  M22 Pminv = inverse(Pm);
  M32 Ac{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j) Ac(i, j) = AcT(i, 0) * Pminv(0, j) + AcT(i, 1) * Pminv(1, j);

  // frame coefficients at the endpoint
  V2 xT = gamma.pos(T);
  V3 xhT = gamma_hat.pos(T);
  M22 ET;
  chart2_frame(gp.M, xT, ET, dE);
  M33 EhT;
  chart3_frame(gp.Mh, xhT, EhT, dEh);
  M33 EhTinv = inverse(EhT);
  M32 Af{};
  M32 AcET = Ac * ET;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += EhTinv(i, k) * AcET(k, j);
      Af(i, j) = s;
    }
  return Af;
}

}  // namespace rolling
