#include "rolling/brackets.hpp"

#include <cmath>

#include "rolling/errors.hpp"

namespace rolling {

std::string field_name(FieldId id) {
  switch (id) {
    case FieldId::LR_X: return "LR(X)";
    case FieldId::LR_Y: return "LR(Y)";
    case FieldId::LR_Xt: return "LR(Xt)";
    case FieldId::LR_Yt: return "LR(Yt)";
    case FieldId::LNS_AX: return "LNS(AX)";
    case FieldId::LNS_AY: return "LNS(AY)";
    case FieldId::LNS_AXt: return "LNS(AXt)";
    case FieldId::LNS_AYt: return "LNS(AYt)";
    case FieldId::LNS_Z: return "LNS(Z)";
    case FieldId::NU_XY: return "nu(A(X^Y))";
    case FieldId::NU_TX: return "nu(thX.Z)";
    case FieldId::NU_TY: return "nu(thY.Z)";
    case FieldId::NU_TXt: return "nu(thXt.Z)";
    case FieldId::NU_TYt: return "nu(thYt.Z)";
    case FieldId::NU_ROLBAR: return "nu(Rolbar)";
    case FieldId::F1: return "F1";
    case FieldId::F2: return "F2";
    case FieldId::LNS_Xt_only: return "LNS(Xt,0)";
    case FieldId::LNS_Yt_only: return "LNS(Yt,0)";
  }
  return "?";
}

static QTangent unit_slot(int i) {
  QTangent t;
  t.c[i] = 1;
  return t;
}

QTangent realize(const GeometryPair& gp, const RollingState& q, FieldId id) {
  switch (id) {
    case FieldId::LR_X: return unit_slot(0);
    case FieldId::LR_Y: return unit_slot(1);
    case FieldId::LNS_AX: return unit_slot(2);
    case FieldId::LNS_AY: return unit_slot(3);
    case FieldId::LNS_Z: return unit_slot(4);
    case FieldId::NU_XY: return unit_slot(5);
    case FieldId::NU_TX: return unit_slot(6);
    case FieldId::NU_TY: return unit_slot(7);
    default: break;
  }
  double phi = eval_scalar(gp, q, ScalarId::Phi);
  double c = std::cos(phi), s = std::sin(phi);
  QTangent t;
  switch (id) {
    case FieldId::LR_Xt:
      t.c[0] = c;
      t.c[1] = s;
      return t;
    case FieldId::LR_Yt:
      t.c[0] = -s;
      t.c[1] = c;
      return t;
    case FieldId::LNS_AXt:
      t.c[2] = c;
      t.c[3] = s;
      return t;
    case FieldId::LNS_AYt:
      t.c[2] = -s;
      t.c[3] = c;
      return t;
    case FieldId::NU_TXt:
      t.c[6] = c;
      t.c[7] = s;
      return t;
    case FieldId::NU_TYt:
      t.c[6] = -s;
      t.c[7] = c;
      return t;
    case FieldId::LNS_Xt_only:
      t.c[0] = c;
      t.c[1] = s;
      t.c[2] = -c;
      t.c[3] = -s;
      return t;
    case FieldId::LNS_Yt_only:
      t.c[0] = -s;
      t.c[1] = c;
      t.c[2] = s;
      t.c[3] = -c;
      return t;
    case FieldId::NU_ROLBAR: {
      double om = eval_scalar(gp, q, ScalarId::Omega);
      t.c[5] = 1;
      t.c[6] = -om * s;
      t.c[7] = om * c;
      return t;
    }
    case FieldId::F1: {
      ConditionPanel cp = condition_panel(gp, q);
      double om = eval_scalar(gp, q, ScalarId::Omega);
      // -LNS(AYt) - omega G_Xt nu(thXt.Z) + H_Xt nu(thYt.Z)
      t.c[2] = s;
      t.c[3] = -c;
      t.c[6] = -om * cp.G_xt * c + cp.H_xt * (-s);
      t.c[7] = -om * cp.G_xt * s + cp.H_xt * c;
      return t;
    }
    case FieldId::F2: {
      ConditionPanel cp = condition_panel(gp, q);
      double om = eval_scalar(gp, q, ScalarId::Omega);
      // LNS(AXt) - omega LNS(Z) - omega G_Yt nu(thXt.Z) + H_Yt nu(thYt.Z)
      t.c[2] = c;
      t.c[3] = s;
      t.c[4] = -om;
      t.c[6] = -om * cp.G_yt * c + cp.H_yt * (-s);
      t.c[7] = -om * cp.G_yt * s + cp.H_yt * c;
      return t;
    }
    default: break;
  }
  throw ConfigError("unhandled field id");
}

Field as_field(const GeometryPair& gp, FieldId id) {
  return [&gp, id](const RollingState& q) { return realize(gp, q, id); };
}

// ---------------------------------------------------------------------------
// finite-difference bracket oracle

static V8 bracket_in_chart(const std::function<V8(const V8&)>& Fc,
                           const std::function<V8(const V8&)>& Gc, double h) {
  V8 zero{};
  V8 F0 = Fc(zero), G0 = Gc(zero);
  V8 out{};
  for (int j = 0; j < 8; ++j) {
    V8 yp{}, ym{};
    yp[j] = h;
    ym[j] = -h;
    V8 dG = (Gc(yp) - Gc(ym)) * (0.5 / h);
    V8 dF = (Fc(yp) - Fc(ym)) * (0.5 / h);
    out += dG * F0[j] - dF * G0[j];
  }
  return out;
}

QTangent fd_bracket(const GeometryPair& gp, const Field& F, const Field& G,
                    const RollingState& q, double h, bool richardson) {
  QChart chart(gp, q);
  auto Fc = push_to_chart(chart, F);
  auto Gc = push_to_chart(chart, G);
  V8 b = bracket_in_chart(Fc, Gc, h);
  if (richardson) {
    V8 b2 = bracket_in_chart(Fc, Gc, h / 2);
    b = (b2 * 4.0 - b) * (1.0 / 3.0);
  }
  return from_chart_velocity(chart, q, b);
}

// ---------------------------------------------------------------------------
// general bracket formulas

Field ns_field(const GeometryPair& gp, const GeneratorPair& g) {
  return [&gp, g](const RollingState& q) { return ns_lift(gp, q, g.T(q), g.That(q)); };
}
Field nu_field(const GeometryPair& gp, const VerticalGen& g) {
  return [&gp, g](const RollingState& q) { return vertical(gp, q, g.U(q)); };
}

namespace {

// chart components of the generator pair at a state
struct PairChart {
  V2 Tc;
  V3 Thc;
};
PairChart pair_chart(const GeometryPair& gp, const RollingState& q, const GeneratorPair& g) {
  M22 E;
  std::array<M22, 2> dE;
  chart2_frame(gp.M, q.x, E, dE);
  M33 Eh;
  std::array<M33, 3> dEh;
  chart3_frame(gp.Mh, q.xh, Eh, dEh);
  return {E * g.T(q), Eh * g.That(q)};
}

// covariant derivative of the pair S along the flow of L_NS(T(q)) at q
void lns_deriv_of_pair(const GeometryPair& gp, const RollingState& q, const GeneratorPair& T,
                       const GeneratorPair& S, V2& DS, V3& DSh) {
  Field flowfield = ns_field(gp, T);
  double h = 1e-4;
  auto sample = [&](double t) {
    RollingState qs = flow(gp, flowfield, q, t, std::abs(t) / 4);
    return pair_chart(gp, qs, S);
  };
  PairChart p1 = sample(h), pm1 = sample(-h), p2 = sample(2 * h), pm2 = sample(-2 * h);
  V2 dS = (p2.Tc * -1.0 + p1.Tc * 8.0 - pm1.Tc * 8.0 + pm2.Tc) * (1.0 / (12 * h));
  V3 dSh = (p2.Thc * -1.0 + p1.Thc * 8.0 - pm1.Thc * 8.0 + pm2.Thc) * (1.0 / (12 * h));
  PairChart t0 = pair_chart(gp, q, T);
  PairChart s0 = pair_chart(gp, q, S);
  // covariant correction
  DS = dS + christoffel_dir(gp.M, q.x, t0.Tc) * s0.Tc;
  DSh = dSh + christoffel_dir(gp.Mh, q.xh, t0.Thc) * s0.Thc;
  // back to frame coefficients
  M22 E;
  std::array<M22, 2> dE;
  chart2_frame(gp.M, q.x, E, dE);
  M33 Eh;
  std::array<M33, 3> dEh;
  chart3_frame(gp.Mh, q.xh, Eh, dEh);
  DS = inverse(E) * DS;
  DSh = inverse(Eh) * DSh;
}

RollingState vertical_shift(const GeometryPair& gp, const RollingState& q, const M32& U,
                            double t) {
  RollingState qs = q;
  qs.A = polar_project(q.A + U * t);
  (void)gp;
  return qs;
}

}  // namespace

QTangent general_bracket_ns_ns(const GeometryPair& gp, const GeneratorPair& T,
                               const GeneratorPair& S, const RollingState& q) {
  V2 DTS, DST;
  V3 DTSh, DSTh;
  lns_deriv_of_pair(gp, q, T, S, DTS, DTSh);
  lns_deriv_of_pair(gp, q, S, T, DST, DSTh);
  QTangent first = ns_lift(gp, q, DTS - DST, DTSh - DSTh);

  // nu(A R(T,S) - Rhat(That, Shat) A)
  V2 Tf = T.T(q), Sf = S.T(q);
  V3 Thf = T.That(q), Shf = S.That(q);
  double K = gaussian_curvature(gp.M, q.x);
  M22 wedge{};  // (T ^ S) in orthonormal coefficients: S T^t - T S^t
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) wedge(i, j) = Sf[i] * Tf[j] - Tf[i] * Sf[j];
  M32 B = q.A * (wedge * (-K));
  // Rhat as an operator via the 2-vector matrix in the chart frame
  M33 Rh = curvature_operator(gp.Mh, q.xh, default_frame_field(gp.Mh));
  V3 w = Rh * cross(Thf, Shf);
  B = B - hat(w) * q.A;
  QTangent second = vertical(gp, q, B);
  first.c += second.c;
  return first;
}

QTangent general_bracket_ns_nu(const GeometryPair& gp, const GeneratorPair& T,
                               const VerticalGen& U, const RollingState& q) {
  double h = 1e-4;
  // nu(U) T-bar: plain vertical difference of the pair (base point fixed)
  auto pair_at = [&](double t) {
    RollingState qs = vertical_shift(gp, q, U.U(q), t);
    return std::make_pair(T.T(qs), T.That(qs));
  };
  auto p1 = pair_at(h), pm1 = pair_at(-h), p2 = pair_at(2 * h), pm2 = pair_at(-2 * h);
  V2 dT = (p2.first * -1.0 + p1.first * 8.0 - pm1.first * 8.0 + pm2.first) * (1.0 / (12 * h));
  V3 dTh =
      (p2.second * -1.0 + p1.second * 8.0 - pm1.second * 8.0 + pm2.second) * (1.0 / (12 * h));
  QTangent first = ns_lift(gp, q, dT, dTh);

  // L_NS(T) U: covariant derivative of the (1,1)-map along the lift flow
  Field flowfield = ns_field(gp, T);
  auto Uc_at = [&](const RollingState& qs) {
    M22 E;
    std::array<M22, 2> dE;
    chart2_frame(gp.M, qs.x, E, dE);
    M33 Eh;
    std::array<M33, 3> dEh;
    chart3_frame(gp.Mh, qs.xh, Eh, dEh);
    M32 Uf = U.U(qs);
    return (Eh * Uf) * inverse(E);
  };
  auto s = [&](double t) { return Uc_at(flow(gp, flowfield, q, t, std::abs(t) / 4)); };
  M32 dU = (s(2 * h) * -1.0 + s(h) * 8.0 - s(-h) * 8.0 + s(-2 * h)) * (1.0 / (12 * h));
  PairChart t0 = pair_chart(gp, q, T);
  M32 U0c = Uc_at(q);
  M32 DU = dU + christoffel_dir(gp.Mh, q.xh, t0.Thc) * U0c - U0c * christoffel_dir(gp.M, q.x, t0.Tc);
  // back to frame coefficients
  M22 E;
  std::array<M22, 2> dE;
  chart2_frame(gp.M, q.x, E, dE);
  M33 Eh;
  std::array<M33, 3> dEh;
  chart3_frame(gp.Mh, q.xh, Eh, dEh);
  M32 DUf = (inverse(Eh) * DU) * E;
  QTangent second = vertical(gp, q, DUf);
  QTangent out;
  out.c = second.c - first.c;
  return out;
}

QTangent general_bracket_nu_nu(const GeometryPair& gp, const VerticalGen& U,
                               const VerticalGen& V, const RollingState& q) {
  double h = 1e-4;
  auto dirderiv = [&](const VerticalGen& along, const VerticalGen& of) {
    auto s = [&](double t) { return of.U(vertical_shift(gp, q, along.U(q), t)); };
    return (s(2 * h) * -1.0 + s(h) * 8.0 - s(-h) * 8.0 + s(-2 * h)) * (1.0 / (12 * h));
  };
  M32 duv = dirderiv(U, V);
  M32 dvu = dirderiv(V, U);
  return vertical(gp, q, duv - dvu);
}

VerifyOutcome verify_identity(const GeometryPair& gp, const IdentityRecord& rec,
                              const RollingState& q, double rel_tol) {
  VerifyOutcome out;
  if (auto reason = rec.hypothesis ? rec.hypothesis(gp, q) : std::nullopt) {
    out.skipped = true;
    out.skip_reason = *reason;
    return out;
  }
  IdentityValue l = rec.lhs(gp, q);
  IdentityValue r = rec.rhs(gp, q);
  out.lhs_norm = l.norm_value();
  out.abs_err = l.diff(r).norm_value();
  out.rel_err = out.abs_err / std::max(1.0, out.lhs_norm);
  out.pass = out.rel_err < rel_tol;
  return out;
}

}  // namespace rolling
