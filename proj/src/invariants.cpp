#include "rolling/invariants.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "rolling/errors.hpp"

namespace rolling {

int CurvaturePanel::case_label() const {
  bool pis_zero = !r || *r < kRadiusTol * 10;
  bool pis_nonzero = pi_nonzero();
  bool eq = k_equals_sigma();
  bool neq = std::abs(K - sigma3) >= kInequalityTol;
  if (pis_zero && eq) return 1;
  if (pis_zero && neq) return 2;
  if (pis_nonzero && eq) return 3;
  if (pis_nonzero && neq) return 4;
  return 0;
}

M33 curvature_lambda2_moving(const GeometryPair& gp, const RollingState& q) {
  M33 Rhat = curvature_operator(gp.Mh, q.xh, default_frame_field(gp.Mh));
  M33 rot;
  V3 z = q.zhat();
  for (int i = 0; i < 3; ++i) {
    rot(i, 0) = q.A(i, 0);
    rot(i, 1) = q.A(i, 1);
    rot(i, 2) = z[i];
  }
  return rot.transposed() * (Rhat * rot);
}

double beta_invariant(const GeometryPair& gp, const RollingState& q) {
  // F(s) = g(Rhat(*Z(s)), *Z(s)) along the Z_A-geodesic with the whole moving
  // frame parallel-transported; central differences with one Richardson step
  M33 Eh;
  std::array<M33, 3> dEh;
  chart3_frame(gp.Mh, q.xh, Eh, dEh);
  V3 z = q.zhat();
  V3 zc = Eh * z;
  M33 W0;
  W0.set_col(0, Eh * q.A.col(0));
  W0.set_col(1, Eh * q.A.col(1));
  W0.set_col(2, zc);

  auto F_at = [&](double s) {
    DenseCurve<3> g = geodesic(gp.Mh, q.xh, zc, s, std::abs(s) / 4);
    auto fn = g.as_fn();
    M33 W = parallel_transport(gp.Mh, fn, s, std::abs(s) / 4, W0);
    V3 xs = g.us.back();
    M33 Ehs;
    chart3_frame(gp.Mh, xs, Ehs, dEh);
    M33 rot = inverse(Ehs) * W;  // transported frame in frame coefficients
    M33 Rh = curvature_operator(gp.Mh, xs, default_frame_field(gp.Mh));
    M33 moving = rot.transposed() * (Rh * rot);
    return moving(2, 2);
  };

  double h = 1e-4;
  auto central = [&](double hh) { return (F_at(hh) - F_at(-hh)) / (2 * hh); };
  double bh = central(h), bh2 = central(h / 2);
  return (4 * bh2 - bh) / 3;
}

CurvaturePanel curvature_panel(const GeometryPair& gp, const RollingState& q, bool with_beta) {
  CurvaturePanel p;
  M33 R = curvature_lambda2_moving(gp, q);
  p.sigma1 = -R(0, 0);
  p.sigma2 = -R(1, 1);
  p.sigma3 = -R(2, 2);
  p.pi_x = R(2, 0);
  p.pi_y = R(2, 1);
  p.pi_z = R(0, 1);
  p.K = gaussian_curvature(gp.M, q.x);
  if (with_beta) p.beta = beta_invariant(gp, q);

  double r = std::hypot(p.pi_x, p.pi_y);
  if (r >= kRadiusTol) {
    p.r = r;
    double phi = std::atan2(p.pi_y, p.pi_x);
    p.phi = phi;
    double c = std::cos(phi), s = std::sin(phi);
    p.sigma1_t = c * c * p.sigma1 + s * s * p.sigma2 - 2 * c * s * p.pi_z;
    p.sigma2_t = s * s * p.sigma1 + c * c * p.sigma2 + 2 * c * s * p.pi_z;
    p.pi_z_t = s * c * (p.sigma1 - p.sigma2) + (c * c - s * s) * p.pi_z;
    if (std::abs(p.K - p.sigma3) >= kOmegaTol) {
      p.omega = r / (p.K - p.sigma3);
      p.lambda = -p.sigma3 + (*p.omega) * (*p.omega) * (p.K - p.sigma3);
    }
  }
  return p;
}

M32 rol_tensor(const GeometryPair& gp, const RollingState& q) {
  CurvaturePanel p = curvature_panel(gp, q);
  double ks = p.K - p.sigma3;
  V3 z = q.zhat();
  M32 rol{};
  rol.set_col(0, -(q.A.col(1) * ks) + z * p.pi_y);
  rol.set_col(1, q.A.col(0) * ks - z * p.pi_x);
  return rol;
}

M32 rolbar(const GeometryPair& gp, const RollingState& q) {
  CurvaturePanel p = curvature_panel(gp, q);
  if (!p.omega)
    throw HypothesesViolated(!p.r ? "rolbar undefined: (Pi_X, Pi_Y) = (0,0)"
                                  : "rolbar undefined: K = sigma");
  double c = std::cos(*p.phi), s = std::sin(*p.phi);
  V3 z = q.zhat();
  M32 b{};
  b.set_col(0, q.A.col(1) - z * (*p.omega * s));
  b.set_col(1, -q.A.col(0) + z * (*p.omega * c));
  return b;
}

ProductPanel product_panel(const GeometryPair& gp, const RollingState& q) {
  if (!gp.Mh.has_base_direction())
    throw ScenarioMismatch("product panel requires a product or warped target model");
  ProductPanel pp;
  M33 g = gp.Mh.metric(q.xh);
  M33 Eh;
  std::array<M33, 3> dEh;
  chart3_frame(gp.Mh, q.xh, Eh, dEh);
  V3 dr{{1, 0, 0}};
  auto pair_with_dr = [&](const V3& frame_coeffs) {
    V3 chart = Eh * frame_coeffs;
    return dot(g * chart, dr);
  };
  pp.alpha = pair_with_dr(q.zhat());
  pp.tau1 = pair_with_dr(q.A.col(0));
  pp.tau2 = pair_with_dr(q.A.col(1));
  pp.I = pp.tau2;
  pp.P = pp.tau1;  // X = d/dr on warped M; tau1 = g(A X, d/dr)

  if (const auto* prod = std::get_if<Product3>(&gp.Mh.model)) {
    double kn = prod->fiber.gauss() / (prod->c * prod->c);
    pp.KN = kn;
    double K = gaussian_curvature(gp.M, q.x);
    pp.Theta = K - pp.alpha * pp.alpha * kn;
    pp.Psi = pp.alpha * kn;
  }

  double fh_over = 0.0;
  bool have_fh = false;
  if (std::get_if<Product3>(&gp.Mh.model)) {
    fh_over = 0.0;  // constant warping
    have_fh = true;
  } else if (const auto* w3 = std::get_if<Warped3>(&gp.Mh.model)) {
    fh_over = w3->f.deriv(q.xh[0]) / w3->f.value(q.xh[0]);
    have_fh = true;
  }
  if (const auto* w2 = std::get_if<Warped2>(&gp.M.model); w2 && have_fh) {
    double f_over = w2->f.deriv(q.x[0]) / w2->f.value(q.x[0]);
    pp.U = fh_over - f_over * pp.P;
  }
  return pp;
}

EigenStructure eigen_structure(const GeometryPair& gp, const RollingState& q) {
  M33 R = curvature_lambda2_moving(gp, q);
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = 0.5 * (R(i, j) + R(j, i));
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(m);
  EigenStructure out;
  for (int i = 0; i < 3; ++i) {
    out.eigenvalues[i] = es.eigenvalues()(i);
    for (int j = 0; j < 3; ++j) out.eigenvectors(j, i) = es.eigenvectors()(j, i);
  }
  double rad = std::max(std::abs(out.eigenvalues[0]), std::abs(out.eigenvalues[2]));
  double gap = 1e-8 * std::max(rad, 1e-300);
  int cluster = 0;
  out.multiplicity = {1, 0, 0};
  for (int i = 1; i < 3; ++i) {
    if (out.eigenvalues[i] - out.eigenvalues[i - 1] < gap)
      out.multiplicity[cluster]++;
    else
      out.multiplicity[++cluster] = 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// scalar engine

bool scalar_is_angle(ScalarId id) { return id == ScalarId::Phi; }

static Field lr_tilde_field(const GeometryPair& gp, bool xdir);

double eval_scalar(const GeometryPair& gp, const RollingState& q, ScalarId id) {
  auto need = [&](const std::optional<double>& v, const char* what) {
    if (!v) throw HypothesesViolated(std::string("scalar undefined at state: ") + what);
    return *v;
  };
  switch (id) {
    case ScalarId::GaussK:
      return gaussian_curvature(gp.M, q.x);
    case ScalarId::Beta:
      return beta_invariant(gp, q);
    case ScalarId::Alpha:
      return product_panel(gp, q).alpha;
    case ScalarId::UFn: {
      auto pp = product_panel(gp, q);
      if (!pp.U) throw HypothesesViolated("U requires warped factors");
      return *pp.U;
    }
    case ScalarId::IFn:
      return product_panel(gp, q).I;
    case ScalarId::PFn:
      return product_panel(gp, q).P;
    default:
      break;
  }
  CurvaturePanel p = curvature_panel(gp, q);
  switch (id) {
    case ScalarId::Phi: return need(p.phi, "phi (r = 0)");
    case ScalarId::Omega: return need(p.omega, "omega (K = sigma or r = 0)");
    case ScalarId::Radius: return need(p.r, "r");
    case ScalarId::Sigma1: return p.sigma1;
    case ScalarId::Sigma2: return p.sigma2;
    case ScalarId::Sigma: return p.sigma3;
    case ScalarId::PiX: return p.pi_x;
    case ScalarId::PiY: return p.pi_y;
    case ScalarId::PiZ: return p.pi_z;
    case ScalarId::Sigma1T: return need(p.sigma1_t, "tilde sigma^1");
    case ScalarId::Sigma2T: return need(p.sigma2_t, "tilde sigma^2");
    case ScalarId::PiZT: return need(p.pi_z_t, "tilde Pi_Z");
    case ScalarId::BetaOver2R: return beta_invariant(gp, q) / (2 * need(p.r, "r"));
    case ScalarId::Lambda: return need(p.lambda, "lambda");
    case ScalarId::GXt: return condition_panel(gp, q).G_xt;
    case ScalarId::GYt: return condition_panel(gp, q).G_yt;
    case ScalarId::HXt: return condition_panel(gp, q).H_xt;
    case ScalarId::HYt: return condition_panel(gp, q).H_yt;
    default:
      throw ConfigError("unhandled scalar id");
  }
}

static double wrap_angle(double a) {
  while (a > M_PI) a -= 2 * M_PI;
  while (a <= -M_PI) a += 2 * M_PI;
  return a;
}

// A first-order derivative of a scalar along a field only needs the field's
// value at q; the chart line with that velocity is a valid realization.
double deriv_along_fn(const GeometryPair& gp, const Field& field,
                      const std::function<double(const RollingState&)>& f, bool angle,
                      const RollingState& q, double h) {
  QChart chart(gp, q);
  V8 dir = chart_velocity(chart, q, field(q));
  double f0 = f(q);
  auto sample = [&](double t) {
    double v = f(chart.state(dir * t));
    if (angle) v = f0 + wrap_angle(v - f0);
    return v;
  };
  double f1 = sample(h), fm1 = sample(-h), f2 = sample(2 * h), fm2 = sample(-2 * h);
  return (-f2 + 8 * f1 - 8 * fm1 + fm2) / (12 * h);
}

double deriv_along(const GeometryPair& gp, const Field& field, ScalarId id,
                   const RollingState& q, double h) {
  return deriv_along_fn(
      gp, field, [&gp, id](const RollingState& s) { return eval_scalar(gp, s, id); },
      scalar_is_angle(id), q, h);
}

double deriv_along_vector(const GeometryPair& gp, const RollingState& q, const QTangent& v,
                          const std::function<double(const RollingState&)>& f, double h) {
  QChart chart(gp, q);
  V8 dir = chart_velocity(chart, q, v);
  auto sample = [&](double t) { return f(chart.state(dir * t)); };
  return (-sample(2 * h) + 8 * sample(h) - 8 * sample(-h) + sample(-2 * h)) / (12 * h);
}

// rolling lift of the rotated frame field X~ (or Y~)
static Field lr_tilde_field(const GeometryPair& gp, bool xdir) {
  return [&gp, xdir](const RollingState& s) {
    double phi = eval_scalar(gp, s, ScalarId::Phi);
    double c = std::cos(phi), sn = std::sin(phi);
    QTangent t;
    if (xdir) {
      t.c[0] = c;
      t.c[1] = sn;
    } else {
      t.c[0] = -sn;
      t.c[1] = c;
    }
    return t;
  };
}

// derivatives of phi and omega along the true flow of a rolling field,
// fourth-order central differences at the stated step
static std::array<double, 2> flow_derivs_phi_omega(const GeometryPair& gp, const Field& field,
                                                   const RollingState& q, double h) {
  double phi0 = eval_scalar(gp, q, ScalarId::Phi);
  std::array<double, 4> offs{{-2 * h, -h, h, 2 * h}};
  std::array<double, 4> phis{}, oms{};
  for (int i = 0; i < 4; ++i) {
    RollingState qs = flow(gp, field, q, offs[i], std::abs(offs[i]) / 4);
    CurvaturePanel p = curvature_panel(gp, qs);
    phis[i] = phi0 + wrap_angle(*p.phi - phi0);
    oms[i] = *p.omega;
  }
  double dphi = (phis[0] - 8 * phis[1] + 8 * phis[2] - phis[3]) / (12 * h);
  double dom = (oms[0] - 8 * oms[1] + 8 * oms[2] - oms[3]) / (12 * h);
  return {dphi, dom};
}

ConditionPanel condition_panel(const GeometryPair& gp, const RollingState& q) {
  CurvaturePanel p = curvature_panel(gp, q);
  if (!p.r || *p.r < kInequalityTol)
    throw HypothesesViolated("condition panel: (Pi_X, Pi_Y) = (0,0) at the state");
  if (std::abs(p.K - p.sigma3) < kInequalityTol)
    throw HypothesesViolated("condition panel: K = sigma at the state");

  double h = 1e-4;
  auto dx = flow_derivs_phi_omega(gp, lr_tilde_field(gp, true), q, h);
  auto dy = flow_derivs_phi_omega(gp, lr_tilde_field(gp, false), q, h);
  double lrx_phi = dx[0], lrx_om = dx[1];
  double lry_phi = dy[0], lry_om = dy[1];

  ConnTable2 ct = connection_table(gp.M, q.x, default_frame_field(gp.M));
  double c = std::cos(*p.phi), s = std::sin(*p.phi);
  double gGx = ct.g1 * c + ct.g2 * s;
  double gGy = -ct.g1 * s + ct.g2 * c;

  ConditionPanel out;
  out.G_xt = lrx_phi + gGx;
  out.G_yt = lry_phi + gGy;
  out.H_xt = lrx_om;
  out.H_yt = lry_om;
  out.g_xt = out.G_xt;
  out.wgy_minus_hx = *p.omega * out.G_yt - out.H_xt;
  out.h_yt = out.H_yt;
  // closed forms of the vertical derivatives (Appendix)
  out.c4 = (*p.sigma2_t - p.sigma3) / (p.K - p.sigma3) - 1.0;
  out.c5 = -(*p.pi_z_t) / (p.K - p.sigma3);
  return out;
}

}  // namespace rolling
