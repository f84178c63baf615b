#include <cmath>
#include <map>

#include "rolling/brackets.hpp"
#include "rolling/errors.hpp"

// The bracket and derivative tables of the appendix, together with the
// first-order bracket formulas, as identity records. Left sides always go
// through the finite-difference oracle (or a finite-difference scalar
// derivative); right sides are the printed closed forms.

namespace rolling {

namespace {

using Hyp = std::function<std::optional<std::string>(const GeometryPair&, const RollingState&)>;

Hyp hyp_none() {
  return [](const GeometryPair&, const RollingState&) -> std::optional<std::string> {
    return std::nullopt;
  };
}

Hyp hyp_r() {
  return [](const GeometryPair& gp, const RollingState& q) -> std::optional<std::string> {
    CurvaturePanel p = curvature_panel(gp, q);
    if (!p.pi_nonzero()) return "(Pi_X, Pi_Y) = (0,0)";
    return std::nullopt;
  };
}

Hyp hyp_keq_r() {
  return [](const GeometryPair& gp, const RollingState& q) -> std::optional<std::string> {
    CurvaturePanel p = curvature_panel(gp, q);
    if (!p.pi_nonzero()) return "(Pi_X, Pi_Y) = (0,0)";
    if (!p.k_equals_sigma()) return "K != sigma";
    return std::nullopt;
  };
}

Hyp hyp_kneq_r() {
  return [](const GeometryPair& gp, const RollingState& q) -> std::optional<std::string> {
    CurvaturePanel p = curvature_panel(gp, q);
    if (!p.pi_nonzero()) return "(Pi_X, Pi_Y) = (0,0)";
    if (std::abs(p.K - p.sigma3) < kInequalityTol) return "K = sigma";
    return std::nullopt;
  };
}

QTangent combo(const GeometryPair& gp, const RollingState& q,
               std::initializer_list<std::pair<double, FieldId>> terms) {
  QTangent out;
  for (const auto& [c, id] : terms) {
    if (c == 0.0) continue;
    QTangent t = realize(gp, q, id);
    out.c += t.c * c;
  }
  return out;
}

// vertical decomposition of the rolling curvature
QTangent nu_rol(const CurvaturePanel& p) {
  QTangent t;
  t.c[5] = -(p.K - p.sigma3);
  t.c[6] = p.pi_y;
  t.c[7] = -p.pi_x;
  return t;
}

auto lhs_bracket(FieldId a, FieldId b, double h = 1e-4) {
  return [a, b, h](const GeometryPair& gp, const RollingState& q) {
    return IdentityValue::tangent(fd_bracket(gp, as_field(gp, a), as_field(gp, b), q, h));
  };
}

auto lhs_scalar_deriv(FieldId f, ScalarId s, double h = 1e-4) {
  return [f, s, h](const GeometryPair& gp, const RollingState& q) {
    return IdentityValue::scalar(deriv_along(gp, as_field(gp, f), s, q, h));
  };
}

double dscalar(const GeometryPair& gp, const RollingState& q, FieldId f, ScalarId s,
               double h = 1e-4) {
  return deriv_along(gp, as_field(gp, f), s, q, h);
}

// ---------------------------------------------------------------------------
// table L2_1: brackets in the (X, Y) frame

std::vector<IdentityRecord> table_l2_1() {
  std::vector<IdentityRecord> recs;
  int idx = 0;
  auto add = [&](FieldId a, FieldId b,
                 std::function<QTangent(const GeometryPair&, const RollingState&,
                                        const CurvaturePanel&, const ConnTable2&)>
                     rhs) {
    IdentityRecord r;
    r.table = "L2_1";
    r.index = idx++;
    r.name = "[" + field_name(a) + ", " + field_name(b) + "]";
    r.hypothesis = hyp_none();
    r.lhs = lhs_bracket(a, b);
    r.rhs = [rhs](const GeometryPair& gp, const RollingState& q) {
      CurvaturePanel p = curvature_panel(gp, q);
      ConnTable2 ct = connection_table(gp.M, q.x, default_frame_field(gp.M));
      return IdentityValue::tangent(rhs(gp, q, p, ct));
    };
    recs.push_back(r);
  };

  using F = FieldId;
  add(F::LR_X, F::LR_Y, [](const GeometryPair&, const RollingState&, const CurvaturePanel& p,
                           const ConnTable2& ct) {
    QTangent t = nu_rol(p);
    t.c[0] -= ct.g1;
    t.c[1] -= ct.g2;
    return t;
  });
  add(F::LR_X, F::NU_XY, [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel&,
                            const ConnTable2&) { return combo(gp, q, {{-1, F::LNS_AY}}); });
  add(F::LR_X, F::NU_TX,
      [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel&,
         const ConnTable2& ct) {
        return combo(gp, q, {{-1, F::LNS_Z}, {ct.g1, F::NU_TY}});
      });
  add(F::LR_X, F::NU_TY,
      [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel&,
         const ConnTable2& ct) { return combo(gp, q, {{-ct.g1, F::NU_TX}}); });
  add(F::LR_X, F::LNS_AX,
      [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel&,
         const ConnTable2& ct) { return combo(gp, q, {{ct.g1, F::LNS_AY}}); });
  add(F::LR_X, F::LNS_AY,
      [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel& p,
         const ConnTable2& ct) {
        return combo(gp, q,
                     {{-ct.g1, F::LNS_AX},
                      {p.sigma3, F::NU_XY},
                      {p.pi_y, F::NU_TX},
                      {-p.pi_x, F::NU_TY}});
      });
  add(F::LR_X, F::LNS_Z,
      [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel& p,
         const ConnTable2&) {
        return combo(
            gp, q, {{p.pi_y, F::NU_XY}, {p.sigma2, F::NU_TX}, {p.pi_z, F::NU_TY}});
      });
  add(F::LR_Y, F::NU_XY, [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel&,
                            const ConnTable2&) { return combo(gp, q, {{1, F::LNS_AX}}); });
  add(F::LR_Y, F::NU_TX,
      [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel&,
         const ConnTable2& ct) { return combo(gp, q, {{ct.g2, F::NU_TY}}); });
  add(F::LR_Y, F::NU_TY,
      [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel&,
         const ConnTable2& ct) {
        return combo(gp, q, {{-1, F::LNS_Z}, {-ct.g2, F::NU_TX}});
      });
  add(F::LR_Y, F::LNS_AX,
      [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel& p,
         const ConnTable2& ct) {
        return combo(gp, q,
                     {{ct.g2, F::LNS_AY},
                      {-p.sigma3, F::NU_XY},
                      {-p.pi_y, F::NU_TX},
                      {p.pi_x, F::NU_TY}});
      });
  add(F::LR_Y, F::LNS_AY,
      [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel&,
         const ConnTable2& ct) { return combo(gp, q, {{-ct.g2, F::LNS_AX}}); });
  add(F::LR_Y, F::LNS_Z,
      [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel& p,
         const ConnTable2&) {
        return combo(
            gp, q, {{-p.pi_x, F::NU_XY}, {p.pi_z, F::NU_TX}, {p.sigma1, F::NU_TY}});
      });
  add(F::LNS_Z, F::LNS_AX,
      [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel& p,
         const ConnTable2&) {
        return combo(
            gp, q, {{-p.pi_y, F::NU_XY}, {-p.sigma2, F::NU_TX}, {-p.pi_z, F::NU_TY}});
      });
  add(F::LNS_Z, F::LNS_AY,
      [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel& p,
         const ConnTable2&) {
        return combo(
            gp, q, {{p.pi_x, F::NU_XY}, {-p.pi_z, F::NU_TX}, {-p.sigma1, F::NU_TY}});
      });
  add(F::LNS_Z, F::NU_XY,
      [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel&,
         const ConnTable2&) { return combo(gp, q, {}); });
  add(F::LNS_Z, F::NU_TX, [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel&,
                             const ConnTable2&) { return combo(gp, q, {{1, F::LNS_AX}}); });
  add(F::LNS_Z, F::NU_TY, [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel&,
                             const ConnTable2&) { return combo(gp, q, {{1, F::LNS_AY}}); });
  add(F::LNS_AX, F::LNS_AY,
      [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel& p,
         const ConnTable2&) {
        return combo(
            gp, q, {{p.sigma3, F::NU_XY}, {p.pi_y, F::NU_TX}, {-p.pi_x, F::NU_TY}});
      });
  add(F::LNS_AX, F::NU_XY,
      [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel&,
         const ConnTable2&) { return combo(gp, q, {{-1, F::LNS_AY}}); });
  add(F::LNS_AX, F::NU_TX,
      [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel&,
         const ConnTable2&) { return combo(gp, q, {{-1, F::LNS_Z}}); });
  add(F::LNS_AX, F::NU_TY,
      [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel&,
         const ConnTable2&) { return combo(gp, q, {}); });
  add(F::LNS_AY, F::NU_XY,
      [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel&,
         const ConnTable2&) { return combo(gp, q, {{1, F::LNS_AX}}); });
  add(F::LNS_AY, F::NU_TX,
      [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel&,
         const ConnTable2&) { return combo(gp, q, {}); });
  add(F::LNS_AY, F::NU_TY,
      [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel&,
         const ConnTable2&) { return combo(gp, q, {{-1, F::LNS_Z}}); });
  add(F::NU_XY, F::NU_TX,
      [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel&,
         const ConnTable2&) { return combo(gp, q, {{1, F::NU_TY}}); });
  add(F::NU_XY, F::NU_TY,
      [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel&,
         const ConnTable2&) { return combo(gp, q, {{-1, F::NU_TX}}); });
  add(F::NU_TX, F::NU_TY,
      [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel&,
         const ConnTable2&) { return combo(gp, q, {{1, F::NU_XY}}); });
  return recs;
}

// ---------------------------------------------------------------------------
// table LE6_3: vertical derivatives of the curvature functions

std::vector<IdentityRecord> table_le6_3() {
  std::vector<IdentityRecord> recs;
  struct Row {
    FieldId f;
    ScalarId s;
    std::function<double(const CurvaturePanel&)> rhs;
    const char* name;
  };
  using F = FieldId;
  using S = ScalarId;
  std::vector<Row> rows = {
      {F::NU_XY, S::Sigma1, [](const CurvaturePanel& p) { return -2 * p.pi_z; }, "nu_XY sigma1"},
      {F::NU_TX, S::Sigma1, [](const CurvaturePanel& p) { return -2 * p.pi_x; }, "nu_TX sigma1"},
      {F::NU_TY, S::Sigma1, [](const CurvaturePanel&) { return 0.0; }, "nu_TY sigma1"},
      {F::NU_XY, S::Sigma2, [](const CurvaturePanel& p) { return 2 * p.pi_z; }, "nu_XY sigma2"},
      {F::NU_TX, S::Sigma2, [](const CurvaturePanel&) { return 0.0; }, "nu_TX sigma2"},
      {F::NU_TY, S::Sigma2, [](const CurvaturePanel& p) { return -2 * p.pi_y; }, "nu_TY sigma2"},
      {F::NU_XY, S::Sigma, [](const CurvaturePanel&) { return 0.0; }, "nu_XY sigma"},
      {F::NU_TX, S::Sigma, [](const CurvaturePanel& p) { return 2 * p.pi_x; }, "nu_TX sigma"},
      {F::NU_TY, S::Sigma, [](const CurvaturePanel& p) { return 2 * p.pi_y; }, "nu_TY sigma"},
      {F::NU_XY, S::PiX, [](const CurvaturePanel& p) { return p.pi_y; }, "nu_XY PiX"},
      {F::NU_TX, S::PiX, [](const CurvaturePanel& p) { return p.sigma1 - p.sigma3; },
       "nu_TX PiX"},
      {F::NU_TY, S::PiX, [](const CurvaturePanel& p) { return -p.pi_z; }, "nu_TY PiX"},
      {F::NU_XY, S::PiY, [](const CurvaturePanel& p) { return -p.pi_x; }, "nu_XY PiY"},
      {F::NU_TX, S::PiY, [](const CurvaturePanel& p) { return -p.pi_z; }, "nu_TX PiY"},
      {F::NU_TY, S::PiY, [](const CurvaturePanel& p) { return p.sigma2 - p.sigma3; },
       "nu_TY PiY"},
      {F::NU_XY, S::PiZ, [](const CurvaturePanel& p) { return p.sigma1 - p.sigma2; },
       "nu_XY PiZ"},
      {F::NU_TX, S::PiZ, [](const CurvaturePanel& p) { return p.pi_y; }, "nu_TX PiZ"},
      {F::NU_TY, S::PiZ, [](const CurvaturePanel& p) { return p.pi_x; }, "nu_TY PiZ"},
  };
  int idx = 0;
  for (const auto& row : rows) {
    IdentityRecord r;
    r.table = "LE6_3";
    r.index = idx++;
    r.name = row.name;
    r.hypothesis = hyp_none();
    r.lhs = lhs_scalar_deriv(row.f, row.s);
    auto rhs = row.rhs;
    r.rhs = [rhs](const GeometryPair& gp, const RollingState& q) {
      return IdentityValue::scalar(rhs(curvature_panel(gp, q)));
    };
    recs.push_back(r);
  }
  return recs;
}

// ---------------------------------------------------------------------------
// table LE_LR_XT_YT: rolling derivatives of the rotated frame maps (TM-valued)

std::vector<IdentityRecord> table_le_lr_tilde() {
  std::vector<IdentityRecord> recs;
  // lhs: covariant derivative of q -> Xt (or Yt) along LR(Xt)/LR(Yt),
  // in frame coefficients of T_x M
  auto lhs = [](FieldId along, bool of_x) {
    return [along, of_x](const GeometryPair& gp, const RollingState& q) {
      QChart chart(gp, q);
      V8 dir = chart_velocity(chart, q, realize(gp, q, along));
      double phi0 = eval_scalar(gp, q, ScalarId::Phi);
      auto tilde_chart = [&](double t) {
        RollingState qs = chart.state(dir * t);
        CurvaturePanel p = curvature_panel(gp, qs);
        double phi = *p.phi;
        double c = std::cos(phi), s = std::sin(phi);
        M22 E;
        std::array<M22, 2> dE;
        chart2_frame(gp.M, qs.x, E, dE);
        V2 f = of_x ? V2{{c, s}} : V2{{-s, c}};
        return E * f;
      };
      double h = 1e-4;
      V2 d = (tilde_chart(-2 * h) - tilde_chart(-h) * 8.0 + tilde_chart(h) * 8.0 -
              tilde_chart(2 * h)) *
             (1.0 / (12 * h));
      V2 vM{{dir[0], dir[1]}};
      V2 cov = d + christoffel_dir(gp.M, q.x, vM) * tilde_chart(0);
      M22 E;
      std::array<M22, 2> dE;
      chart2_frame(gp.M, q.x, E, dE);
      (void)phi0;
      return IdentityValue::pair2(inverse(E) * cov);
    };
  };
  auto rhs = [](FieldId along, bool of_x) {
    return [along, of_x](const GeometryPair& gp, const RollingState& q) {
      CurvaturePanel p = curvature_panel(gp, q);
      double c = std::cos(*p.phi), s = std::sin(*p.phi);
      ConnTable2 ct = connection_table(gp.M, q.x, default_frame_field(gp.M));
      double g = along == FieldId::LR_Xt ? ct.g1 * c + ct.g2 * s : -ct.g1 * s + ct.g2 * c;
      double lr_phi = dscalar(gp, q, along, ScalarId::Phi);
      double coef = lr_phi + g;
      V2 dir = of_x ? V2{{-s * coef, c * coef}} : V2{{-c * coef, -s * coef}};
      return IdentityValue::pair2(dir);
    };
  };
  int idx = 0;
  for (FieldId along : {FieldId::LR_Xt, FieldId::LR_Yt})
    for (bool of_x : {true, false}) {
      IdentityRecord r;
      r.table = "LE_LR_XT_YT";
      r.index = idx++;
      r.name = std::string(along == FieldId::LR_Xt ? "LR(Xt)" : "LR(Yt)") +
               (of_x ? " Xt" : " Yt");
      r.hypothesis = hyp_r();
      r.lhs = lhs(along, of_x);
      r.rhs = rhs(along, of_x);
      recs.push_back(r);
    }
  return recs;
}

// ---------------------------------------------------------------------------
// table L2_2: brackets in the rotated frame

struct TildeCtx {
  CurvaturePanel p;
  double gX, gY;          // g(Gamma, Xt), g(Gamma, Yt)
  double dRX, dRY;        // LR(Xt) phi, LR(Yt) phi
  double dAX, dAY, dZ;    // LNS(AXt) phi, LNS(AYt) phi, LNS(Z) phi
  double dTX, dTY;        // nu(thXt.Z) phi, nu(thYt.Z) phi
};

TildeCtx tilde_ctx(const GeometryPair& gp, const RollingState& q) {
  TildeCtx c;
  c.p = curvature_panel(gp, q);
  double co = std::cos(*c.p.phi), si = std::sin(*c.p.phi);
  ConnTable2 ct = connection_table(gp.M, q.x, default_frame_field(gp.M));
  c.gX = ct.g1 * co + ct.g2 * si;
  c.gY = -ct.g1 * si + ct.g2 * co;
  c.dRX = dscalar(gp, q, FieldId::LR_Xt, ScalarId::Phi);
  c.dRY = dscalar(gp, q, FieldId::LR_Yt, ScalarId::Phi);
  c.dAX = dscalar(gp, q, FieldId::LNS_AXt, ScalarId::Phi);
  c.dAY = dscalar(gp, q, FieldId::LNS_AYt, ScalarId::Phi);
  c.dZ = dscalar(gp, q, FieldId::LNS_Z, ScalarId::Phi);
  c.dTX = dscalar(gp, q, FieldId::NU_TXt, ScalarId::Phi);
  c.dTY = dscalar(gp, q, FieldId::NU_TYt, ScalarId::Phi);
  return c;
}

std::vector<IdentityRecord> table_l2_2() {
  std::vector<IdentityRecord> recs;
  int idx = 0;
  auto add = [&](FieldId a, FieldId b,
                 std::function<QTangent(const GeometryPair&, const RollingState&,
                                        const TildeCtx&)>
                     rhs) {
    IdentityRecord r;
    r.table = "L2_2";
    r.index = idx++;
    r.name = "[" + field_name(a) + ", " + field_name(b) + "]";
    r.hypothesis = hyp_r();
    r.lhs = lhs_bracket(a, b);
    r.rhs = [rhs](const GeometryPair& gp, const RollingState& q) {
      return IdentityValue::tangent(rhs(gp, q, tilde_ctx(gp, q)));
    };
    recs.push_back(r);
  };
  using F = FieldId;

  add(F::LR_Xt, F::LR_Yt, [](const GeometryPair& gp, const RollingState& q, const TildeCtx& c) {
    QTangent t = combo(gp, q, {{-(c.dRX + c.gX), F::LR_Xt}, {-(c.dRY + c.gY), F::LR_Yt}});
    t.c += nu_rol(c.p).c;
    return t;
  });
  add(F::LR_Xt, F::NU_XY, [](const GeometryPair& gp, const RollingState& q, const TildeCtx&) {
    return combo(gp, q, {{1, F::LR_Yt}, {-1, F::LNS_AYt}});
  });
  add(F::LR_Xt, F::NU_TXt, [](const GeometryPair& gp, const RollingState& q, const TildeCtx& c) {
    return combo(gp, q,
                 {{-c.dTX, F::LR_Yt}, {-1, F::LNS_Z}, {c.dRX + c.gX, F::NU_TYt}});
  });
  add(F::LR_Xt, F::NU_TYt, [](const GeometryPair& gp, const RollingState& q, const TildeCtx& c) {
    return combo(gp, q, {{-c.dTY, F::LR_Yt}, {-(c.dRX + c.gX), F::NU_TXt}});
  });
  add(F::LR_Xt, F::LNS_AXt, [](const GeometryPair& gp, const RollingState& q, const TildeCtx& c) {
    return combo(gp, q, {{-c.dAX, F::LR_Yt}, {c.dRX + c.gX, F::LNS_AYt}});
  });
  add(F::LR_Xt, F::LNS_AYt, [](const GeometryPair& gp, const RollingState& q, const TildeCtx& c) {
    QTangent t = combo(gp, q,
                       {{-c.dAY, F::LR_Yt},
                        {-(c.dRX + c.gX), F::LNS_AXt},
                        {c.p.K, F::NU_XY}});
    t.c += nu_rol(c.p).c;
    return t;
  });
  add(F::LR_Xt, F::LNS_Z, [](const GeometryPair& gp, const RollingState& q, const TildeCtx& c) {
    return combo(gp, q,
                 {{-c.dZ, F::LR_Yt}, {*c.p.sigma2_t, F::NU_TXt}, {*c.p.pi_z_t, F::NU_TYt}});
  });
  add(F::LR_Yt, F::NU_XY, [](const GeometryPair& gp, const RollingState& q, const TildeCtx&) {
    return combo(gp, q, {{-1, F::LR_Xt}, {1, F::LNS_AXt}});
  });
  add(F::LR_Yt, F::NU_TXt, [](const GeometryPair& gp, const RollingState& q, const TildeCtx& c) {
    return combo(gp, q, {{c.dRY + c.gY, F::NU_TYt}, {c.dTX, F::LR_Xt}});
  });
  add(F::LR_Yt, F::NU_TYt, [](const GeometryPair& gp, const RollingState& q, const TildeCtx& c) {
    return combo(gp, q,
                 {{c.dTY, F::LR_Xt}, {-1, F::LNS_Z}, {-(c.dRY + c.gY), F::NU_TXt}});
  });
  add(F::LR_Yt, F::LNS_AXt, [](const GeometryPair& gp, const RollingState& q, const TildeCtx& c) {
    QTangent t = combo(gp, q,
                       {{c.dAX, F::LR_Xt},
                        {c.dRY + c.gY, F::LNS_AYt},
                        {-c.p.K, F::NU_XY}});
    t.c = t.c - nu_rol(c.p).c;
    return t;
  });
  add(F::LR_Yt, F::LNS_AYt, [](const GeometryPair& gp, const RollingState& q, const TildeCtx& c) {
    return combo(gp, q, {{c.dAY, F::LR_Xt}, {-(c.dRY + c.gY), F::LNS_AXt}});
  });
  add(F::LR_Yt, F::LNS_Z, [](const GeometryPair& gp, const RollingState& q, const TildeCtx& c) {
    return combo(gp, q,
                 {{c.dZ, F::LR_Xt},
                  {*c.p.pi_z_t, F::NU_TXt},
                  {*c.p.sigma1_t, F::NU_TYt},
                  {-*c.p.r, F::NU_XY}});
  });
  // the A(X^Y)-vertical commutes with all tilde lifts
  for (FieldId b : {F::NU_TXt, F::NU_TYt, F::LNS_AXt, F::LNS_AYt, F::LNS_Z})
    add(F::NU_XY, b, [](const GeometryPair& gp, const RollingState& q, const TildeCtx&) {
      return combo(gp, q, {});
    });
  add(F::NU_TXt, F::NU_TYt, [](const GeometryPair& gp, const RollingState& q, const TildeCtx& c) {
    return combo(gp, q, {{-c.dTX, F::NU_TXt}, {-c.dTY, F::NU_TYt}, {1, F::NU_XY}});
  });
  add(F::NU_TXt, F::LNS_AXt, [](const GeometryPair& gp, const RollingState& q, const TildeCtx& c) {
    return combo(gp, q, {{c.dTX, F::LNS_AYt}, {-c.dAX, F::NU_TYt}, {1, F::LNS_Z}});
  });
  add(F::NU_TXt, F::LNS_AYt, [](const GeometryPair& gp, const RollingState& q, const TildeCtx& c) {
    return combo(gp, q, {{-c.dTX, F::LNS_AXt}, {-c.dAY, F::NU_TYt}});
  });
  add(F::NU_TXt, F::LNS_Z, [](const GeometryPair& gp, const RollingState& q, const TildeCtx& c) {
    return combo(gp, q, {{-c.dZ, F::NU_TYt}, {-1, F::LNS_AXt}});
  });
  add(F::NU_TYt, F::LNS_AXt, [](const GeometryPair& gp, const RollingState& q, const TildeCtx& c) {
    return combo(gp, q, {{c.dTY, F::LNS_AYt}, {c.dAX, F::NU_TXt}});
  });
  add(F::NU_TYt, F::LNS_AYt, [](const GeometryPair& gp, const RollingState& q, const TildeCtx& c) {
    return combo(gp, q, {{-c.dTY, F::LNS_AXt}, {c.dAY, F::NU_TXt}, {1, F::LNS_Z}});
  });
  add(F::NU_TYt, F::LNS_Z, [](const GeometryPair& gp, const RollingState& q, const TildeCtx& c) {
    return combo(gp, q, {{-1, F::LNS_AYt}, {c.dZ, F::NU_TXt}});
  });
  add(F::LNS_Z, F::LNS_AXt, [](const GeometryPair& gp, const RollingState& q, const TildeCtx& c) {
    return combo(gp, q,
                 {{c.dZ, F::LNS_AYt}, {-*c.p.sigma2_t, F::NU_TXt}, {-*c.p.pi_z_t, F::NU_TYt}});
  });
  add(F::LNS_Z, F::LNS_AYt, [](const GeometryPair& gp, const RollingState& q, const TildeCtx& c) {
    return combo(gp, q,
                 {{-c.dZ, F::LNS_AXt},
                  {*c.p.r, F::NU_XY},
                  {-*c.p.pi_z_t, F::NU_TXt},
                  {-*c.p.sigma1_t, F::NU_TYt}});
  });
  add(F::LNS_Xt_only, F::LNS_Yt_only,
      [](const GeometryPair& gp, const RollingState& q, const TildeCtx& c) {
        return combo(gp, q, {{-c.p.K, F::NU_XY}});
      });
  add(F::LNS_AXt, F::LNS_AYt, [](const GeometryPair& gp, const RollingState& q, const TildeCtx& c) {
    QTangent t = combo(gp, q,
                       {{-c.dAX, F::LNS_AXt}, {-c.dAY, F::LNS_AYt}, {c.p.K, F::NU_XY}});
    t.c += nu_rol(c.p).c;
    return t;
  });
  return recs;
}

// ---------------------------------------------------------------------------
// scalar tables under K = sigma, r > 0

std::vector<IdentityRecord> scalar_table(
    const std::string& table, Hyp hyp,
    std::vector<std::tuple<FieldId, ScalarId, double,
                           std::function<double(const GeometryPair&, const RollingState&,
                                                const CurvaturePanel&)>,
                           std::string>>
        rows) {
  std::vector<IdentityRecord> recs;
  int idx = 0;
  for (auto& [f, s, h, rhs, name] : rows) {
    IdentityRecord r;
    r.table = table;
    r.index = idx++;
    r.name = name;
    r.hypothesis = hyp;
    r.lhs = lhs_scalar_deriv(f, s, h);
    auto rr = rhs;
    r.rhs = [rr](const GeometryPair& gp, const RollingState& q) {
      return IdentityValue::scalar(rr(gp, q, curvature_panel(gp, q)));
    };
    recs.push_back(r);
  }
  return recs;
}

std::vector<IdentityRecord> table_l2_3() {
  using F = FieldId;
  using S = ScalarId;
  auto zero = [](const GeometryPair&, const RollingState&, const CurvaturePanel&) { return 0.0; };
  return scalar_table(
      "L2_3", hyp_keq_r(),
      {
          {F::LNS_Xt_only, S::Sigma, 1e-4, zero, "LNS(Xt) sigma"},
          {F::LNS_Yt_only, S::Sigma, 1e-4, zero, "LNS(Yt) sigma"},
          {F::NU_TYt, S::Sigma, 1e-4, zero, "nu(thYt.Z) sigma"},
          {F::NU_XY, S::Sigma, 1e-4, zero, "nu(A(X^Y)) sigma"},
          {F::LNS_Z, S::Sigma, 1e-4,
           [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel&) {
             return -beta_invariant(gp, q);
           },
           "LNS(Z) sigma"},
          {F::NU_TXt, S::Sigma, 1e-4,
           [](const GeometryPair&, const RollingState&, const CurvaturePanel& p) {
             return 2 * *p.r;
           },
           "nu(thXt.Z) sigma"},
      });
}

std::vector<IdentityRecord> table_l2_4() {
  using F = FieldId;
  using S = ScalarId;
  return scalar_table(
      "L2_4", hyp_keq_r(),
      {
          {F::LR_Xt, S::Radius, 1e-4,
           [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel&) {
             return -1.5 * beta_invariant(gp, q);
           },
           "LR(Xt) r"},
          {F::LNS_AXt, S::Radius, 1e-4,
           [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel&) {
             return -beta_invariant(gp, q);
           },
           "LNS(AXt) r"},
          {F::LNS_Xt_only, S::Radius, 1e-4,
           [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel&) {
             return -0.5 * beta_invariant(gp, q);
           },
           "LNS(Xt) r"},
          {F::LNS_Yt_only, S::Radius, 1e-4,
           [](const GeometryPair&, const RollingState&, const CurvaturePanel&) { return 0.0; },
           "LNS(Yt) r"},
          {F::NU_TYt, S::Radius, 1e-4,
           [](const GeometryPair&, const RollingState&, const CurvaturePanel& p) {
             return -*p.pi_z_t;
           },
           "nu(thYt.Z) r"},
          {F::NU_XY, S::Radius, 1e-4,
           [](const GeometryPair&, const RollingState&, const CurvaturePanel&) { return 0.0; },
           "nu(A(X^Y)) r"},
          {F::NU_TXt, S::Radius, 1e-4,
           [](const GeometryPair&, const RollingState&, const CurvaturePanel& p) {
             return *p.sigma1_t - p.sigma3;
           },
           "nu(thXt.Z) r"},
      });
}

std::vector<IdentityRecord> table_l2_5() {
  using F = FieldId;
  using S = ScalarId;
  return scalar_table(
      "L2_5", hyp_keq_r(),
      {
          {F::LNS_Xt_only, S::Phi, 1e-4,
           [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel& p) {
             ConnTable2 ct = connection_table(gp.M, q.x, default_frame_field(gp.M));
             return -(ct.g1 * std::cos(*p.phi) + ct.g2 * std::sin(*p.phi));
           },
           "LNS(Xt) phi"},
          {F::LNS_AXt, S::Phi, 1e-4,
           [](const GeometryPair&, const RollingState&, const CurvaturePanel&) { return 0.0; },
           "LNS(AXt) phi"},
          {F::LNS_Yt_only, S::Phi, 1e-4,
           [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel& p) {
             ConnTable2 ct = connection_table(gp.M, q.x, default_frame_field(gp.M));
             return -(-ct.g1 * std::sin(*p.phi) + ct.g2 * std::cos(*p.phi));
           },
           "LNS(Yt) phi"},
          {F::LNS_AYt, S::Phi, 1e-4,
           [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel& p) {
             return beta_invariant(gp, q) / (2 * *p.r);
           },
           "LNS(AYt) phi"},
          {F::NU_TYt, S::Phi, 1e-4,
           [](const GeometryPair&, const RollingState&, const CurvaturePanel& p) {
             return (*p.sigma2_t - p.sigma3) / *p.r;
           },
           "nu(thYt.Z) phi"},
          {F::NU_TXt, S::Phi, 1e-4,
           [](const GeometryPair&, const RollingState&, const CurvaturePanel& p) {
             return -*p.pi_z_t / *p.r;
           },
           "nu(thXt.Z) phi"},
      });
}

std::vector<IdentityRecord> table_l2_6() {
  using F = FieldId;
  using S = ScalarId;
  auto common = [](const GeometryPair& gp, const RollingState& q, const CurvaturePanel& p) {
    double b2r = beta_invariant(gp, q) / (2 * *p.r);
    return -(b2r * b2r + *p.sigma2_t);
  };
  return scalar_table(
      "L2_6", hyp_keq_r(),
      {
          {F::LR_Xt, S::BetaOver2R, 1e-3, common, "LR(Xt) beta/2r"},
          {F::LNS_Yt_only, S::BetaOver2R, 1e-3,
           [](const GeometryPair&, const RollingState&, const CurvaturePanel&) { return 0.0; },
           "LNS(Yt) beta/2r"},
          {F::LNS_AXt, S::BetaOver2R, 1e-3, common, "LNS(AXt) beta/2r"},
          {F::NU_XY, S::BetaOver2R, 1e-3,
           [](const GeometryPair&, const RollingState&, const CurvaturePanel&) { return 0.0; },
           "nu(A(X^Y)) beta/2r"},
      });
}

std::vector<IdentityRecord> table_l2_789(int which) {
  using F = FieldId;
  ScalarId target = which == 7 ? ScalarId::Sigma1T : which == 8 ? ScalarId::Sigma2T
                                                                : ScalarId::PiZT;
  std::string name = which == 7 ? "sigma1~" : which == 8 ? "sigma2~" : "PiZ~";
  auto zero = [](const GeometryPair&, const RollingState&, const CurvaturePanel&) { return 0.0; };
  std::function<double(const GeometryPair&, const RollingState&, const CurvaturePanel&)> tyt, txt;
  if (which == 7) {
    tyt = [](const GeometryPair&, const RollingState&, const CurvaturePanel& p) {
      return -(2 / *p.r) * *p.pi_z_t * (*p.sigma2_t - p.sigma3);
    };
    txt = [](const GeometryPair&, const RollingState&, const CurvaturePanel& p) {
      return (2 / *p.r) * (*p.pi_z_t) * (*p.pi_z_t) - 2 * *p.r;
    };
  } else if (which == 8) {
    tyt = [](const GeometryPair&, const RollingState&, const CurvaturePanel& p) {
      return (2 / *p.r) * *p.pi_z_t * (*p.sigma2_t - p.sigma3);
    };
    txt = [](const GeometryPair&, const RollingState&, const CurvaturePanel& p) {
      return -(2 / *p.r) * (*p.pi_z_t) * (*p.pi_z_t);
    };
  } else {
    tyt = [](const GeometryPair&, const RollingState&, const CurvaturePanel& p) {
      return (1 / *p.r) * (*p.sigma1_t - *p.sigma2_t) * (*p.sigma2_t - p.sigma3) + *p.r;
    };
    txt = [](const GeometryPair&, const RollingState&, const CurvaturePanel& p) {
      return -(1 / *p.r) * *p.pi_z_t * (*p.sigma1_t - *p.sigma2_t);
    };
  }
  return scalar_table(
      "L2_" + std::to_string(which), hyp_keq_r(),
      {
          {F::LNS_Xt_only, target, 1e-4, zero, "LNS(Xt) " + name},
          {F::LNS_Yt_only, target, 1e-4, zero, "LNS(Yt) " + name},
          {F::NU_TYt, target, 1e-4, tyt, "nu(thYt.Z) " + name},
          {F::NU_XY, target, 1e-4, zero, "nu(A(X^Y)) " + name},
          {F::NU_TXt, target, 1e-4, txt, "nu(thXt.Z) " + name},
      });
}

std::vector<IdentityRecord> table_nuaxay() {
  using F = FieldId;
  using S = ScalarId;
  auto zero = [](const GeometryPair&, const RollingState&, const CurvaturePanel&) { return 0.0; };
  return scalar_table("LE_NUAXAY_PHI", hyp_r(),
                      {
                          {F::NU_XY, S::Radius, 1e-4, zero, "nu(A(X^Y)) r"},
                          {F::NU_XY, S::Phi, 1e-4,
                           [](const GeometryPair&, const RollingState&, const CurvaturePanel&) {
                             return -1.0;
                           },
                           "nu(A(X^Y)) phi"},
                      });
}

std::vector<IdentityRecord> table_le_app31() {
  using F = FieldId;
  using S = ScalarId;
  auto zero = [](const GeometryPair&, const RollingState&, const CurvaturePanel&) { return 0.0; };
  return scalar_table(
      "LE_APP31", hyp_kneq_r(),
      {
          {F::NU_XY, S::Phi, 1e-4,
           [](const GeometryPair&, const RollingState&, const CurvaturePanel&) { return -1.0; },
           "nu(A(X^Y)) phi"},
          {F::NU_XY, S::Omega, 1e-4, zero, "nu(A(X^Y)) omega"},
          {F::NU_TYt, S::Phi, 1e-4,
           [](const GeometryPair&, const RollingState&, const CurvaturePanel& p) {
             return (*p.sigma2_t - p.sigma3) / (*p.omega * (p.K - p.sigma3));
           },
           "nu(thYt.Z) phi"},
          {F::NU_TYt, S::Omega, 1e-4,
           [](const GeometryPair&, const RollingState&, const CurvaturePanel& p) {
             return -*p.pi_z_t / (p.K - p.sigma3);
           },
           "nu(thYt.Z) omega"},
          {F::NU_TXt, S::Phi, 1e-4,
           [](const GeometryPair&, const RollingState&, const CurvaturePanel& p) {
             return -*p.pi_z_t / (*p.omega * (p.K - p.sigma3));
           },
           "nu(thXt.Z) phi"},
          {F::NU_TXt, S::Omega, 1e-4,
           [](const GeometryPair&, const RollingState&, const CurvaturePanel& p) {
             return (*p.sigma1_t - p.sigma3) / (p.K - p.sigma3) +
                    2 * *p.omega * *p.omega;
           },
           "nu(thXt.Z) omega"},
      });
}

// two printed forms of G: the normative rolling form against the L_NS form
std::vector<IdentityRecord> table_g_forms() {
  std::vector<IdentityRecord> recs;
  for (int i = 0; i < 2; ++i) {
    IdentityRecord r;
    r.table = "G_FORMS";
    r.index = i;
    r.name = i == 0 ? "G_Xt = LNS(AXt) phi" : "G_Yt = LNS(AYt) phi";
    r.hypothesis = hyp_kneq_r();
    r.lhs = [i](const GeometryPair& gp, const RollingState& q) {
      ConditionPanel cp = condition_panel(gp, q);
      return IdentityValue::scalar(i == 0 ? cp.G_xt : cp.G_yt);
    };
    r.rhs = [i](const GeometryPair& gp, const RollingState& q) {
      return IdentityValue::scalar(
          dscalar(gp, q, i == 0 ? FieldId::LNS_AXt : FieldId::LNS_AYt, ScalarId::Phi));
    };
    recs.push_back(r);
  }
  return recs;
}

// ---------------------------------------------------------------------------
// table LEMMAF: brackets with F1 and F2

struct FCtx {
  CurvaturePanel p;
  ConditionPanel cp;
  double om, sig, s1t, s2t, pzt, K, lam;
  double f1_phi, f1_om, f2_phi, f2_om;
  double lrx_Gx, lrx_Gy, lrx_Hx, lrx_Hy;
  double lry_Gx, lry_Gy, lry_Hx, lry_Hy;
  double rb_Gx, rb_Gy, rb_Hx, rb_Hy;
  double nphi_TY, nom_TY;
  double dz_phi, dz_om, dax_om, day_om;
  double f1_Gy, f2_Gx, f1_Hy, f2_Hx;
};

FCtx f_ctx(const GeometryPair& gp, const RollingState& q) {
  FCtx c;
  c.p = curvature_panel(gp, q);
  c.cp = condition_panel(gp, q);
  c.om = *c.p.omega;
  c.sig = c.p.sigma3;
  c.s1t = *c.p.sigma1_t;
  c.s2t = *c.p.sigma2_t;
  c.pzt = *c.p.pi_z_t;
  c.K = c.p.K;
  c.lam = *c.p.lambda;
  using F = FieldId;
  using S = ScalarId;
  double hG = 3e-3;  // derivatives of flow-differenced scalars use a wider step
  c.f1_phi = dscalar(gp, q, F::F1, S::Phi, 1e-3);
  c.f1_om = dscalar(gp, q, F::F1, S::Omega, 1e-3);
  c.f2_phi = dscalar(gp, q, F::F2, S::Phi, 1e-3);
  c.f2_om = dscalar(gp, q, F::F2, S::Omega, 1e-3);
  c.lrx_Gx = dscalar(gp, q, F::LR_Xt, S::GXt, hG);
  c.lrx_Gy = dscalar(gp, q, F::LR_Xt, S::GYt, hG);
  c.lrx_Hx = dscalar(gp, q, F::LR_Xt, S::HXt, hG);
  c.lrx_Hy = dscalar(gp, q, F::LR_Xt, S::HYt, hG);
  c.lry_Gx = dscalar(gp, q, F::LR_Yt, S::GXt, hG);
  c.lry_Gy = dscalar(gp, q, F::LR_Yt, S::GYt, hG);
  c.lry_Hx = dscalar(gp, q, F::LR_Yt, S::HXt, hG);
  c.lry_Hy = dscalar(gp, q, F::LR_Yt, S::HYt, hG);
  c.rb_Gx = dscalar(gp, q, F::NU_ROLBAR, S::GXt, hG);
  c.rb_Gy = dscalar(gp, q, F::NU_ROLBAR, S::GYt, hG);
  c.rb_Hx = dscalar(gp, q, F::NU_ROLBAR, S::HXt, hG);
  c.rb_Hy = dscalar(gp, q, F::NU_ROLBAR, S::HYt, hG);
  c.nphi_TY = dscalar(gp, q, F::NU_TYt, S::Phi);
  c.nom_TY = dscalar(gp, q, F::NU_TYt, S::Omega);
  c.dz_phi = dscalar(gp, q, F::LNS_Z, S::Phi);
  c.dz_om = dscalar(gp, q, F::LNS_Z, S::Omega);
  c.dax_om = dscalar(gp, q, F::LNS_AXt, S::Omega);
  c.day_om = dscalar(gp, q, F::LNS_AYt, S::Omega);
  c.f1_Gy = dscalar(gp, q, F::F1, S::GYt, hG);
  c.f2_Gx = dscalar(gp, q, F::F2, S::GXt, hG);
  c.f1_Hy = dscalar(gp, q, F::F1, S::HYt, hG);
  c.f2_Hx = dscalar(gp, q, F::F2, S::HXt, hG);
  return c;
}

std::vector<IdentityRecord> table_lemmaf() {
  std::vector<IdentityRecord> recs;
  int idx = 0;
  auto add = [&](FieldId a, FieldId b,
                 std::function<QTangent(const GeometryPair&, const RollingState&, const FCtx&)>
                     rhs) {
    IdentityRecord r;
    r.table = "LEMMAF";
    r.index = idx++;
    r.name = "[" + field_name(a) + ", " + field_name(b) + "]";
    r.hypothesis = hyp_kneq_r();
    // F1/F2 are flow-differenced fields; the oracle step widens to keep the
    // roundoff they carry below the truncation error
    r.lhs = lhs_bracket(a, b, 3e-3);
    r.rhs = [rhs](const GeometryPair& gp, const RollingState& q) {
      return IdentityValue::tangent(rhs(gp, q, f_ctx(gp, q)));
    };
    recs.push_back(r);
  };
  using F = FieldId;

  add(F::LR_Xt, F::F1, [](const GeometryPair& gp, const RollingState& q, const FCtx& c) {
    QTangent t = combo(gp, q,
                       {{-c.f1_phi, F::LR_Yt},
                        {c.cp.G_xt, F::LNS_AXt},
                        {c.om * c.cp.G_xt, F::LNS_Z},
                        {-(2 * c.cp.H_xt * c.cp.G_xt + c.om * c.lrx_Gx), F::NU_TXt},
                        {c.K * c.om - c.om * c.cp.G_xt * c.cp.G_xt + c.lrx_Hx, F::NU_TYt}});
    t.c += realize(gp, q, F::NU_ROLBAR).c * (-c.sig);
    return t;
  });
  add(F::LR_Yt, F::F1, [](const GeometryPair& gp, const RollingState& q, const FCtx& c) {
    return combo(
        gp, q,
        {{c.f1_phi, F::LR_Xt},
         {c.cp.G_yt, F::LNS_AXt},
         {-c.cp.H_xt, F::LNS_Z},
         {-(c.cp.G_xt * c.cp.H_yt + c.cp.G_yt * c.cp.H_xt + c.om * c.lry_Gx), F::NU_TXt},
         {-(c.om * c.cp.G_xt * c.cp.G_yt - c.lry_Hx), F::NU_TYt}});
  });
  add(F::LR_Xt, F::F2, [](const GeometryPair& gp, const RollingState& q, const FCtx& c) {
    return combo(gp, q,
                 {{-c.f2_phi, F::LR_Yt},
                  {c.cp.G_xt, F::LNS_AYt},
                  {c.om * c.cp.G_yt - c.cp.H_xt, F::LNS_Z},
                  {-(c.cp.H_xt * c.cp.G_yt + c.cp.H_yt * c.cp.G_xt + c.om * c.s2t +
                     c.om * c.lrx_Gy),
                   F::NU_TXt},
                  {-(c.om * c.cp.G_xt * c.cp.G_yt + c.om * c.pzt - c.lrx_Hy), F::NU_TYt}});
  });
  add(F::LR_Yt, F::F2, [](const GeometryPair& gp, const RollingState& q, const FCtx& c) {
    QTangent t = combo(
        gp, q,
        {{c.f2_phi, F::LR_Xt},
         {c.cp.G_yt, F::LNS_AYt},
         {-2 * c.cp.H_yt, F::LNS_Z},
         {-(2 * c.cp.G_yt * c.cp.H_yt + c.om * c.pzt + c.om * c.lry_Gy), F::NU_TXt},
         {-(c.om * c.cp.G_yt * c.cp.G_yt + c.om * (c.s1t - c.K) +
            c.om * c.om * c.om * (c.K - c.sig) + c.lry_Hy),
          F::NU_TYt}});
    t.c += realize(gp, q, F::NU_ROLBAR).c * (-(c.sig - (c.K - c.sig) * c.om * c.om));
    return t;
  });
  add(F::NU_ROLBAR, F::F1, [](const GeometryPair& gp, const RollingState& q, const FCtx& c) {
    QTangent t = combo(
        gp, q,
        {{c.om * c.nphi_TY, F::LNS_AXt},
         {-c.om, F::LNS_Z},
         {-c.om * (-c.f1_phi + c.cp.H_xt * c.nphi_TY + c.cp.G_xt * c.nom_TY + c.rb_Gx),
          F::NU_TXt},
         {-(c.om * c.om * c.om * c.cp.G_xt + c.f1_om +
            c.om * c.om * c.cp.G_xt * c.nphi_TY - c.rb_Hx),
          F::NU_TYt}});
    t.c += realize(gp, q, F::NU_ROLBAR).c * (c.om * c.om * c.cp.G_xt);
    return t;
  });
  add(F::NU_ROLBAR, F::F2, [](const GeometryPair& gp, const RollingState& q, const FCtx& c) {
    QTangent t = combo(
        gp, q,
        {{c.om * c.om + c.om * c.nphi_TY, F::LNS_AYt},
         {-c.om * c.nom_TY, F::LNS_Z},
         {-c.om * (-c.f2_phi + c.cp.H_yt * c.nphi_TY + c.cp.G_yt * c.nom_TY + c.rb_Gy),
          F::NU_TXt},
         {-c.om * c.om * c.om * c.cp.G_yt - c.f2_om -
              c.om * c.om * c.cp.G_yt * c.nphi_TY + c.rb_Hy,
          F::NU_TYt}});
    t.c += realize(gp, q, F::NU_ROLBAR).c * (c.om * c.om * c.cp.G_yt);
    return t;
  });
  add(F::F1, F::F2, [](const GeometryPair& gp, const RollingState& q, const FCtx& c) {
    double ks = c.K - c.sig;
    double cAX = -(1 + c.om * c.om) * c.cp.G_xt + c.om * c.dz_phi -
                 c.cp.G_yt * c.pzt / ks - c.cp.H_yt * (c.s2t - c.sig) / (c.om * ks);
    double cAY = -c.cp.G_yt + c.om * c.cp.H_xt + c.cp.G_xt * c.pzt / ks +
                 c.cp.H_xt * (c.s2t - c.sig) / (c.om * ks);
    double cZ = c.cp.H_yt +
                c.om * c.cp.G_xt * ((c.s1t - c.sig) / ks + 2 * c.om * c.om - 1) +
                c.cp.H_xt * c.pzt / ks + c.day_om;
    double cTX = c.cp.G_xt * c.cp.H_xt + c.cp.G_yt * c.cp.H_yt + c.om * c.pzt -
                 2 * (c.cp.G_xt * c.cp.H_yt - c.cp.G_yt * c.cp.H_xt) * c.pzt / ks +
                 c.cp.G_xt * c.dax_om + c.cp.G_yt * c.day_om + c.om * c.f2_Gx -
                 c.om * c.f1_Gy - c.cp.G_xt * c.dz_om - c.om * c.cp.H_xt * c.dz_phi;
    double cTY = c.om * (c.s1t - c.K + c.sig) + c.om * c.cp.G_xt * c.cp.G_xt +
                 c.om * c.cp.G_yt * c.cp.G_yt + c.f1_Hy - c.f2_Hx -
                 c.om * c.om * c.cp.G_xt * c.dz_phi +
                 (c.cp.G_xt * c.cp.H_yt - c.cp.G_yt * c.cp.H_xt) * (c.s2t - c.sig) / ks;
    double cXY = c.sig - c.om * c.om * ks -
                 c.om * (c.cp.G_xt * c.cp.H_yt - c.cp.G_yt * c.cp.H_xt);
    return combo(gp, q,
                 {{cAX, F::LNS_AXt},
                  {cAY, F::LNS_AYt},
                  {cZ, F::LNS_Z},
                  {cTX, F::NU_TXt},
                  {cTY, F::NU_TYt},
                  {cXY, F::NU_XY}});
  });
  return recs;
}

// ---------------------------------------------------------------------------
// the general bracket formulas with seeded smooth generators

GeneratorPair seeded_pair(unsigned seed) {
  auto rnd = [seed](int salt) {
    // small deterministic coefficients in [-0.5, 0.5]
    unsigned x = seed * 2654435761u + unsigned(salt) * 40503u + 12345u;
    x ^= x >> 13;
    x *= 2246822519u;
    x ^= x >> 11;
    return (double(x % 10007) / 10007.0 - 0.5);
  };
  GeneratorPair g;
  g.T = [rnd](const RollingState& q) {
    return V2{{rnd(1) + rnd(2) * std::sin(q.x[0]) + rnd(3) * q.x[1],
               rnd(4) + rnd(5) * q.x[0] + rnd(6) * std::cos(q.x[1])}};
  };
  g.That = [rnd](const RollingState& q) {
    return V3{{rnd(7) + rnd(8) * q.xh[1], rnd(9) + rnd(10) * std::sin(q.xh[0]),
               rnd(11) + rnd(12) * q.xh[2]}};
  };
  return g;
}

VerticalGen seeded_vert(unsigned seed) {
  auto rnd = [seed](int salt) {
    unsigned x = seed * 2654435761u + unsigned(salt) * 40503u + 54321u;
    x ^= x >> 13;
    x *= 2246822519u;
    x ^= x >> 11;
    return (double(x % 10007) / 10007.0 - 0.5);
  };
  VerticalGen g;
  g.U = [rnd](const RollingState& q) {
    double u1 = rnd(1) + rnd(2) * q.x[0] + rnd(3) * q.xh[1];
    double u2 = rnd(4) + rnd(5) * std::sin(q.x[1]) + rnd(6) * q.xh[0];
    double u3 = rnd(7) + rnd(8) * q.x[0] * 0.5 + rnd(9) * std::cos(q.xh[2]);
    V3 z = q.zhat();
    M32 B{};
    B.set_col(0, q.A.col(1) * u1 + z * u2);
    B.set_col(1, -(q.A.col(0) * u1) + z * u3);
    return B;
  };
  return g;
}

std::vector<IdentityRecord> table_p1_7() {
  std::vector<IdentityRecord> recs;
  int idx = 0;
  for (unsigned seed : {11u, 29u, 47u}) {
    {
      IdentityRecord r;
      r.table = "P1_7";
      r.index = idx++;
      r.name = "[LNS(T), LNS(S)] seed " + std::to_string(seed);
      r.hypothesis = hyp_none();
      r.lhs = [seed](const GeometryPair& gp, const RollingState& q) {
        GeneratorPair T = seeded_pair(seed), S = seeded_pair(seed + 1);
        return IdentityValue::tangent(
            fd_bracket(gp, ns_field(gp, T), ns_field(gp, S), q));
      };
      r.rhs = [seed](const GeometryPair& gp, const RollingState& q) {
        GeneratorPair T = seeded_pair(seed), S = seeded_pair(seed + 1);
        return IdentityValue::tangent(general_bracket_ns_ns(gp, T, S, q));
      };
      recs.push_back(r);
    }
    {
      IdentityRecord r;
      r.table = "P1_7";
      r.index = idx++;
      r.name = "[LNS(T), nu(U)] seed " + std::to_string(seed);
      r.hypothesis = hyp_none();
      r.lhs = [seed](const GeometryPair& gp, const RollingState& q) {
        GeneratorPair T = seeded_pair(seed);
        VerticalGen U = seeded_vert(seed + 2);
        return IdentityValue::tangent(fd_bracket(gp, ns_field(gp, T), nu_field(gp, U), q));
      };
      r.rhs = [seed](const GeometryPair& gp, const RollingState& q) {
        GeneratorPair T = seeded_pair(seed);
        VerticalGen U = seeded_vert(seed + 2);
        return IdentityValue::tangent(general_bracket_ns_nu(gp, T, U, q));
      };
      recs.push_back(r);
    }
    {
      IdentityRecord r;
      r.table = "P1_7";
      r.index = idx++;
      r.name = "[nu(U), nu(V)] seed " + std::to_string(seed);
      r.hypothesis = hyp_none();
      r.lhs = [seed](const GeometryPair& gp, const RollingState& q) {
        VerticalGen U = seeded_vert(seed + 2), V = seeded_vert(seed + 3);
        return IdentityValue::tangent(fd_bracket(gp, nu_field(gp, U), nu_field(gp, V), q));
      };
      r.rhs = [seed](const GeometryPair& gp, const RollingState& q) {
        VerticalGen U = seeded_vert(seed + 2), V = seeded_vert(seed + 3);
        return IdentityValue::tangent(general_bracket_nu_nu(gp, U, V, q));
      };
      recs.push_back(r);
    }
  }
  return recs;
}

// appendix curvature components against the direct Riemann assembly
std::vector<IdentityRecord> table_app_curv() {
  IdentityRecord r;
  r.table = "APP_CURV";
  r.index = 0;
  r.name = "curvature components a1..c3 vs Riemann oracle";
  r.hypothesis = hyp_none();
  r.lhs = [](const GeometryPair& gp, const RollingState& q) {
    return IdentityValue::matrix33(
        curvature_operator(gp.Mh, q.xh, default_frame_field(gp.Mh)));
  };
  r.rhs = [](const GeometryPair& gp, const RollingState& q) {
    return IdentityValue::matrix33(
        curvature_operator_oracle(gp.Mh, q.xh, orthonormal_frame(gp.Mh, q.xh)));
  };
  return {r};
}

}  // namespace

std::vector<std::string> all_table_ids() {
  return {"L2_1",   "LE6_3", "LE_LR_XT_YT", "L2_2",     "LE_NUAXAY_PHI",
          "L2_3",   "L2_4",  "L2_5",        "L2_6",     "L2_7",
          "L2_8",   "L2_9",  "LE_APP31",    "G_FORMS",  "LEMMAF",
          "P1_7",   "APP_CURV"};
}

std::vector<IdentityRecord> identity_table(const std::string& id) {
  if (id == "L2_1") return table_l2_1();
  if (id == "LE6_3") return table_le6_3();
  if (id == "LE_LR_XT_YT") return table_le_lr_tilde();
  if (id == "L2_2") return table_l2_2();
  if (id == "LE_NUAXAY_PHI") return table_nuaxay();
  if (id == "L2_3") return table_l2_3();
  if (id == "L2_4") return table_l2_4();
  if (id == "L2_5") return table_l2_5();
  if (id == "L2_6") return table_l2_6();
  if (id == "L2_7") return table_l2_789(7);
  if (id == "L2_8") return table_l2_789(8);
  if (id == "L2_9") return table_l2_789(9);
  if (id == "LE_APP31") return table_le_app31();
  if (id == "G_FORMS") return table_g_forms();
  if (id == "LEMMAF") return table_lemmaf();
  if (id == "P1_7") return table_p1_7();
  if (id == "APP_CURV") return table_app_curv();
  throw ConfigError("unknown identity table: " + id);
}

}  // namespace rolling
