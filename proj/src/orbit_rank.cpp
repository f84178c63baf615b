#include "rolling/orbit_rank.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "rolling/poly3.hpp"

namespace rolling {

namespace {

// value and derivative tensors of a chart vector field at the chart center
struct FieldDerivs {
  int order = 0;  // available derivative levels
  V8 val{};
  std::vector<double> J;  // [i*8+j] = d_j F^i
  std::vector<double> H;  // [i*64+j*8+k]
  std::vector<double> T;  // [i*512+j*64+k*8+l]
  std::vector<double> Q;  // [i*4096+j*512+k*64+l*8+m]
};

FieldDerivs from_poly(const std::array<Poly4, 8>& F) {
  FieldDerivs d;
  d.order = 4;
  d.J.assign(64, 0.0);
  d.H.assign(512, 0.0);
  d.T.assign(4096, 0.0);
  d.Q.assign(32768, 0.0);
  const auto& tab = polyt_detail::tables<4>();
  for (int i = 0; i < 8; ++i) {
    for (int m = 0; m < Poly4::kTerms; ++m) {
      double cf = F[i].c[m];
      if (cf == 0.0) continue;
      const auto& e = tab.expo[m];
      int deg = tab.degree[m];
      // derivative value = coefficient * alpha!
      double fact = 1.0;
      std::array<int, 4> idxs{};
      int n = 0;
      for (int v = 0; v < polyt_detail::kVars; ++v) {
        for (int k = 2; k <= e[v]; ++k) fact *= k;
        for (int k = 0; k < e[v]; ++k) idxs[n++] = v;
      }
      double dv = cf * fact;
      if (deg == 0) {
        d.val[i] = dv;
      } else if (deg == 1) {
        d.J[i * 8 + idxs[0]] = dv;
      } else {
        // fill every permutation of the (sorted) derivative indices
        std::sort(idxs.begin(), idxs.begin() + deg);
        do {
          if (deg == 2)
            d.H[i * 64 + idxs[0] * 8 + idxs[1]] = dv;
          else if (deg == 3)
            d.T[i * 512 + idxs[0] * 64 + idxs[1] * 8 + idxs[2]] = dv;
          else
            d.Q[i * 4096 + idxs[0] * 512 + idxs[1] * 64 + idxs[2] * 8 + idxs[3]] = dv;
        } while (std::next_permutation(idxs.begin(), idxs.begin() + deg));
      }
    }
  }
  return d;
}

// coordinate Lie bracket with derivative propagation:
// [F,G]^i = F^j d_j G^i - G^j d_j F^i
FieldDerivs bracket_derivs(const FieldDerivs& F, const FieldDerivs& G) {
  FieldDerivs B;
  B.order = std::min(F.order, G.order) - 1;
  for (int i = 0; i < 8; ++i) {
    double s = 0;
    for (int j = 0; j < 8; ++j) s += F.val[j] * G.J[i * 8 + j] - G.val[j] * F.J[i * 8 + j];
    B.val[i] = s;
  }
  if (B.order >= 1) {
    B.J.assign(64, 0.0);
    for (int i = 0; i < 8; ++i)
      for (int k = 0; k < 8; ++k) {
        double s = 0;
        for (int j = 0; j < 8; ++j) {
          s += F.J[j * 8 + k] * G.J[i * 8 + j] + F.val[j] * G.H[i * 64 + j * 8 + k];
          s -= G.J[j * 8 + k] * F.J[i * 8 + j] + G.val[j] * F.H[i * 64 + j * 8 + k];
        }
        B.J[i * 8 + k] = s;
      }
  }
  if (B.order >= 2) {
    B.H.assign(512, 0.0);
    for (int i = 0; i < 8; ++i)
      for (int k = 0; k < 8; ++k)
        for (int l = k; l < 8; ++l) {
          double s = 0;
          for (int j = 0; j < 8; ++j) {
            s += F.H[j * 64 + k * 8 + l] * G.J[i * 8 + j] +
                 F.J[j * 8 + k] * G.H[i * 64 + j * 8 + l] +
                 F.J[j * 8 + l] * G.H[i * 64 + j * 8 + k] +
                 F.val[j] * G.T[i * 512 + j * 64 + k * 8 + l];
            s -= G.H[j * 64 + k * 8 + l] * F.J[i * 8 + j] +
                 G.J[j * 8 + k] * F.H[i * 64 + j * 8 + l] +
                 G.J[j * 8 + l] * F.H[i * 64 + j * 8 + k] +
                 G.val[j] * F.T[i * 512 + j * 64 + k * 8 + l];
          }
          B.H[i * 64 + k * 8 + l] = s;
          B.H[i * 64 + l * 8 + k] = s;
        }
  }
  if (B.order >= 3) {
    B.T.assign(4096, 0.0);
    auto one_side = [](const FieldDerivs& A, const FieldDerivs& C, int i, int k, int l, int m) {
      double s = 0;
      for (int j = 0; j < 8; ++j) {
        s += A.T[j * 512 + k * 64 + l * 8 + m] * C.J[i * 8 + j];
        s += A.H[j * 64 + k * 8 + l] * C.H[i * 64 + j * 8 + m];
        s += A.H[j * 64 + k * 8 + m] * C.H[i * 64 + j * 8 + l];
        s += A.H[j * 64 + l * 8 + m] * C.H[i * 64 + j * 8 + k];
        s += A.J[j * 8 + k] * C.T[i * 512 + j * 64 + l * 8 + m];
        s += A.J[j * 8 + l] * C.T[i * 512 + j * 64 + k * 8 + m];
        s += A.J[j * 8 + m] * C.T[i * 512 + j * 64 + k * 8 + l];
        s += A.val[j] * C.Q[i * 4096 + j * 512 + k * 64 + l * 8 + m];
      }
      return s;
    };
    for (int i = 0; i < 8; ++i)
      for (int k = 0; k < 8; ++k)
        for (int l = k; l < 8; ++l)
          for (int m = l; m < 8; ++m) {
            double s = one_side(F, G, i, k, l, m) - one_side(G, F, i, k, l, m);
            int p[3] = {k, l, m};
            std::sort(p, p + 3);
            do {
              B.T[i * 512 + p[0] * 64 + p[1] * 8 + p[2]] = s;
            } while (std::next_permutation(p, p + 3));
          }
  }
  return B;
}

FieldDerivs generator_derivs(const GeometryPair& gp, const QChart& chart, int which) {
  Vec<Poly4, 8> y;
  for (int i = 0; i < 8; ++i) y[i] = Poly4::variable(i, 0.0);
  Vec<Poly4, 8> out = lr_field_chart(gp, chart.q0.x, chart.q0.xh, chart.R0, y, which);
  std::array<Poly4, 8> arr;
  for (int i = 0; i < 8; ++i) arr[i] = out[i];
  return from_poly(arr);
}

int rank_of(const std::vector<V8>& vecs, double tau, std::vector<double>* sv = nullptr) {
  if (vecs.empty()) return 0;
  Eigen::MatrixXd m(8, vecs.size());
  for (size_t j = 0; j < vecs.size(); ++j) {
    double n = norm(vecs[j]);
    for (int i = 0; i < 8; ++i) m(i, j) = n > 1e-300 ? vecs[j][i] / n : 0.0;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  auto s = svd.singularValues();
  if (sv) {
    sv->assign(s.data(), s.data() + s.size());
  }
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tau * s(0)) ++r;
  return r;
}

}  // namespace

// `depth` counts bracket orders: depth 1 appends [X,Y], depth 2 the brackets
// of the generators with it, and so on
BracketFamily bracket_family(const GeometryPair& gp, const RollingState& q0, int depth) {
  QChart chart(gp, q0);
  FieldDerivs fx = generator_derivs(gp, chart, 0);
  FieldDerivs fy = generator_derivs(gp, chart, 1);

  BracketFamily fam;
  fam.vectors = {fx.val, fy.val};
  fam.labels = {"X", "Y"};
  fam.depth_reached = 0;

  std::vector<std::pair<FieldDerivs, std::string>> layer;
  layer.emplace_back(bracket_derivs(fx, fy), "[X,Y]");

  int prev_rank = rank_of(fam.vectors, 1e-7);
  int saturations = 0;
  for (int order = 1; order <= depth && !layer.empty(); ++order) {
    for (auto& [fd, lbl] : layer) {
      fam.vectors.push_back(fd.val);
      fam.labels.push_back(lbl);
    }
    fam.depth_reached = order;
    int r = rank_of(fam.vectors, 1e-7);
    saturations = (r == prev_rank) ? saturations + 1 : 0;
    prev_rank = r;
    if (saturations >= 2 || r == 8) break;
    if (order == depth || layer.front().first.order < 1) break;
    // next layer: brackets of the generators with the current layer
    std::vector<std::pair<FieldDerivs, std::string>> next;
    for (auto& [fd, lbl] : layer) {
      next.emplace_back(bracket_derivs(fx, fd), "[X," + lbl + "]");
      next.emplace_back(bracket_derivs(fy, fd), "[Y," + lbl + "]");
    }
    layer = std::move(next);
  }
  return fam;
}

BracketFamily bracket_family_fd(const GeometryPair& gp, const RollingState& q0, int depth) {
  // nested finite-difference closures; steps widen with nesting level
  QChart chart(gp, q0);
  using ChartField = std::function<V8(const V8&)>;
  ChartField fx = push_to_chart(chart, as_field(gp, FieldId::LR_X));
  ChartField fy = push_to_chart(chart, as_field(gp, FieldId::LR_Y));
  auto mk_bracket = [](const ChartField& F, const ChartField& G, double h) {
    return ChartField([F, G, h](const V8& y) {
      V8 F0 = F(y), G0 = G(y), out{};
      for (int j = 0; j < 8; ++j) {
        V8 yp = y, ym = y;
        yp[j] += h;
        ym[j] -= h;
        out += (G(yp) - G(ym)) * (0.5 / h * F0[j]) - (F(yp) - F(ym)) * (0.5 / h * G0[j]);
      }
      return out;
    });
  };
  BracketFamily fam;
  V8 zero{};
  fam.vectors = {fx(zero), fy(zero)};
  fam.labels = {"X", "Y"};
  std::vector<std::pair<ChartField, std::string>> layer{{mk_bracket(fx, fy, 1e-4), "[X,Y]"}};
  double h = 1e-4;
  for (int order = 1; order <= depth && !layer.empty(); ++order) {
    for (auto& [f, lbl] : layer) {
      fam.vectors.push_back(f(zero));
      fam.labels.push_back(lbl);
    }
    fam.depth_reached = order;
    if (order == depth) break;
    h *= 10;
    std::vector<std::pair<ChartField, std::string>> next;
    for (auto& [f, lbl] : layer) {
      next.emplace_back(mk_bracket(fx, f, h), "[X," + lbl + "]");
      next.emplace_back(mk_bracket(fy, f, h), "[Y," + lbl + "]");
    }
    layer = std::move(next);
  }
  return fam;
}

RankReport orbit_dimension(const GeometryPair& gp, const RollingState& q0, int depth,
                           double tau) {
  RankReport rep;
  rep.family = bracket_family(gp, q0, depth);
  rep.rank = rank_of(rep.family.vectors, tau, &rep.singvals);
  if (rep.rank > 0 && rep.rank < int(rep.singvals.size()) && rep.singvals[rep.rank] > 0)
    rep.gap_ratio = rep.singvals[rep.rank - 1] / rep.singvals[rep.rank];
  else
    rep.gap_ratio = 1e18;
  rep.confident = rep.gap_ratio > 1e3;
  rep.classification = rep.rank;
  return rep;
}

std::vector<double> tangency_check(const GeometryPair& gp, const RollingState& q0,
                                   const std::vector<FieldId>& fields, int depth, double tau) {
  BracketFamily fam = bracket_family(gp, q0, depth);
  Eigen::MatrixXd m(8, fam.vectors.size());
  for (size_t j = 0; j < fam.vectors.size(); ++j) {
    double n = norm(fam.vectors[j]);
    for (int i = 0; i < 8; ++i) m(i, j) = fam.vectors[j][i] / n;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  auto s = svd.singularValues();
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tau * s(0)) ++r;
  Eigen::MatrixXd U = svd.matrixU().leftCols(r);

  QChart chart(gp, q0);
  std::vector<double> out;
  for (FieldId f : fields) {
    V8 v = chart_velocity(chart, q0, realize(gp, q0, f));
    Eigen::VectorXd ev(8);
    for (int i = 0; i < 8; ++i) ev(i) = v[i];
    Eigen::VectorXd res = ev - U * (U.transpose() * ev);
    out.push_back(res.norm() / ev.norm());
  }
  return out;
}

ImageRankReport mhat_image_rank(const GeometryPair& gp, const RollingState& q0,
                                const BracketFamily& fam, double tau) {
  ImageRankReport rep;
  Eigen::MatrixXd m(3, fam.vectors.size());
  M33 Eh;
  std::array<M33, 3> dEh;
  chart3_frame(gp.Mh, q0.xh, Eh, dEh);
  M33 g = gp.Mh.metric(q0.xh);
  V3 zc = Eh * q0.zhat();
  for (size_t j = 0; j < fam.vectors.size(); ++j) {
    V3 dxh{{fam.vectors[j][2], fam.vectors[j][3], fam.vectors[j][4]}};
    double n = norm(fam.vectors[j]);
    for (int i = 0; i < 3; ++i) m(i, j) = dxh[i] / n;
    double vn = std::sqrt(dot(g * dxh, dxh));
    if (vn > 1e-9 * n) {
      double zcomp = std::abs(dot(g * dxh, zc)) / vn;
      rep.max_z_component = std::max(rep.max_z_component, zcomp);
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  auto s = svd.singularValues();
  rep.singvals.assign(s.data(), s.data() + s.size());
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tau * std::max(s(0), 1e-300)) ++rep.rank;
  return rep;
}

std::vector<double> annihilation_residuals(const GeometryPair& gp, const RollingState& q0,
                                           const BracketFamily& fam,
                                           const std::function<double(const RollingState&)>& f) {
  QChart chart(gp, q0);
  std::vector<double> out;
  for (const V8& v : fam.vectors) {
    double n = norm(v);
    V8 dir = v * (1.0 / n);
    double h = 1e-4;
    auto sample = [&](double t) { return f(chart.state(dir * t)); };
    double d = (-sample(2 * h) + 8 * sample(h) - 8 * sample(-h) + sample(-2 * h)) / (12 * h);
    out.push_back(std::abs(d));
  }
  return out;
}

}  // namespace rolling
