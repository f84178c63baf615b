#include "rolling/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "rolling/dual.hpp"

namespace rolling {

// scalar-generic connection table of the default/adapted frame on an
// analytic diagonal chart; rows = pairs (2,3), (3,1), (1,2)
template <class S>
static Mat<S, 3, 3> conn_table3_scalar(const Chart3& c, const Vec<S, 3>& u, bool adapted) {
  Mat<S, 3, 3> E;
  std::array<Mat<S, 3, 3>, 3> dE;
  frame_diag(c, u, E, dE);
  if (adapted) {
    auto permute = [](const Mat<S, 3, 3>& m) {
      Mat<S, 3, 3> r;
      r.set_col(0, m.col(1));
      r.set_col(1, m.col(0));
      r.set_col(2, -m.col(2));
      return r;
    };
    E = permute(E);
    for (auto& m : dE) m = permute(m);
  }
  Vec<S, 3> d;
  Mat<S, 3, 3> dd;
  c.diag(u, d, dd);
  S Gc[3][3][3];
  for (int i = 0; i < 3; ++i) {
    Vec<S, 3> Ei = E.col(i);
    Mat<S, 3, 3> Gd = christoffel_dir_diag(c, u, Ei);
    for (int j = 0; j < 3; ++j) {
      Vec<S, 3> cov = Gd * E.col(j);
      for (int k = 0; k < 3; ++k)
        for (int a = 0; a < 3; ++a) cov[k] += Ei[a] * dE[a](k, j);
      for (int k = 0; k < 3; ++k) {
        S s(0.0);
        for (int m = 0; m < 3; ++m) s += d[m] * cov[m] * E(m, k);
        Gc[i][j][k] = s;
      }
    }
  }
  Mat<S, 3, 3> t;
  for (int i = 0; i < 3; ++i) {
    t(0, i) = Gc[i][1][2];
    t(1, i) = Gc[i][2][0];
    t(2, i) = Gc[i][0][1];
  }
  return t;
}

// ---------------------------------------------------------------------------
// metric access

M22 Chart2::metric(const V2& u) const {
  if (const auto* cm = std::get_if<Custom2>(&model)) return cm->metric(u);
  Vec<double, 2> d;
  M22 dd;
  diag(u, d, dd);
  M22 g;
  g(0, 0) = d[0];
  g(1, 1) = d[1];
  return g;
}

std::array<M22, 2> Chart2::metric_jac(const V2& u) const {
  if (const auto* cm = std::get_if<Custom2>(&model)) {
    if (cm->metric_jac) return cm->metric_jac(u);
    std::array<M22, 2> j;
    double h = fd_step(max_abs<2>(u));
    for (int k = 0; k < 2; ++k) {
      V2 up = u, um = u;
      up[k] += h;
      um[k] -= h;
      j[k] = (cm->metric(up) - cm->metric(um)) * (0.5 / h);
    }
    return j;
  }
  Vec<double, 2> d;
  M22 dd;
  diag(u, d, dd);
  std::array<M22, 2> j{};
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i) j[k](i, i) = dd(i, k);
  return j;
}

bool Chart2::has_analytic_jac() const {
  if (const auto* cm = std::get_if<Custom2>(&model)) return bool(cm->metric_jac);
  return true;
}

M33 Chart3::metric(const V3& u) const {
  if (const auto* cm = std::get_if<Custom3>(&model)) return cm->metric(u);
  Vec<double, 3> d;
  M33 dd;
  diag(u, d, dd);
  M33 g;
  for (int i = 0; i < 3; ++i) g(i, i) = d[i];
  return g;
}

std::array<M33, 3> Chart3::metric_jac(const V3& u) const {
  if (const auto* cm = std::get_if<Custom3>(&model)) {
    if (cm->metric_jac) return cm->metric_jac(u);
    std::array<M33, 3> j;
    double h = fd_step(max_abs<3>(u));
    for (int k = 0; k < 3; ++k) {
      V3 up = u, um = u;
      up[k] += h;
      um[k] -= h;
      j[k] = (cm->metric(up) - cm->metric(um)) * (0.5 / h);
    }
    return j;
  }
  Vec<double, 3> d;
  M33 dd;
  diag(u, d, dd);
  std::array<M33, 3> j{};
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i) j[k](i, i) = dd(i, k);
  return j;
}

bool Chart3::has_analytic_jac() const {
  if (const auto* cm = std::get_if<Custom3>(&model)) return bool(cm->metric_jac);
  return true;
}

// ---------------------------------------------------------------------------
// registry

WarpFn make_warp(const std::string& family, const std::vector<double>& coeffs) {
  WarpFn w;
  if (family == "exp") {
    w.kind = WarpFn::Kind::Exp;
    w.a = coeffs.size() > 0 ? coeffs[0] : 1.0;
    w.k = coeffs.size() > 1 ? coeffs[1] : 1.0;
  } else if (family == "cosh") {
    w.kind = WarpFn::Kind::Cosh;
    w.a = coeffs.size() > 0 ? coeffs[0] : 1.0;
    w.k = coeffs.size() > 1 ? coeffs[1] : 1.0;
  } else if (family == "affine") {
    w.kind = WarpFn::Kind::Affine;
    w.a = coeffs.size() > 0 ? coeffs[0] : 1.0;
    w.b = coeffs.size() > 1 ? coeffs[1] : 0.0;
  } else if (family == "poly") {
    w.kind = WarpFn::Kind::Poly;
    w.coeffs = coeffs;
  } else {
    throw ConfigError("unknown warping family: " + family);
  }
  return w;
}

static double param(const std::map<std::string, double>& p, const std::string& k, double dflt) {
  auto it = p.find(k);
  return it == p.end() ? dflt : it->second;
}

static Fiber fiber_from_params(const std::map<std::string, double>& p, const Fiber* fiber) {
  if (fiber) return *fiber;
  Fiber f;
  f.kind = param(p, "fiber_flat", 0.0) > 0.5 ? Fiber::Kind::Flat : Fiber::Kind::Sphere;
  f.rho = param(p, "fiber_rho", 1.0);
  return f;
}

Chart2 make_chart2(const std::string& name, const std::map<std::string, double>& params,
                   const WarpFn* warp) {
  Chart2 c;
  if (name == "euclidean2") {
    c.model = Euclidean2{};
    c.domain = {{-10, -10}, {10, 10}};
  } else if (name == "sphere2") {
    c.model = Sphere2{param(params, "rho", 1.0)};
    c.domain = {{0.2, -3.1}, {M_PI - 0.2, 3.1}};
  } else if (name == "hyperbolic2") {
    c.model = Hyperbolic2{param(params, "rho", 1.0)};
    c.domain = {{0.3, -3.1}, {2.8, 3.1}};
  } else if (name == "warped2") {
    if (!warp) throw ConfigError("warped2 requires a warping function");
    c.model = Warped2{*warp};
    double r0 = param(params, "rmin", -2.0), r1 = param(params, "rmax", 2.0);
    c.domain = {{r0, -4.0}, {r1, 4.0}};
  } else {
    throw ConfigError("unknown 2-D model: " + name);
  }
  return c;
}

Chart3 make_chart3(const std::string& name, const std::map<std::string, double>& params,
                   const WarpFn* warp, const Fiber* fiber) {
  Chart3 c;
  if (name == "euclidean3") {
    c.model = Euclidean3{};
    c.domain = {{-10, -10, -10}, {10, 10, 10}};
  } else if (name == "product3" || name == "warped3") {
    Fiber f = fiber_from_params(params, fiber);
    double r0 = param(params, "rmin", -2.0), r1 = param(params, "rmax", 2.0);
    Box<3> dom;
    if (f.kind == Fiber::Kind::Sphere)
      dom = {{r0, 0.2, -3.1}, {r1, M_PI - 0.2, 3.1}};
    else
      dom = {{r0, -4.0, -4.0}, {r1, 4.0, 4.0}};
    if (name == "product3") {
      c.model = Product3{param(params, "c", 1.0), f};
    } else {
      if (!warp) throw ConfigError("warped3 requires a warping function");
      c.model = Warped3{*warp, f};
    }
    c.domain = dom;
  } else {
    throw ConfigError("unknown 3-D model: " + name);
  }
  return c;
}

// ---------------------------------------------------------------------------
// frames

static void check_spd2(const M22& g) {
  if (g(0, 0) <= 0 || g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0) <= 0)
    throw MetricNotSpd("2-D metric is not positive definite");
}
static void check_spd3(const M33& g) {
  double d1 = g(0, 0);
  double d2 = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
  double d3 = g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1)) -
              g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0)) +
              g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0));
  if (d1 <= 0 || d2 <= 0 || d3 <= 0) throw MetricNotSpd("3-D metric is not positive definite");
}

// Gram-Schmidt on the coordinate fields in index order, then orientation fix
template <int N>
static Mat<double, N, N> gram_schmidt(const Mat<double, N, N>& g, double orientation) {
  Mat<double, N, N> E{};
  for (int j = 0; j < N; ++j) {
    Vec<double, N> v{};
    v[j] = 1.0;
    for (int p = 0; p < j; ++p) {
      // subtract g-projection onto column p
      Vec<double, N> ep = E.col(p);
      double c = dot(g * v, ep);
      for (int i = 0; i < N; ++i) v[i] -= c * ep[i];
    }
    double n = std::sqrt(dot(g * v, v));
    for (int i = 0; i < N; ++i) E(i, j) = v[i] / n;
  }
  if (orientation < 0)
    for (int i = 0; i < N; ++i) E(i, N - 1) = -E(i, N - 1);
  return E;
}

Frame2 orthonormal_frame(const Chart2& c, const V2& u) {
  if (c.analytic_diag()) {
    M22 E;
    std::array<M22, 2> dE;
    Vec<double, 2> d;
    M22 dd;
    c.diag(u, d, dd);
    if (d[0] <= 0 || d[1] <= 0) throw MetricNotSpd("2-D metric is not positive definite");
    frame_diag(c, u, E, dE);
    return {u, E};
  }
  M22 g = c.metric(u);
  check_spd2(g);
  return {u, gram_schmidt<2>(g, c.orientation)};
}

Frame3 orthonormal_frame(const Chart3& c, const V3& u) {
  if (c.analytic_diag()) {
    M33 E;
    std::array<M33, 3> dE;
    Vec<double, 3> d;
    M33 dd;
    c.diag(u, d, dd);
    if (d[0] <= 0 || d[1] <= 0 || d[2] <= 0)
      throw MetricNotSpd("3-D metric is not positive definite");
    frame_diag(c, u, E, dE);
    return {u, E};
  }
  M33 g = c.metric(u);
  check_spd3(g);
  return {u, gram_schmidt<3>(g, c.orientation)};
}

Frame3 adapted_frame(const Chart3& c, const V3& u) {
  if (!c.has_base_direction())
    throw ScenarioMismatch("adapted frame requires a product or warped 3-D model");
  Frame3 f = orthonormal_frame(c, u);
  M33 E = f.E;
  M33 A{};
  A.set_col(0, E.col(1));
  A.set_col(1, E.col(0));
  A.set_col(2, -E.col(2));
  return {u, A};
}

Frame2 FrameField2::operator()(const V2& u) const {
  if (kind == Kind::Custom) return custom(u);
  return orthonormal_frame(*chart, u);
}
Frame3 FrameField3::operator()(const V3& u) const {
  if (kind == Kind::Custom) return custom(u);
  if (kind == Kind::Adapted) return adapted_frame(*chart, u);
  return orthonormal_frame(*chart, u);
}

FrameField2 default_frame_field(const Chart2& c) { return {FrameField2::Kind::Default, &c, {}}; }
FrameField3 default_frame_field(const Chart3& c) { return {FrameField3::Kind::Default, &c, {}}; }
FrameField3 adapted_frame_field(const Chart3& c) { return {FrameField3::Kind::Adapted, &c, {}}; }
FrameField2 custom_frame_field(const Chart2& c, std::function<Frame2(const V2&)> fn) {
  return {FrameField2::Kind::Custom, &c, std::move(fn)};
}
FrameField3 custom_frame_field(const Chart3& c, std::function<Frame3(const V3&)> fn) {
  return {FrameField3::Kind::Custom, &c, std::move(fn)};
}

void frame_and_derivs(const Chart2& c, const FrameField2& ff, const V2& u, M22& E,
                      std::array<M22, 2>& dE) {
  if (ff.kind == FrameField2::Kind::Default && c.analytic_diag()) {
    frame_diag(c, u, E, dE);
    return;
  }
  E = ff(u).E;
  double h = 1e-4 * std::max(1.0, max_abs<2>(u));
  for (int k = 0; k < 2; ++k) {
    auto at = [&](double s) {
      V2 us = u;
      us[k] += s;
      return ff(us).E;
    };
    dE[k] = (at(-2 * h) - at(-h) * 8.0 + at(h) * 8.0 - at(2 * h)) * (1.0 / (12 * h));
  }
}

void frame_and_derivs(const Chart3& c, const FrameField3& ff, const V3& u, M33& E,
                      std::array<M33, 3>& dE) {
  if (ff.kind != FrameField3::Kind::Custom && c.analytic_diag()) {
    M33 E0;
    std::array<M33, 3> d0;
    frame_diag(c, u, E0, d0);
    if (ff.kind == FrameField3::Kind::Default) {
      E = E0;
      dE = d0;
      return;
    }
    // adapted: columns (1, 0, -2) of the default frame
    auto permute = [](const M33& m) {
      M33 r{};
      r.set_col(0, m.col(1));
      r.set_col(1, m.col(0));
      r.set_col(2, -m.col(2));
      return r;
    };
    E = permute(E0);
    for (int k = 0; k < 3; ++k) dE[k] = permute(d0[k]);
    return;
  }
  E = ff(u).E;
  double h = 1e-4 * std::max(1.0, max_abs<3>(u));
  for (int k = 0; k < 3; ++k) {
    auto at = [&](double s) {
      V3 us = u;
      us[k] += s;
      return ff(us).E;
    };
    dE[k] = (at(-2 * h) - at(-h) * 8.0 + at(h) * 8.0 - at(2 * h)) * (1.0 / (12 * h));
  }
}

// ---------------------------------------------------------------------------
// Christoffel symbols

template <int N>
static void require_spd(const Mat<double, N, N>& g) {
  // leading principal minors
  double m1 = g(0, 0);
  double m2 = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
  double mn = m2;
  if constexpr (N == 3) {
    mn = g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1)) -
         g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0)) +
         g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0));
  }
  if (m1 <= 0 || m2 <= 0 || mn <= 0)
    throw MetricNotSpd("metric is not positive definite at the evaluation point");
}

template <int N, class Chart>
static std::array<Mat<double, N, N>, N> christoffel_impl(const Chart& c,
                                                         const Vec<double, N>& u) {
  c.require_interior(u);
  auto g = c.metric(u);
  require_spd<N>(g);
  auto jac = c.metric_jac(u);
  auto ginv = inverse(g);
  std::array<Mat<double, N, N>, N> G{};
  for (int k = 0; k < N; ++k)
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        double s = 0;
        for (int l = 0; l < N; ++l)
          s += ginv(k, l) * (jac[i](j, l) + jac[j](i, l) - jac[l](i, j));
        G[k](i, j) = 0.5 * s;
      }
  return G;
}

Christoffel2 christoffel(const Chart2& c, const V2& u) { return {christoffel_impl<2>(c, u)}; }
Christoffel3 christoffel(const Chart3& c, const V3& u) { return {christoffel_impl<3>(c, u)}; }

M22 christoffel_dir(const Chart2& c, const V2& u, const V2& v) {
  if (c.analytic_diag()) return christoffel_dir_diag(c, u, v);
  auto G = christoffel(c, u);
  M22 r{};
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i) r(k, j) += G.G[k](i, j) * v[i];
  return r;
}

M33 christoffel_dir(const Chart3& c, const V3& u, const V3& v) {
  if (c.analytic_diag()) return christoffel_dir_diag(c, u, v);
  auto G = christoffel(c, u);
  M33 r{};
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) r(k, j) += G.G[k](i, j) * v[i];
  return r;
}

// ---------------------------------------------------------------------------
// connection tables

ConnTable2 connection_table(const Chart2& c, const V2& u, const FrameField2& frame) {
  M22 E;
  std::array<M22, 2> dE;
  frame_and_derivs(c, frame, u, E, dE);
  M22 g = c.metric(u);
  ConnTable2 t;
  for (int i = 0; i < 2; ++i) {
    V2 Ei = E.col(i);
    // nabla_{E_i} E_1 in chart components
    V2 cov{};
    for (int k = 0; k < 2; ++k) cov[k] = Ei[0] * dE[0](k, 0) + Ei[1] * dE[1](k, 0);
    M22 Gd = christoffel_dir(c, u, Ei);
    cov += Gd * E.col(0);
    double val = dot(g * cov, E.col(1));
    (i == 0 ? t.g1 : t.g2) = val;
  }
  return t;
}

ConnTable3 connection_table(const Chart3& c, const V3& u, const FrameField3& frame) {
  M33 E;
  std::array<M33, 3> dE;
  frame_and_derivs(c, frame, u, E, dE);
  M33 g = c.metric(u);
  // full coefficients Gamma^i_{(j,k)} = g(nabla_{E_i} E_j, E_k)
  double Gc[3][3][3];
  for (int i = 0; i < 3; ++i) {
    V3 Ei = E.col(i);
    M33 Gd = christoffel_dir(c, u, Ei);
    for (int j = 0; j < 3; ++j) {
      V3 cov{};
      for (int k = 0; k < 3; ++k)
        cov[k] = Ei[0] * dE[0](k, j) + Ei[1] * dE[1](k, j) + Ei[2] * dE[2](k, j);
      cov += Gd * E.col(j);
      for (int k = 0; k < 3; ++k) Gc[i][j][k] = dot(g * cov, E.col(k));
    }
  }
  ConnTable3 t;
  for (int i = 0; i < 3; ++i) {
    t.m(0, i) = Gc[i][1][2];  // (2,3)
    t.m(1, i) = Gc[i][2][0];  // (3,1)
    t.m(2, i) = Gc[i][0][1];  // (1,2)
  }
  return t;
}

// ---------------------------------------------------------------------------
// curvature

V2 riemann_apply(const Chart2& c, const V2& u, const V2& a, const V2& b, const V2& w) {
  double h = 1e-5 * std::max(1.0, max_abs<2>(u));
  std::array<Christoffel2, 2> Gp, Gm;
  for (int k = 0; k < 2; ++k) {
    V2 up = u, um = u;
    up[k] += h;
    um[k] -= h;
    Gp[k] = christoffel(c, up);
    Gm[k] = christoffel(c, um);
  }
  auto G = christoffel(c, u);
  V2 out{};
  for (int l = 0; l < 2; ++l) {
    double s = 0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          double dG = (Gp[i].G[l](j, k) - Gm[i].G[l](j, k)) * (0.5 / h) -
                      (Gp[j].G[l](i, k) - Gm[j].G[l](i, k)) * (0.5 / h);
          double quad = 0;
          for (int m = 0; m < 2; ++m)
            quad += G.G[l](i, m) * G.G[m](j, k) - G.G[l](j, m) * G.G[m](i, k);
          s += (dG + quad) * a[i] * b[j] * w[k];
        }
    out[l] = s;
  }
  return out;
}

V3 riemann_apply(const Chart3& c, const V3& u, const V3& a, const V3& b, const V3& w) {
  double h = 1e-5 * std::max(1.0, max_abs<3>(u));
  std::array<Christoffel3, 3> Gp, Gm;
  for (int k = 0; k < 3; ++k) {
    V3 up = u, um = u;
    up[k] += h;
    um[k] -= h;
    Gp[k] = christoffel(c, up);
    Gm[k] = christoffel(c, um);
  }
  auto G = christoffel(c, u);
  V3 out{};
  for (int l = 0; l < 3; ++l) {
    double s = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          if (a[i] == 0.0 || b[j] == 0.0 || w[k] == 0.0) continue;
          double dG = (Gp[i].G[l](j, k) - Gm[i].G[l](j, k)) * (0.5 / h) -
                      (Gp[j].G[l](i, k) - Gm[j].G[l](i, k)) * (0.5 / h);
          double quad = 0;
          for (int m = 0; m < 3; ++m)
            quad += G.G[l](i, m) * G.G[m](j, k) - G.G[l](j, m) * G.G[m](i, k);
          s += (dG + quad) * a[i] * b[j] * w[k];
        }
    out[l] = s;
  }
  return out;
}

double gaussian_curvature(const Chart2& c, const V2& u) {
  V2 e1{{1, 0}}, e2{{0, 1}};
  V2 r = riemann_apply(c, u, e1, e2, e2);
  M22 g = c.metric(u);
  double det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
  return dot(g * r, e1) / det;
}

double gaussian_curvature_frame(const Chart2& c, const V2& u, const FrameField2& frame) {
  ConnTable2 t0 = connection_table(c, u, frame);
  M22 E = frame(u).E;
  double h = 1e-4 * std::max(1.0, max_abs<2>(u));
  auto dir_deriv = [&](const V2& dir, bool first) {
    auto at = [&](double s) {
      V2 us = u;
      for (int i = 0; i < 2; ++i) us[i] += s * dir[i];
      ConnTable2 t = connection_table(c, us, frame);
      return first ? t.g1 : t.g2;
    };
    return (at(-2 * h) - 8 * at(-h) + 8 * at(h) - at(2 * h)) / (12 * h);
  };
  double YG1 = dir_deriv(E.col(1), true);
  double XG2 = dir_deriv(E.col(0), false);
  return YG1 - XG2 - (t0.g1 * t0.g1 + t0.g2 * t0.g2);
}

M33 curvature_operator(const Chart3& c, const V3& u, const FrameField3& frame) {
  // connection coefficients and their frame-directional derivatives
  ConnTable3 t0 = connection_table(c, u, frame);
  M33 E = frame(u).E;
  std::array<ConnTable3, 3> dT;  // dT[i] = E_i(Gamma-table)
  if (frame.kind != FrameField3::Kind::Custom && c.analytic_diag()) {
    // dual numbers give the exact directional derivative
    bool adapted = frame.kind == FrameField3::Kind::Adapted;
    for (int i = 0; i < 3; ++i) {
      Vec<Dual, 3> ud;
      for (int k = 0; k < 3; ++k) ud[k] = Dual(u[k], E(k, i));
      Mat<Dual, 3, 3> t = conn_table3_scalar(c, ud, adapted);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) dT[i].m(a, b) = t(a, b).d;
    }
  } else {
    double h = 1e-4 * std::max(1.0, max_abs<3>(u));
    for (int i = 0; i < 3; ++i) {
      auto at = [&](double s) {
        V3 us = u;
        for (int k = 0; k < 3; ++k) us[k] += s * E(k, i);
        return connection_table(c, us, frame).m;
      };
      dT[i].m = (at(-2 * h) - at(-h) * 8.0 + at(h) * 8.0 - at(2 * h)) * (1.0 / (12 * h));
    }
  }
  auto G = [&](int i, int j, int k) { return t0.coeff(i, j, k); };
  // directional derivative of Gamma^i2_{(j,k)} along E_{i1}
  auto dG = [&](int i1, int i2, int j, int k) { return dT[i1 - 1].coeff(i2, j, k); };

  double a1 = dG(1, 2, 2, 3) - dG(2, 1, 2, 3) + (G(1, 3, 1) + G(2, 2, 3)) * G(2, 1, 2) +
              (-G(2, 3, 1) - G(1, 2, 3)) * G(3, 2, 3) + (G(1, 2, 3) - G(2, 3, 1)) * G(1, 1, 2);
  double b1 = dG(1, 2, 3, 1) - dG(2, 1, 3, 1) + (G(1, 3, 1) + G(2, 2, 3)) * G(1, 1, 2) +
              (-G(2, 3, 1) - G(1, 2, 3)) * G(3, 3, 1) + (G(2, 3, 1) - G(1, 2, 3)) * G(2, 1, 2);
  double c1 = dG(1, 2, 1, 2) - dG(2, 1, 1, 2) + G(1, 1, 2) * G(1, 1, 2) +
              (-G(1, 2, 3) - G(2, 3, 1)) * G(3, 1, 2) + G(1, 2, 3) * G(2, 3, 1) -
              G(1, 3, 1) * G(2, 2, 3) + G(2, 1, 2) * G(2, 1, 2);
  double a2 = dG(2, 3, 2, 3) - dG(3, 2, 2, 3) + G(2, 2, 3) * G(2, 2, 3) +
              (-G(2, 3, 1) - G(3, 1, 2)) * G(1, 2, 3) + G(2, 3, 1) * G(3, 1, 2) -
              G(2, 1, 2) * G(3, 3, 1) + G(3, 2, 3) * G(3, 2, 3);
  double b2 = dG(2, 3, 3, 1) - dG(3, 2, 3, 1) + (G(3, 3, 1) + G(2, 1, 2)) * G(3, 2, 3) +
              (-G(2, 3, 1) - G(3, 1, 2)) * G(1, 3, 1) + (G(2, 3, 1) - G(3, 1, 2)) * G(2, 2, 3);
  double c2 = dG(2, 3, 1, 2) - dG(3, 2, 1, 2) + (G(3, 3, 1) + G(2, 1, 2)) * G(2, 2, 3) +
              (-G(2, 3, 1) - G(3, 1, 2)) * G(1, 1, 2) + (G(3, 1, 2) - G(2, 3, 1)) * G(3, 2, 3);
  double a3 = dG(3, 1, 2, 3) - dG(1, 3, 2, 3) + (G(3, 2, 3) + G(1, 1, 2)) * G(3, 3, 1) +
              (-G(3, 1, 2) - G(1, 2, 3)) * G(2, 2, 3) +
              (G(1, 2, 3) - G(3, 1, 2)) * G(1, 3, 1);
  double b3 = dG(3, 1, 3, 1) - dG(1, 3, 3, 1) + G(1, 3, 1) * G(1, 3, 1) +
              (-G(3, 1, 2) - G(1, 2, 3)) * G(2, 3, 1) + G(1, 2, 3) * G(3, 1, 2) -
              G(3, 2, 3) * G(1, 1, 2) + G(3, 3, 1) * G(3, 3, 1);
  double c3 = dG(3, 1, 1, 2) - dG(1, 3, 1, 2) + (G(1, 1, 2) + G(3, 2, 3)) * G(1, 3, 1) +
              (-G(3, 1, 2) - G(1, 2, 3)) * G(2, 1, 2) + (G(3, 1, 2) - G(1, 2, 3)) * G(3, 3, 1);

  // columns: R(*E1) = R(E2,E3) -> (a2,b2,c2); R(*E2) = R(E3,E1) -> (a3,b3,c3);
  // R(*E3) = R(E1,E2) -> (a1,b1,c1)
  M33 R;
  R(0, 0) = a2;
  R(1, 0) = b2;
  R(2, 0) = c2;
  R(0, 1) = a3;
  R(1, 1) = b3;
  R(2, 1) = c3;
  R(0, 2) = a1;
  R(1, 2) = b1;
  R(2, 2) = c1;
  return R;
}

M33 curvature_operator_oracle(const Chart3& c, const V3& u, const Frame3& frame) {
  const M33& E = frame.E;
  M33 Einv = inverse(E);
  auto col_for_pair = [&](int a, int b) {
    // operator P of R(E_a, E_b) in frame coordinates, then its axial vector
    M33 P{};
    for (int j = 0; j < 3; ++j) {
      V3 w = riemann_apply(c, u, E.col(a), E.col(b), E.col(j));
      V3 wf = Einv * w;
      for (int i = 0; i < 3; ++i) P(i, j) = wf[i];
    }
    return axial(P);
  };
  M33 R;
  R.set_col(0, col_for_pair(1, 2));
  R.set_col(1, col_for_pair(2, 0));
  R.set_col(2, col_for_pair(0, 1));
  return R;
}

// ---------------------------------------------------------------------------
// curves

CurveFn2 line_curve(const V2& u0, const V2& v) {
  return {[u0, v](double t) {
            return V2{{u0[0] + t * v[0], u0[1] + t * v[1]}};
          },
          [v](double) { return v; }};
}

CurveFn2 circle_curve(const V2& center, double radius, double rate, double phase) {
  return {[=](double t) {
            return V2{{center[0] + radius * std::cos(rate * t + phase),
                       center[1] + radius * std::sin(rate * t + phase)}};
          },
          [=](double t) {
            return V2{{-radius * rate * std::sin(rate * t + phase),
                       radius * rate * std::cos(rate * t + phase)}};
          }};
}

CurveFn2 sampled_curve(const std::vector<V2>& samples, double t0, double t1) {
  auto dense = std::make_shared<DenseCurve<2>>();
  size_t n = samples.size();
  double h = (t1 - t0) / double(n - 1);
  dense->ts.resize(n);
  dense->us = samples;
  dense->vs.resize(n);
  for (size_t i = 0; i < n; ++i) dense->ts[i] = t0 + double(i) * h;
  for (size_t i = 0; i < n; ++i) {
    size_t a = i == 0 ? 0 : i - 1;
    size_t b = i + 1 >= n ? n - 1 : i + 1;
    dense->vs[i] = (samples[b] - samples[a]) * (1.0 / (double(b - a) * h));
  }
  return {[dense](double t) { return dense->pos(t); },
          [dense](double t) { return dense->vel(t); }};
}

template <int N>
Vec<double, N> DenseCurve<N>::pos(double t) const {
  double t0 = ts.front(), h = ts[1] - ts[0];
  int i = int(std::floor((t - t0) / h));
  i = std::max(0, std::min(int(ts.size()) - 2, i));
  double s = (t - ts[i]) / h;
  double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  double h10 = s * (1 - s) * (1 - s);
  double h01 = s * s * (3 - 2 * s);
  double h11 = s * s * (s - 1);
  return us[i] * h00 + vs[i] * (h * h10) + us[i + 1] * h01 + vs[i + 1] * (h * h11);
}

template <int N>
Vec<double, N> DenseCurve<N>::vel(double t) const {
  double t0 = ts.front(), h = ts[1] - ts[0];
  int i = int(std::floor((t - t0) / h));
  i = std::max(0, std::min(int(ts.size()) - 2, i));
  double s = (t - ts[i]) / h;
  double d00 = 6 * s * (s - 1) / h;
  double d10 = (3 * s - 1) * (s - 1);
  double d01 = -6 * s * (s - 1) / h;
  double d11 = s * (3 * s - 2);
  return us[i] * d00 + vs[i] * d10 + us[i + 1] * d01 + vs[i + 1] * d11;
}

template <int N>
CurveFn<N> DenseCurve<N>::as_fn() const {
  auto self = std::make_shared<DenseCurve<N>>(*this);
  return {[self](double t) { return self->pos(t); },
          [self](double t) { return self->vel(t); }};
}

template struct DenseCurve<2>;
template struct DenseCurve<3>;

// ---------------------------------------------------------------------------
// geodesics, transport

template <int N, class Chart>
static DenseCurve<N> geodesic_impl(const Chart& c, const Vec<double, N>& u0,
                                   const Vec<double, N>& v0, double T, double step) {
  c.require_interior(u0);
  DenseCurve<N> out;
  int n = std::max(1, int(std::ceil(std::abs(T) / step)));
  double h = T / n;
  Vec<double, N> u = u0, v = v0;
  out.ts.push_back(0);
  out.us.push_back(u);
  out.vs.push_back(v);
  auto speed = [&](const Vec<double, N>& uu, const Vec<double, N>& vv) {
    auto g = c.metric(uu);
    return std::sqrt(dot(g * vv, vv));
  };
  double s0 = speed(u, v);
  auto acc = [&](const Vec<double, N>& uu, const Vec<double, N>& vv) {
    return -(christoffel_dir(c, uu, vv) * vv);
  };
  for (int i = 0; i < n; ++i) {
    auto k1u = v, k1v = acc(u, v);
    auto k2u = v + k1v * (h / 2), k2v = acc(u + k1u * (h / 2), v + k1v * (h / 2));
    auto k3u = v + k2v * (h / 2), k3v = acc(u + k2u * (h / 2), v + k2v * (h / 2));
    auto k4u = v + k3v * h, k4v = acc(u + k3u * h, v + k3v * h);
    u += (k1u + k2u * 2.0 + k3u * 2.0 + k4u) * (h / 6);
    v += (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * (h / 6);
    if (!c.domain.contains(u))
      throw DomainExit("geodesic exits the chart domain", double(i + 1) * h);
    if (std::abs(speed(u, v) - s0) > 1e-6 * std::max(1.0, s0))
      throw StepTooLarge("geodesic speed drift exceeds tolerance; reduce the step");
    out.ts.push_back(double(i + 1) * h);
    out.us.push_back(u);
    out.vs.push_back(v);
  }
  return out;
}

DenseCurve<2> geodesic(const Chart2& c, const V2& u0, const V2& v0, double T, double step) {
  return geodesic_impl<2>(c, u0, v0, T, step);
}
DenseCurve<3> geodesic(const Chart3& c, const V3& u0, const V3& v0, double T, double step) {
  return geodesic_impl<3>(c, u0, v0, T, step);
}

template <int N, class Chart>
static double residual_impl(const Chart& c, const DenseCurve<N>& g) {
  double h = g.ts[1] - g.ts[0];
  double worst = 0;
  for (size_t i = 2; i + 2 < g.us.size(); ++i) {
    Vec<double, N> acc =
        (-g.us[i - 2] + g.us[i - 1] * 16.0 - g.us[i] * 30.0 + g.us[i + 1] * 16.0 - g.us[i + 2]) *
        (1.0 / (12 * h * h));
    Vec<double, N> vel =
        (g.us[i - 2] - g.us[i - 1] * 8.0 + g.us[i + 1] * 8.0 - g.us[i + 2]) * (1.0 / (12 * h));
    Vec<double, N> res = acc + christoffel_dir(c, g.us[i], vel) * vel;
    worst = std::max(worst, std::sqrt(dot(res, res)));
  }
  return worst;
}

double geodesic_residual(const Chart2& c, const DenseCurve<2>& g) { return residual_impl<2>(c, g); }
double geodesic_residual(const Chart3& c, const DenseCurve<3>& g) { return residual_impl<3>(c, g); }

template <int N, class Chart>
static double speed_drift_impl(const Chart& c, const DenseCurve<N>& g) {
  double s0 = -1, worst = 0;
  for (size_t i = 0; i < g.us.size(); ++i) {
    auto gm = c.metric(g.us[i]);
    double s = std::sqrt(dot(gm * g.vs[i], g.vs[i]));
    if (s0 < 0) s0 = s;
    worst = std::max(worst, std::abs(s - s0));
  }
  return worst;
}

double speed_drift(const Chart2& c, const DenseCurve<2>& g) { return speed_drift_impl<2>(c, g); }
double speed_drift(const Chart3& c, const DenseCurve<3>& g) { return speed_drift_impl<3>(c, g); }

template <int N, class Chart>
static Mat<double, N, N> transport_impl(const Chart& c, const CurveFn<N>& curve, double T,
                                        double step, const Mat<double, N, N>& V0) {
  int n = std::max(1, int(std::ceil(std::abs(T) / step)));
  double h = T / n;
  Mat<double, N, N> V = V0;
  auto rhs = [&](double t, const Mat<double, N, N>& W) {
    Vec<double, N> u = curve.pos(t);
    if (!c.domain.contains(u)) throw DomainExit("transport curve exits the chart domain", t);
    return -(christoffel_dir(c, u, curve.vel(t)) * W);
  };
  for (int i = 0; i < n; ++i) {
    double t = i * h;
    auto k1 = rhs(t, V);
    auto k2 = rhs(t + h / 2, V + k1 * (h / 2));
    auto k3 = rhs(t + h / 2, V + k2 * (h / 2));
    auto k4 = rhs(t + h, V + k3 * h);
    V += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6);
  }
  return V;
}

M22 parallel_transport(const Chart2& c, const CurveFn2& curve, double T, double step,
                       const M22& V0) {
  return transport_impl<2>(c, curve, T, step, V0);
}
M33 parallel_transport(const Chart3& c, const CurveFn3& curve, double T, double step,
                       const M33& V0) {
  return transport_impl<3>(c, curve, T, step, V0);
}

}  // namespace rolling
