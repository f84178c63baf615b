#pragma once

// Chart-based Riemannian computations: orthonormal frames, Christoffel
// symbols, connection tables, curvature, geodesics and parallel transport.

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "rolling/charts.hpp"
#include "rolling/smallmat.hpp"

namespace rolling {

inline double fd_step(double scale) { return 1e-6 * std::max(1.0, std::abs(scale)); }

template <int N>
double max_abs(const Vec<double, N>& u) {
  double m = 0;
  for (int i = 0; i < N; ++i) m = std::max(m, std::abs(u[i]));
  return m;
}

// ---------------------------------------------------------------------------
// frames

struct Frame2 {
  V2 base;
  M22 E;  // columns = chart components of (E1, E2)
};
struct Frame3 {
  V3 base;
  M33 E;
};

Frame2 orthonormal_frame(const Chart2& c, const V2& u);
Frame3 orthonormal_frame(const Chart3& c, const V3& u);

// adapted frame of a product/warped 3-D chart: (fiber1, d/dr, -fiber2),
// positively oriented, base direction in the middle slot
Frame3 adapted_frame(const Chart3& c, const V3& u);

// A frame field is either the deterministic Gram-Schmidt frame, the adapted
// frame of a product/warped chart, or a custom map. The tagged form lets
// connection tables use analytic frame derivatives on model charts.
struct FrameField2 {
  enum class Kind { Default, Custom } kind = Kind::Default;
  const Chart2* chart = nullptr;
  std::function<Frame2(const V2&)> custom;
  Frame2 operator()(const V2& u) const;
};
struct FrameField3 {
  enum class Kind { Default, Adapted, Custom } kind = Kind::Default;
  const Chart3* chart = nullptr;
  std::function<Frame3(const V3&)> custom;
  Frame3 operator()(const V3& u) const;
};

FrameField2 default_frame_field(const Chart2& c);
FrameField3 default_frame_field(const Chart3& c);
FrameField3 adapted_frame_field(const Chart3& c);
FrameField2 custom_frame_field(const Chart2& c, std::function<Frame2(const V2&)> fn);
FrameField3 custom_frame_field(const Chart3& c, std::function<Frame3(const V3&)> fn);

// frame matrix and its coordinate derivatives dE[k] = dE/du^k
void frame_and_derivs(const Chart2& c, const FrameField2& ff, const V2& u, M22& E,
                      std::array<M22, 2>& dE);
void frame_and_derivs(const Chart3& c, const FrameField3& ff, const V3& u, M33& E,
                      std::array<M33, 3>& dE);

// scalar-generic frame pipeline for diagonal analytic models;
// E = diag(1/sqrt(d_i)) with the last column flipped on negative orientation
template <class S, int N, class Chart>
void frame_diag(const Chart& c, const Vec<S, N>& u, Mat<S, N, N>& E,
                std::type_identity_t<std::array<Mat<S, N, N>, std::size_t(N)>>& dE) {
  Vec<S, N> d;
  Mat<S, N, N> dd;
  c.diag(u, d, dd);
  E = Mat<S, N, N>{};
  for (auto& m : dE) m = Mat<S, N, N>{};
  for (int i = 0; i < N; ++i) {
    S s = sqrt(d[i]);
    double sign = (i == N - 1 && c.orientation < 0) ? -1.0 : 1.0;
    E(i, i) = S(sign) / s;
    for (int k = 0; k < N; ++k)
      dE[k](i, i) = dd(i, k) * S(-0.5 * sign) / (d[i] * s);
  }
}

// (Gamma(v))^k_j = Gamma^k_{ij} v^i for a diagonal metric
template <class S, int N, class Chart>
Mat<S, N, N> christoffel_dir_diag(const Chart& c, const Vec<S, N>& u, const Vec<S, N>& v) {
  Vec<S, N> d;
  Mat<S, N, N> dd;
  c.diag(u, d, dd);
  Mat<S, N, N> G;
  for (int k = 0; k < N; ++k) {
    S inv2 = S(0.5) / d[k];
    for (int j = 0; j < N; ++j) {
      S t(0.0);
      if (j == k)
        for (int i = 0; i < N; ++i) t = t + v[i] * dd(k, i);
      t = t + v[k] * dd(k, j) - v[j] * dd(j, k);
      G(k, j) = inv2 * t;
    }
  }
  return G;
}

// ---------------------------------------------------------------------------
// Christoffel symbols (double path, any chart)

struct Christoffel2 {
  std::array<M22, 2> G;  // G[k](i,j) = Gamma^k_{ij}
};
struct Christoffel3 {
  std::array<M33, 3> G;
};

Christoffel2 christoffel(const Chart2& c, const V2& u);
Christoffel3 christoffel(const Chart3& c, const V3& u);

M22 christoffel_dir(const Chart2& c, const V2& u, const V2& v);
M33 christoffel_dir(const Chart3& c, const V3& u, const V3& v);

// ---------------------------------------------------------------------------
// connection tables in an orthonormal frame

struct ConnTable2 {
  double g1 = 0, g2 = 0;  // Gamma^1_{(1,2)}, Gamma^2_{(1,2)}
};

// rows are the pairs (2,3), (3,1), (1,2); columns the derivative index i
struct ConnTable3 {
  M33 m;
  double coeff(int i, int j, int k) const {  // Gamma^i_{(j,k)}, 1-based indices
    static const int row_of[4][4] = {
        {-1, -1, -1, -1}, {-1, -1, 2, 1}, {-1, 2, -1, 0}, {-1, 1, 0, -1}};
    static const double sign_of[4][4] = {
        {0, 0, 0, 0}, {0, 0, 1, -1}, {0, -1, 0, 1}, {0, 1, -1, 0}};
    return sign_of[j][k] * m(row_of[j][k], i - 1);
  }
};

ConnTable2 connection_table(const Chart2& c, const V2& u, const FrameField2& frame);
ConnTable3 connection_table(const Chart3& c, const V3& u, const FrameField3& frame);

// ---------------------------------------------------------------------------
// curvature

double gaussian_curvature(const Chart2& c, const V2& u);
// the connection-table route K = Y(G1) - X(G2) - (G1^2 + G2^2)
double gaussian_curvature_frame(const Chart2& c, const V2& u, const FrameField2& frame);

// matrix of the curvature operator on 2-vectors in the basis
// (*E1, *E2, *E3) of an oriented orthonormal frame; component formulas
// assembled from the connection table and its frame derivatives
M33 curvature_operator(const Chart3& c, const V3& u, const FrameField3& frame);
// independent route: direct Riemann tensor assembly from Christoffel symbols
M33 curvature_operator_oracle(const Chart3& c, const V3& u, const Frame3& frame);

// R(a,b)w in chart components; exposed for oracles
V3 riemann_apply(const Chart3& c, const V3& u, const V3& a, const V3& b, const V3& w);
V2 riemann_apply(const Chart2& c, const V2& u, const V2& a, const V2& b, const V2& w);

// Hodge dual of u ^ v in orthonormal oriented frame coefficients
inline V3 hodge_star(const V3& u, const V3& v) { return cross(u, v); }

// ---------------------------------------------------------------------------
// curves, geodesics, parallel transport

template <int N>
struct CurveFn {
  std::function<Vec<double, N>(double)> pos;
  std::function<Vec<double, N>(double)> vel;
};
using CurveFn2 = CurveFn<2>;
using CurveFn3 = CurveFn<3>;

CurveFn2 line_curve(const V2& u0, const V2& v);
CurveFn2 circle_curve(const V2& center, double radius, double rate, double phase = 0.0);
// cubic Catmull-Rom through samples at uniform parameter spacing
CurveFn2 sampled_curve(const std::vector<V2>& samples, double t0, double t1);

template <int N>
struct DenseCurve {
  std::vector<double> ts;
  std::vector<Vec<double, N>> us;
  std::vector<Vec<double, N>> vs;
  Vec<double, N> pos(double t) const;
  Vec<double, N> vel(double t) const;
  CurveFn<N> as_fn() const;
};

DenseCurve<2> geodesic(const Chart2& c, const V2& u0, const V2& v0, double T, double step);
DenseCurve<3> geodesic(const Chart3& c, const V3& u0, const V3& v0, double T, double step);

// max |u'' + Gamma(u')u'| over interior samples, fourth-order stencils
double geodesic_residual(const Chart2& c, const DenseCurve<2>& g);
double geodesic_residual(const Chart3& c, const DenseCurve<3>& g);
double speed_drift(const Chart2& c, const DenseCurve<2>& g);
double speed_drift(const Chart3& c, const DenseCurve<3>& g);

// transports the columns of V0 from t=0 to t=T; returns V(T)
M22 parallel_transport(const Chart2& c, const CurveFn2& curve, double T, double step,
                       const M22& V0);
M33 parallel_transport(const Chart3& c, const CurveFn3& curve, double T, double step,
                       const M33& V0);

}  // namespace rolling
