#pragma once

// Tiny fixed-size matrix/vector algebra templated on the scalar type.
// The state-space realization pipeline runs both on double and on
// truncated-Taylor scalars (poly3.hpp), so it cannot use Eigen directly.
// Decompositions (SVD, eigenvalues) live in double-land and use Eigen.

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>

namespace rolling {

// unqualified math calls in scalar-generic code resolve against these for
// double and against the jet overloads for Poly3
inline double sqrt(double x) { return std::sqrt(x); }
inline double sin(double x) { return std::sin(x); }
inline double cos(double x) { return std::cos(x); }
inline double exp(double x) { return std::exp(x); }
inline double log(double x) { return std::log(x); }
inline double sinh(double x) { return std::sinh(x); }
inline double cosh(double x) { return std::cosh(x); }

template <class S, int N>
struct Vec {
  std::array<S, N> v{};

  S& operator[](int i) { return v[i]; }
  const S& operator[](int i) const { return v[i]; }

  Vec operator+(const Vec& o) const {
    Vec r;
    for (int i = 0; i < N; ++i) r[i] = v[i] + o[i];
    return r;
  }
  Vec operator-(const Vec& o) const {
    Vec r;
    for (int i = 0; i < N; ++i) r[i] = v[i] - o[i];
    return r;
  }
  Vec operator*(const S& c) const {
    Vec r;
    for (int i = 0; i < N; ++i) r[i] = v[i] * c;
    return r;
  }
  Vec operator-() const {
    Vec r;
    for (int i = 0; i < N; ++i) r[i] = -v[i];
    return r;
  }
  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < N; ++i) v[i] = v[i] + o[i];
    return *this;
  }
};

template <class S, int R, int C>
struct Mat {
  std::array<S, R * C> a{};

  S& operator()(int i, int j) { return a[i * C + j]; }
  const S& operator()(int i, int j) const { return a[i * C + j]; }

  static Mat identity() {
    static_assert(R == C);
    Mat m;
    for (int i = 0; i < R; ++i) m(i, i) = S(1);
    return m;
  }

  Vec<S, R> col(int j) const {
    Vec<S, R> r;
    for (int i = 0; i < R; ++i) r[i] = (*this)(i, j);
    return r;
  }
  void set_col(int j, const Vec<S, R>& c) {
    for (int i = 0; i < R; ++i) (*this)(i, j) = c[i];
  }

  Mat operator+(const Mat& o) const {
    Mat r;
    for (size_t i = 0; i < a.size(); ++i) r.a[i] = a[i] + o.a[i];
    return r;
  }
  Mat operator-(const Mat& o) const {
    Mat r;
    for (size_t i = 0; i < a.size(); ++i) r.a[i] = a[i] - o.a[i];
    return r;
  }
  Mat operator*(const S& c) const {
    Mat r;
    for (size_t i = 0; i < a.size(); ++i) r.a[i] = a[i] * c;
    return r;
  }
  Mat operator-() const {
    Mat r;
    for (size_t i = 0; i < a.size(); ++i) r.a[i] = -a[i];
    return r;
  }
  Mat& operator+=(const Mat& o) {
    for (size_t i = 0; i < a.size(); ++i) a[i] = a[i] + o.a[i];
    return *this;
  }

  Mat<S, C, R> transposed() const {
    Mat<S, C, R> r;
    for (int i = 0; i < R; ++i)
      for (int j = 0; j < C; ++j) r(j, i) = (*this)(i, j);
    return r;
  }
};

template <class S, int R, int K, int C>
Mat<S, R, C> operator*(const Mat<S, R, K>& x, const Mat<S, K, C>& y) {
  Mat<S, R, C> r;
  for (int i = 0; i < R; ++i)
    for (int j = 0; j < C; ++j) {
      S s = x(i, 0) * y(0, j);
      for (int k = 1; k < K; ++k) s = s + x(i, k) * y(k, j);
      r(i, j) = s;
    }
  return r;
}

template <class S, int R, int C>
Vec<S, R> operator*(const Mat<S, R, C>& m, const Vec<S, C>& x) {
  Vec<S, R> r;
  for (int i = 0; i < R; ++i) {
    S s = m(i, 0) * x[0];
    for (int j = 1; j < C; ++j) s = s + m(i, j) * x[j];
    r[i] = s;
  }
  return r;
}

template <class S, int N>
S dot(const Vec<S, N>& x, const Vec<S, N>& y) {
  S s = x[0] * y[0];
  for (int i = 1; i < N; ++i) s = s + x[i] * y[i];
  return s;
}

template <class S>
Vec<S, 3> cross(const Vec<S, 3>& x, const Vec<S, 3>& y) {
  Vec<S, 3> r;
  r[0] = x[1] * y[2] - x[2] * y[1];
  r[1] = x[2] * y[0] - x[0] * y[2];
  r[2] = x[0] * y[1] - x[1] * y[0];
  return r;
}

// closed-form inverses; inputs are well conditioned frame/metric matrices
template <class S>
Mat<S, 2, 2> inverse(const Mat<S, 2, 2>& m) {
  S det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  Mat<S, 2, 2> r;
  r(0, 0) = m(1, 1) / det;
  r(0, 1) = -m(0, 1) / det;
  r(1, 0) = -m(1, 0) / det;
  r(1, 1) = m(0, 0) / det;
  return r;
}

template <class S>
Mat<S, 3, 3> inverse(const Mat<S, 3, 3>& m) {
  Mat<S, 3, 3> adj;
  adj(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  adj(0, 1) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
  adj(0, 2) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
  adj(1, 0) = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
  adj(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
  adj(1, 2) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
  adj(2, 0) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
  adj(2, 1) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
  adj(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  S det = m(0, 0) * adj(0, 0) + m(0, 1) * adj(1, 0) + m(0, 2) * adj(2, 0);
  Mat<S, 3, 3> r;
  for (int i = 0; i < 9; ++i) r.a[i] = adj.a[i] / det;
  return r;
}

template <class S>
Mat<S, 3, 3> hat(const Vec<S, 3>& w) {
  Mat<S, 3, 3> m;
  m(0, 1) = -w[2];
  m(0, 2) = w[1];
  m(1, 0) = w[2];
  m(1, 2) = -w[0];
  m(2, 0) = -w[1];
  m(2, 1) = w[0];
  return m;
}

template <class S>
Vec<S, 3> axial(const Mat<S, 3, 3>& w) {
  Vec<S, 3> r;
  r[0] = (w(2, 1) - w(1, 2)) * S(0.5);
  r[1] = (w(0, 2) - w(2, 0)) * S(0.5);
  r[2] = (w(1, 0) - w(0, 1)) * S(0.5);
  return r;
}

// exp([theta]_x); the jet path sees a nilpotent angle at the chart center,
// so the short series is exact there; doubles take the closed form
template <class S>
Mat<S, 3, 3> so3_exp(const Vec<S, 3>& th) {
  Mat<S, 3, 3> T = hat(th);
  Mat<S, 3, 3> T2 = T * T;
  S t2 = dot(th, th);
  S c1(1), c2(0.5);
  if constexpr (std::is_same_v<S, double>) {
    double t = std::sqrt(t2);
    if (t > 1e-4) {
      c1 = std::sin(t) / t;
      c2 = (1 - std::cos(t)) / t2;
    }
  } else {
    double f1[4] = {-1.0 / 6, 1.0 / 120, -1.0 / 5040, 1.0 / 362880};
    double f2[4] = {-1.0 / 24, 1.0 / 720, -1.0 / 40320, 1.0 / 3628800};
    S p = t2;
    for (int k = 0; k < 4; ++k) {
      c1 = c1 + p * S(f1[k]);
      c2 = c2 + p * S(f2[k]);
      p = p * t2;
    }
  }
  return Mat<S, 3, 3>::identity() + T * c1 + T2 * c2;
}

// inverse left Jacobian of SO(3): theta_dot = Jl^{-1}(theta) * axial(Rdot R^T)
template <class S>
Mat<S, 3, 3> so3_left_jacobian_inv(const Vec<S, 3>& th) {
  S t2 = dot(th, th);
  Mat<S, 3, 3> T = hat(th);
  // c2(t) = 1/t^2 - (1+cos t)/(2 t sin t) = 1/12 + t^2/720 + t^4/30240 + ...
  S c2 = S(1.0 / 12) + t2 * S(1.0 / 720) + t2 * t2 * S(1.0 / 30240) +
         t2 * t2 * t2 * S(1.0 / 1209600);
  if constexpr (std::is_same_v<S, double>) {
    double t = std::sqrt(t2);
    if (t > 1e-2) c2 = 1.0 / t2 - (1 + std::cos(t)) / (2 * t * std::sin(t));
  }
  return Mat<S, 3, 3>::identity() - T * S(0.5) + (T * T) * c2;
}

inline Vec<double, 3> so3_log(const Mat<double, 3, 3>& r) {
  double c = (r(0, 0) + r(1, 1) + r(2, 2) - 1.0) / 2.0;
  c = std::max(-1.0, std::min(1.0, c));
  Vec<double, 3> w = axial(r);  // sin(theta) * n
  double s = std::sqrt(dot(w, w));
  double theta = std::atan2(s, c);
  if (s < 1e-10) {
    // theta/sin(theta) -> 1; adequate below the chart radius cap
    return w * (1.0 + theta * theta / 6.0);
  }
  return w * (theta / s);
}

using V2 = Vec<double, 2>;
using V3 = Vec<double, 3>;
using V8 = Vec<double, 8>;
using M22 = Mat<double, 2, 2>;
using M33 = Mat<double, 3, 3>;
using M32 = Mat<double, 3, 2>;

inline double norm(const V2& v) { return std::sqrt(dot(v, v)); }
inline double norm(const V3& v) { return std::sqrt(dot(v, v)); }
inline double norm(const V8& v) { return std::sqrt(dot(v, v)); }
template <int R, int C>
double frobenius_norm(const Mat<double, R, C>& m) {
  double s = 0;
  for (auto x : m.a) s += x * x;
  return std::sqrt(s);
}

}  // namespace rolling
