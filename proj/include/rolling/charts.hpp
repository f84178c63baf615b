#pragma once

// Model manifolds as metric charts. M is always 2-dimensional and Mhat
// 3-dimensional. Every registered model has a diagonal analytic metric, so
// the frame/christoffel pipeline can be evaluated on any scalar type
// (double or Poly3). Custom function-backed charts are supported for tests
// but only on double.

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "rolling/errors.hpp"
#include "rolling/smallmat.hpp"

namespace rolling {

template <int N>
struct Box {
  std::array<double, N> lo{}, hi{};
  bool contains(const Vec<double, N>& u, double margin = 0.0) const {
    for (int i = 0; i < N; ++i)
      if (u[i] < lo[i] + margin || u[i] > hi[i] - margin) return false;
    return true;
  }
};

// ---------------------------------------------------------------------------
// warping function families ("exp", "cosh", "affine", "poly") plus the
// function constructed by the section-6.4 scenario builder

struct WarpFn {
  enum class Kind { Exp, Cosh, Affine, Poly, Ss12 };
  Kind kind = Kind::Affine;
  double a = 1.0, k = 1.0, b = 0.0;  // exp: a e^{kr}; cosh: a cosh(kr); affine: a + b r
  std::vector<double> coeffs;        // poly: sum c_i r^i

  // f on M determined by f(r)^2 = 1 + (z(r - r0)/fhat0^2 - 1)/P0^2 where
  // z(t) = fhat(rhat(t))^2 has a closed form for exp/affine fhat
  struct Ss12 {
    Kind sub = Kind::Exp;  // family of fhat
    double a = 1.0, k = 1.0, b = 0.0;
    double P0 = 0.5, r0 = 0.0, rhat0 = 0.0, fhat0 = 1.0;
  } ss12;

  template <class S>
  S value(const S& r) const {
    switch (kind) {
      case Kind::Exp: return S(a) * exp(r * k);
      case Kind::Cosh: return S(a) * cosh(r * k);
      case Kind::Affine: return S(a) + r * b;
      case Kind::Poly: {
        S acc(0.0);
        for (int i = int(coeffs.size()) - 1; i >= 0; --i) acc = acc * r + S(coeffs[i]);
        return acc;
      }
      case Kind::Ss12: {
        S t = r - S(ss12.r0);
        S z = ss12_z(t);
        double f0sq = ss12.fhat0 * ss12.fhat0;
        return sqrt(S(1.0) + (z * (1.0 / f0sq) - S(1.0)) * (1.0 / (ss12.P0 * ss12.P0)));
      }
    }
    return S(0.0);
  }

  template <class S>
  S deriv(const S& r) const {
    switch (kind) {
      case Kind::Exp: return S(a * k) * exp(r * k);
      case Kind::Cosh: return S(a * k) * sinh(r * k);
      case Kind::Affine: return S(b);
      case Kind::Poly: {
        S acc(0.0);
        for (int i = int(coeffs.size()) - 1; i >= 1; --i)
          acc = acc * r + S(coeffs[i] * i);
        return acc;
      }
      case Kind::Ss12: {
        S t = r - S(ss12.r0);
        double c = 2.0 * ss12.P0 * ss12.P0 * ss12.fhat0 * ss12.fhat0;
        return ss12_zp(t) / (value(r) * c);
      }
    }
    return S(0.0);
  }

  double second(double r) const {
    switch (kind) {
      case Kind::Exp: return a * k * k * std::exp(k * r);
      case Kind::Cosh: return a * k * k * std::cosh(k * r);
      case Kind::Affine: return 0.0;
      case Kind::Poly: {
        double acc = 0.0;
        for (int i = int(coeffs.size()) - 1; i >= 2; --i)
          acc = acc * r + coeffs[i] * i * (i - 1);
        return acc;
      }
      case Kind::Ss12: {
        double t = r - ss12.r0;
        double c = 2.0 * ss12.P0 * ss12.P0 * ss12.fhat0 * ss12.fhat0;
        double f = value(r), fp = deriv(r);
        return ss12_zpp(t) / (c * f) - fp * fp / f;
      }
    }
    return 0.0;
  }

  // z(t) = fhat(rhat(t))^2 along the base geodesic of the 6.4 system
  template <class S>
  S ss12_z(const S& t) const {
    if (ss12.sub == Kind::Exp) {
      S w = cosh(t * ss12.k) + sinh(t * ss12.k) * ss12.P0;
      return S(ss12.fhat0 * ss12.fhat0) * w * w;
    }
    // affine
    return S(ss12.fhat0 * ss12.fhat0) + t * (2.0 * ss12.b * ss12.fhat0 * ss12.P0) +
           t * t * (ss12.b * ss12.b);
  }
  template <class S>
  S ss12_zp(const S& t) const {
    if (ss12.sub == Kind::Exp) {
      S w = cosh(t * ss12.k) + sinh(t * ss12.k) * ss12.P0;
      S wp = (sinh(t * ss12.k) + cosh(t * ss12.k) * ss12.P0) * ss12.k;
      return S(2.0 * ss12.fhat0 * ss12.fhat0) * w * wp;
    }
    return S(2.0 * ss12.b * ss12.fhat0 * ss12.P0) + t * (2.0 * ss12.b * ss12.b);
  }
  double ss12_zpp(double t) const {
    if (ss12.sub == Kind::Exp) {
      double kk = ss12.k;
      double w = std::cosh(kk * t) + ss12.P0 * std::sinh(kk * t);
      double wp = kk * (std::sinh(kk * t) + ss12.P0 * std::cosh(kk * t));
      return 2.0 * ss12.fhat0 * ss12.fhat0 * (wp * wp + w * kk * kk * w);
    }
    return 2.0 * ss12.b * ss12.b;
  }
};

// fiber factor of the 3-D product/warped models
struct Fiber {
  enum class Kind { Sphere, Flat };
  Kind kind = Kind::Flat;
  double rho = 1.0;

  // diagonal fiber metric h(y) and its y-derivatives
  template <class S>
  void metric(const S& y1, S h[2], S dh_dy1[2]) const {
    if (kind == Kind::Sphere) {
      S s = sin(y1);
      h[0] = S(rho * rho);
      h[1] = S(rho * rho) * s * s;
      dh_dy1[0] = S(0.0);
      dh_dy1[1] = S(2.0 * rho * rho) * s * cos(y1);
    } else {
      h[0] = S(1.0);
      h[1] = S(1.0);
      dh_dy1[0] = S(0.0);
      dh_dy1[1] = S(0.0);
    }
  }
  double gauss() const { return kind == Kind::Sphere ? 1.0 / (rho * rho) : 0.0; }
};

// ---------------------------------------------------------------------------
// 2-D models

struct Euclidean2 {};
struct Sphere2 {
  double rho = 1.0;
};
struct Hyperbolic2 {
  double rho = 1.0;
};
struct Warped2 {
  WarpFn f;
};
struct Custom2 {
  std::function<M22(const V2&)> metric;
  std::function<std::array<M22, 2>(const V2&)> metric_jac;  // optional
};

// 3-D models

struct Euclidean3 {};
struct Product3 {
  double c = 1.0;
  Fiber fiber;
};
struct Warped3 {
  WarpFn f;
  Fiber fiber;
};
struct Custom3 {
  std::function<M33(const V3&)> metric;
  std::function<std::array<M33, 3>(const V3&)> metric_jac;
};

// diagonal metric entries d[i] and derivatives dd(i,k) = d d_i / d u_k

template <class S>
void diag_metric(const Euclidean2&, const Vec<S, 2>&, Vec<S, 2>& d, Mat<S, 2, 2>& dd) {
  d[0] = S(1.0);
  d[1] = S(1.0);
  dd = Mat<S, 2, 2>{};
}
template <class S>
void diag_metric(const Sphere2& m, const Vec<S, 2>& u, Vec<S, 2>& d, Mat<S, 2, 2>& dd) {
  S s = sin(u[0]);
  d[0] = S(m.rho * m.rho);
  d[1] = S(m.rho * m.rho) * s * s;
  dd = Mat<S, 2, 2>{};
  dd(1, 0) = S(2.0 * m.rho * m.rho) * s * cos(u[0]);
}
template <class S>
void diag_metric(const Hyperbolic2& m, const Vec<S, 2>& u, Vec<S, 2>& d, Mat<S, 2, 2>& dd) {
  S s = sinh(u[0]);
  d[0] = S(m.rho * m.rho);
  d[1] = S(m.rho * m.rho) * s * s;
  dd = Mat<S, 2, 2>{};
  dd(1, 0) = S(2.0 * m.rho * m.rho) * s * cosh(u[0]);
}
template <class S>
void diag_metric(const Warped2& m, const Vec<S, 2>& u, Vec<S, 2>& d, Mat<S, 2, 2>& dd) {
  S f = m.f.value(u[0]);
  S fp = m.f.deriv(u[0]);
  d[0] = S(1.0);
  d[1] = f * f;
  dd = Mat<S, 2, 2>{};
  dd(1, 0) = S(2.0) * f * fp;
}
template <class S>
void diag_metric(const Euclidean3&, const Vec<S, 3>&, Vec<S, 3>& d, Mat<S, 3, 3>& dd) {
  d[0] = S(1.0);
  d[1] = S(1.0);
  d[2] = S(1.0);
  dd = Mat<S, 3, 3>{};
}
template <class S>
void diag_metric(const Product3& m, const Vec<S, 3>& u, Vec<S, 3>& d, Mat<S, 3, 3>& dd) {
  S h[2], dh[2];
  m.fiber.metric(u[1], h, dh);
  double c2 = m.c * m.c;
  d[0] = S(1.0);
  d[1] = h[0] * c2;
  d[2] = h[1] * c2;
  dd = Mat<S, 3, 3>{};
  dd(1, 1) = dh[0] * c2;
  dd(2, 1) = dh[1] * c2;
}
template <class S>
void diag_metric(const Warped3& m, const Vec<S, 3>& u, Vec<S, 3>& d, Mat<S, 3, 3>& dd) {
  S h[2], dh[2];
  m.fiber.metric(u[1], h, dh);
  S f = m.f.value(u[0]);
  S fp = m.f.deriv(u[0]);
  S f2 = f * f;
  d[0] = S(1.0);
  d[1] = f2 * h[0];
  d[2] = f2 * h[1];
  dd = Mat<S, 3, 3>{};
  dd(1, 0) = S(2.0) * f * fp * h[0];
  dd(2, 0) = S(2.0) * f * fp * h[1];
  dd(1, 1) = f2 * dh[0];
  dd(2, 1) = f2 * dh[1];
}

// ---------------------------------------------------------------------------

struct Chart2 {
  using Model = std::variant<Euclidean2, Sphere2, Hyperbolic2, Warped2, Custom2>;
  Model model;
  Box<2> domain{{-10, -10}, {10, 10}};
  double orientation = 1.0;

  bool analytic_diag() const { return !std::holds_alternative<Custom2>(model); }

  M22 metric(const V2& u) const;
  // jac[k](i,j) = d g_ij / d u_k; central differences when no analytic form
  std::array<M22, 2> metric_jac(const V2& u) const;
  bool has_analytic_jac() const;

  template <class S>
  void diag(const Vec<S, 2>& u, Vec<S, 2>& d, Mat<S, 2, 2>& dd) const {
    std::visit(
        [&](const auto& m) {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, Custom2>) {
            throw ConfigError("custom chart has no scalar-generic evaluation");
          } else {
            diag_metric(m, u, d, dd);
          }
        },
        model);
  }

  void require_interior(const V2& u, double margin = 0.0) const {
    if (!domain.contains(u, margin)) throw DomainExit("point outside 2-D chart domain");
  }
};

struct Chart3 {
  using Model = std::variant<Euclidean3, Product3, Warped3, Custom3>;
  Model model;
  Box<3> domain{{-10, -10, -10}, {10, 10, 10}};
  double orientation = 1.0;

  bool analytic_diag() const { return !std::holds_alternative<Custom3>(model); }

  M33 metric(const V3& u) const;
  std::array<M33, 3> metric_jac(const V3& u) const;
  bool has_analytic_jac() const;

  template <class S>
  void diag(const Vec<S, 3>& u, Vec<S, 3>& d, Mat<S, 3, 3>& dd) const {
    std::visit(
        [&](const auto& m) {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, Custom3>) {
            throw ConfigError("custom chart has no scalar-generic evaluation");
          } else {
            diag_metric(m, u, d, dd);
          }
        },
        model);
  }

  // true when the chart carries a distinguished base direction d/dr as
  // coordinate 0 (product and warped models)
  bool has_base_direction() const {
    return std::holds_alternative<Product3>(model) || std::holds_alternative<Warped3>(model);
  }

  void require_interior(const V3& u, double margin = 0.0) const {
    if (!domain.contains(u, margin)) throw DomainExit("point outside 3-D chart domain");
  }
};

// registry of named model manifolds
Chart2 make_chart2(const std::string& name, const std::map<std::string, double>& params = {},
                   const WarpFn* warp = nullptr);
Chart3 make_chart3(const std::string& name, const std::map<std::string, double>& params = {},
                   const WarpFn* warp = nullptr, const Fiber* fiber = nullptr);

WarpFn make_warp(const std::string& family, const std::vector<double>& coeffs);

}  // namespace rolling
