#pragma once

// First-order dual numbers: exact directional derivatives through the
// analytic chart pipeline at double cost. Used where finite differences of
// derived quantities would amplify roundoff (curvature operator, beta).

#include <cmath>

namespace rolling {

struct Dual {
  double v = 0, d = 0;
  Dual() = default;
  Dual(double value) : v(value) {}
  Dual(double value, double deriv) : v(value), d(deriv) {}

  Dual operator-() const { return {-v, -d}; }
  Dual operator+(const Dual& o) const { return {v + o.v, d + o.d}; }
  Dual operator-(const Dual& o) const { return {v - o.v, d - o.d}; }
  Dual operator*(const Dual& o) const { return {v * o.v, d * o.v + v * o.d}; }
  Dual operator/(const Dual& o) const {
    return {v / o.v, (d * o.v - v * o.d) / (o.v * o.v)};
  }
  Dual& operator+=(const Dual& o) {
    v += o.v;
    d += o.d;
    return *this;
  }
};

inline Dual operator*(double s, const Dual& x) { return {s * x.v, s * x.d}; }
inline Dual operator+(double s, const Dual& x) { return {s + x.v, x.d}; }
inline Dual operator-(double s, const Dual& x) { return {s - x.v, -x.d}; }
inline Dual operator/(double s, const Dual& x) { return Dual(s) / x; }

inline Dual sqrt(const Dual& x) {
  double s = std::sqrt(x.v);
  return {s, x.d / (2 * s)};
}
inline Dual sin(const Dual& x) { return {std::sin(x.v), std::cos(x.v) * x.d}; }
inline Dual cos(const Dual& x) { return {std::cos(x.v), -std::sin(x.v) * x.d}; }
inline Dual exp(const Dual& x) {
  double e = std::exp(x.v);
  return {e, e * x.d};
}
inline Dual log(const Dual& x) { return {std::log(x.v), x.d / x.v}; }
inline Dual sinh(const Dual& x) { return {std::sinh(x.v), std::cosh(x.v) * x.d}; }
inline Dual cosh(const Dual& x) { return {std::cosh(x.v), std::sinh(x.v) * x.d}; }

}  // namespace rolling
