#pragma once

// Truncated multivariate Taylor arithmetic: polynomials in 8 variables kept
// to a fixed total degree. Running the chart realization of the rolling
// lifts through this scalar type yields exact derivatives of those vector
// fields at the chart center, which the Lie-bracket rank computation
// consumes. Degree 4 supports fourth-order (depth-4) brackets.

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace rolling {

namespace polyt_detail {

constexpr int kVars = 8;

constexpr int n_terms(int order) {
  // C(8 + order, order)
  long long n = 1, d = 1;
  for (int i = 1; i <= order; ++i) {
    n *= kVars + i;
    d *= i;
  }
  return int(n / d);
}

template <int ORDER>
struct Tables {
  static constexpr int kTerms = n_terms(ORDER);
  std::array<std::array<uint8_t, kVars>, size_t(kTerms)> expo{};
  std::array<int, size_t(kTerms)> degree{};
  std::array<int, size_t(ORDER + 2)> deg_begin{};
  std::vector<int32_t> key_to_index;  // mixed-radix (ORDER+1) exponent key

  static uint32_t pack(const std::array<uint8_t, kVars>& e) {
    uint32_t k = 0;
    for (int i = kVars - 1; i >= 0; --i) k = k * (ORDER + 1) + e[i];
    return k;
  }

  Tables() {
    uint32_t span = 1;
    for (int i = 0; i < kVars; ++i) span *= (ORDER + 1);
    key_to_index.assign(span, -1);
    int idx = 0;
    for (int d = 0; d <= ORDER; ++d) {
      deg_begin[d] = idx;
      std::array<uint8_t, kVars> e{};
      enumerate(e, 0, d, idx);
    }
    deg_begin[ORDER + 1] = idx;
  }

  void enumerate(std::array<uint8_t, kVars>& e, int pos, int remaining, int& idx) {
    if (pos == kVars - 1) {
      e[pos] = uint8_t(remaining);
      expo[idx] = e;
      degree[idx] = 0;
      for (int i = 0; i < kVars; ++i) degree[idx] += e[i];
      key_to_index[pack(e)] = idx;
      ++idx;
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      e[pos] = uint8_t(k);
      enumerate(e, pos + 1, remaining - k, idx);
    }
  }
};

template <int ORDER>
const Tables<ORDER>& tables() {
  static const Tables<ORDER> t;
  return t;
}

}  // namespace polyt_detail

template <int ORDER>
class PolyT {
 public:
  static constexpr int kTerms = polyt_detail::n_terms(ORDER);
  std::array<double, size_t(kTerms)> c{};

  PolyT() = default;
  PolyT(double v) { c[0] = v; }

  static PolyT variable(int i, double value) {
    PolyT p(value);
    std::array<uint8_t, polyt_detail::kVars> e{};
    e[i] = 1;
    p.c[polyt_detail::tables<ORDER>().key_to_index[polyt_detail::Tables<ORDER>::pack(e)]] = 1.0;
    return p;
  }

  double value() const { return c[0]; }

  PolyT operator-() const {
    PolyT r;
    for (int i = 0; i < kTerms; ++i) r.c[i] = -c[i];
    return r;
  }
  PolyT operator+(const PolyT& o) const {
    PolyT r;
    for (int i = 0; i < kTerms; ++i) r.c[i] = c[i] + o.c[i];
    return r;
  }
  PolyT operator-(const PolyT& o) const {
    PolyT r;
    for (int i = 0; i < kTerms; ++i) r.c[i] = c[i] - o.c[i];
    return r;
  }
  PolyT& operator+=(const PolyT& o) {
    for (int i = 0; i < kTerms; ++i) c[i] += o.c[i];
    return *this;
  }

  PolyT operator*(const PolyT& o) const {
    const auto& t = polyt_detail::tables<ORDER>();
    PolyT r;
    for (int i = 0; i < kTerms; ++i) {
      if (c[i] == 0.0) continue;
      int dmax = ORDER - t.degree[i];
      int jend = t.deg_begin[dmax + 1];
      for (int j = 0; j < jend; ++j) {
        if (o.c[j] == 0.0) continue;
        std::array<uint8_t, polyt_detail::kVars> e;
        for (int v = 0; v < polyt_detail::kVars; ++v)
          e[v] = uint8_t(t.expo[i][v] + t.expo[j][v]);
        r.c[t.key_to_index[polyt_detail::Tables<ORDER>::pack(e)]] += c[i] * o.c[j];
      }
    }
    return r;
  }

  PolyT operator/(const PolyT& o) const { return (*this) * o.reciprocal(); }

  PolyT nil() const {
    PolyT r = *this;
    r.c[0] = 0.0;
    return r;
  }

  // compose with an analytic function given derivatives f0..f_ORDER at value()
  PolyT compose(const std::array<double, size_t(ORDER + 1)>& f) const {
    PolyT e = nil();
    PolyT r(f[0]);
    PolyT p = e;
    double fact = 1.0;
    for (int k = 1; k <= ORDER; ++k) {
      fact *= k;
      r += p * (f[k] / fact);
      if (k < ORDER) p = p * e;
    }
    return r;
  }

  PolyT reciprocal() const {
    double a = c[0];
    std::array<double, size_t(ORDER + 1)> f{};
    double p = 1.0 / a, fact = 1.0;
    for (int k = 0; k <= ORDER; ++k) {
      f[k] = fact * p;  // d^k (1/x) = (-1)^k k! x^{-(k+1)}
      p /= -a;
      fact *= (k + 1);
    }
    return compose(f);
  }

  double derivative(const std::array<uint8_t, polyt_detail::kVars>& alpha) const {
    const auto& t = polyt_detail::tables<ORDER>();
    int idx = t.key_to_index[polyt_detail::Tables<ORDER>::pack(alpha)];
    double fact = 1.0;
    for (int v = 0; v < polyt_detail::kVars; ++v)
      for (int k = 2; k <= alpha[v]; ++k) fact *= k;
    return c[idx] * fact;
  }
};

template <int ORDER>
PolyT<ORDER> operator*(const PolyT<ORDER>& p, double s) {
  PolyT<ORDER> r;
  for (int i = 0; i < PolyT<ORDER>::kTerms; ++i) r.c[i] = p.c[i] * s;
  return r;
}
template <int ORDER>
PolyT<ORDER> operator*(double s, const PolyT<ORDER>& p) {
  return p * s;
}
template <int ORDER>
PolyT<ORDER> operator+(double s, const PolyT<ORDER>& p) {
  return PolyT<ORDER>(s) + p;
}
template <int ORDER>
PolyT<ORDER> operator-(double s, const PolyT<ORDER>& p) {
  return PolyT<ORDER>(s) - p;
}
template <int ORDER>
PolyT<ORDER> operator/(double s, const PolyT<ORDER>& p) {
  return PolyT<ORDER>(s) / p;
}

namespace polyt_detail {
template <int ORDER, class F>
PolyT<ORDER> compose_fn(const PolyT<ORDER>& p, F&& nth) {
  // nth(k) = k-th derivative of the outer function at p.value()
  std::array<double, size_t(ORDER + 1)> f{};
  for (int k = 0; k <= ORDER; ++k) f[k] = nth(k);
  return p.compose(f);
}
}  // namespace polyt_detail

template <int ORDER>
PolyT<ORDER> sqrt(const PolyT<ORDER>& p) {
  double a = p.value(), s = std::sqrt(a);
  return polyt_detail::compose_fn(p, [&](int k) {
    // d^k sqrt = s * prod_{i<k} (1/2 - i) / a^k
    double v = s, coef = 1.0;
    for (int i = 0; i < k; ++i) coef *= (0.5 - i);
    for (int i = 0; i < k; ++i) v /= a;
    return v * coef;
  });
}
template <int ORDER>
PolyT<ORDER> sin(const PolyT<ORDER>& p) {
  double s = std::sin(p.value()), c = std::cos(p.value());
  double tab[4] = {s, c, -s, -c};
  return polyt_detail::compose_fn(p, [&](int k) { return tab[k % 4]; });
}
template <int ORDER>
PolyT<ORDER> cos(const PolyT<ORDER>& p) {
  double s = std::sin(p.value()), c = std::cos(p.value());
  double tab[4] = {c, -s, -c, s};
  return polyt_detail::compose_fn(p, [&](int k) { return tab[k % 4]; });
}
template <int ORDER>
PolyT<ORDER> exp(const PolyT<ORDER>& p) {
  double e = std::exp(p.value());
  return polyt_detail::compose_fn(p, [&](int) { return e; });
}
template <int ORDER>
PolyT<ORDER> log(const PolyT<ORDER>& p) {
  double a = p.value();
  return polyt_detail::compose_fn(p, [&](int k) {
    if (k == 0) return std::log(a);
    double v = 1.0;
    for (int i = 1; i < k; ++i) v *= -i;
    for (int i = 0; i < k; ++i) v /= a;
    return v;
  });
}
template <int ORDER>
PolyT<ORDER> sinh(const PolyT<ORDER>& p) {
  double s = std::sinh(p.value()), c = std::cosh(p.value());
  return polyt_detail::compose_fn(p, [&](int k) { return k % 2 ? c : s; });
}
template <int ORDER>
PolyT<ORDER> cosh(const PolyT<ORDER>& p) {
  double s = std::sinh(p.value()), c = std::cosh(p.value());
  return polyt_detail::compose_fn(p, [&](int k) { return k % 2 ? s : c; });
}

using Poly3 = PolyT<3>;
using Poly4 = PolyT<4>;

}  // namespace rolling
