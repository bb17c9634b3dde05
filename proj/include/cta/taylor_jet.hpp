#pragma once

#include <array>
#include <cmath>

#include "cta/common.hpp"

namespace cta {

/// Truncated Taylor-series arithmetic. A Jet carries the Taylor
/// coefficients c[i] = f^(i)(x0)/i! of a function at the expansion point,
/// up to a fixed order. Arithmetic on jets implements the product,
/// quotient and elementary-function recurrences, so derivatives of
/// composite expressions fall out without symbolic work.
struct Jet {
  static constexpr int kOrder = 8;
  std::array<double, kOrder + 1> c{};

  Jet() = default;
  explicit Jet(double value) { c[0] = value; }

  /// Jet of the identity map evaluated at x: value x, slope `scale`
  /// (scale != 1 models an inner affine substitution u = scale*x + ...).
  static Jet variable(double x, double scale = 1.0) {
    Jet j;
    j.c[0] = x;
    if constexpr (kOrder >= 1) j.c[1] = scale;
    return j;
  }

  static Jet constant(double v) { return Jet(v); }

  double value() const { return c[0]; }

  /// k-th derivative = k! * c[k].
  double derivative(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return c[k] * f;
  }

  Jet operator-() const {
    Jet r;
    for (int i = 0; i <= kOrder; ++i) r.c[i] = -c[i];
    return r;
  }
  Jet& operator+=(const Jet& o) {
    for (int i = 0; i <= kOrder; ++i) c[i] += o.c[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int i = 0; i <= kOrder; ++i) c[i] -= o.c[i];
    return *this;
  }
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double s) {
    a.c[0] += s;
    return a;
  }
  friend Jet operator-(Jet a, double s) {
    a.c[0] -= s;
    return a;
  }
  friend Jet operator*(const Jet& a, double s) {
    Jet r;
    for (int i = 0; i <= kOrder; ++i) r.c[i] = a.c[i] * s;
    return r;
  }
  friend Jet operator*(double s, const Jet& a) { return a * s; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i <= kOrder; ++i) {
      double s = 0.0;
      for (int j = 0; j <= i; ++j) s += a.c[j] * b.c[i - j];
      r.c[i] = s;
    }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet r;
    r.c[0] = a.c[0] / b.c[0];
    for (int i = 1; i <= kOrder; ++i) {
      double s = a.c[i];
      for (int j = 1; j <= i; ++j) s -= b.c[j] * r.c[i - j];
      r.c[i] = s / b.c[0];
    }
    return r;
  }
};

inline Jet jet_exp(const Jet& u) {
  Jet e;
  e.c[0] = std::exp(u.c[0]);
  for (int k = 1; k <= Jet::kOrder; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += j * u.c[j] * e.c[k - j];
    e.c[k] = s / k;
  }
  return e;
}

/// sin and cos share the coupled recurrence, so compute them together.
inline void jet_sin_cos(const Jet& u, Jet& s, Jet& c) {
  s.c[0] = std::sin(u.c[0]);
  c.c[0] = std::cos(u.c[0]);
  for (int k = 1; k <= Jet::kOrder; ++k) {
    double as = 0.0, ac = 0.0;
    for (int j = 1; j <= k; ++j) {
      as += j * u.c[j] * c.c[k - j];
      ac += j * u.c[j] * s.c[k - j];
    }
    s.c[k] = as / k;
    c.c[k] = -ac / k;
  }
}

inline Jet jet_sin(const Jet& u) {
  Jet s, c;
  jet_sin_cos(u, s, c);
  return s;
}

inline Jet jet_cos(const Jet& u) {
  Jet s, c;
  jet_sin_cos(u, s, c);
  return c;
}

/// Integer power by repeated multiplication.
inline Jet jet_powi(const Jet& u, int p) {
  Jet r = Jet::constant(1.0);
  for (int i = 0; i < p; ++i) r = r * u;
  return r;
}

/// Real power z^alpha for z.value() > 0, via the ODE z y' = alpha y z'.
inline Jet jet_pow(const Jet& z, double alpha) {
  Jet y;
  if (z.c[0] <= 0.0) {
    // Only reachable at the singular point itself; derivatives there are
    // not defined, so return the value with zeroed higher terms.
    y.c[0] = (z.c[0] == 0.0) ? 0.0 : std::pow(z.c[0], alpha);
    return y;
  }
  y.c[0] = std::pow(z.c[0], alpha);
  for (int k = 1; k <= Jet::kOrder; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += (alpha * j - (k - j)) * z.c[j] * y.c[k - j];
    y.c[k] = s / (k * z.c[0]);
  }
  return y;
}

}  // namespace cta
