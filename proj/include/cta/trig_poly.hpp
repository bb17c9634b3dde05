#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "cta/common.hpp"

namespace cta {

/// Trigonometric polynomial of degree < n:
///   T(x) = c0 + sum_{j=1}^{n-1} (a_j cos jx + b_j sin jx).
struct TrigPolynomial {
  int degree_bound = 1;  // n; the degree is < n
  double c0 = 0.0;
  std::vector<double> a;  // cos coefficients, size n-1
  std::vector<double> b;  // sin coefficients, size n-1

  explicit TrigPolynomial(int n = 1) : degree_bound(n) {
    require(n >= 1, "TrigPolynomial: degree bound must be >= 1");
    a.assign(static_cast<std::size_t>(n - 1), 0.0);
    b.assign(static_cast<std::size_t>(n - 1), 0.0);
  }

  static TrigPolynomial constant(double v, int n = 1) {
    TrigPolynomial t(n);
    t.c0 = v;
    return t;
  }

  double operator()(double x) const {
    // cos/sin of jx by the angle-addition recurrence.
    double cj = 1.0, sj = 0.0;
    const double c1 = std::cos(x), s1 = std::sin(x);
    double r = c0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      const double cn = cj * c1 - sj * s1;
      const double sn = sj * c1 + cj * s1;
      cj = cn;
      sj = sn;
      r += a[j] * cj + b[j] * sj;
    }
    return r;
  }

  /// Termwise derivative: (a_j, b_j) -> (j b_j, -j a_j), same degree bound.
  TrigPolynomial derivative() const {
    TrigPolynomial d(degree_bound);
    for (std::size_t j = 0; j < a.size(); ++j) {
      const double jj = static_cast<double>(j + 1);
      d.a[j] = jj * b[j];
      d.b[j] = -jj * a[j];
    }
    return d;
  }

  double sup_norm_grid(int count = 0) const {
    const int m = count > 0 ? count : std::max(1024, 32 * degree_bound);
    double worst = 0.0;
    for (int i = 0; i < m; ++i)
      worst = std::max(worst, std::abs((*this)(-kPi + kTwoPi * i / m)));
    return worst;
  }
};

/// The cycle Y_s of 2s monotonicity-change points. Representatives are
/// sorted, start inside (-pi, pi], and span less than a period; the first
/// point is, by convention, where the function switches from nondecreasing
/// to nonincreasing. The opposite parity for the same point set on the
/// circle is expressed by shifting representatives (e.g. {0, pi} vs
/// {pi, 2pi}).
struct ExtremaCycle {
  int s = 1;
  std::vector<double> points;

  explicit ExtremaCycle(std::vector<double> pts) : points(std::move(pts)) {
    require(!points.empty() && points.size() % 2 == 0,
            "ExtremaCycle: need 2s points");
    s = static_cast<int>(points.size()) / 2;
    require(points.front() > -kPi && points.front() <= kPi,
            "ExtremaCycle: first point must lie in (-pi, pi]");
    for (std::size_t i = 1; i < points.size(); ++i)
      require(points[i] > points[i - 1], "ExtremaCycle: points must increase");
    require(points.back() - points.front() < kTwoPi,
            "ExtremaCycle: span must be < 2pi");
  }

  /// y_i with the periodic extension y_{i+2s} = y_i + 2pi (1-based i).
  double y(int i) const {
    const int m = 2 * s;
    int idx = i - 1;
    int cycles = 0;
    while (idx < 0) {
      idx += m;
      --cycles;
    }
    while (idx >= m) {
      idx -= m;
      ++cycles;
    }
    return points[static_cast<std::size_t>(idx)] + kTwoPi * cycles;
  }
};

/// Sign product Pi(x) = prod_{i=1}^{2s} sin((x - y_i)/2). Positive exactly
/// where comonotone functions must be nondecreasing.
inline double pi_product(const ExtremaCycle& cycle, double x) {
  double p = 1.0;
  for (double y : cycle.points) p *= std::sin(0.5 * (x - y));
  return p;
}

struct ComonotoneReport {
  bool ok = false;
  double worst_violation = 0.0;  // most negative value of T'(x) Pi(x) seen
  double worst_x = 0.0;
};

/// Grid certificate for sign(d) * Pi >= -margin where d is a derivative
/// evaluator. The grid is uniform plus the cycle points plus midpoints
/// between close neighbours, and is doubled up to `refinements` times.
inline ComonotoneReport certify_comonotone(
    const std::function<double(double)>& deriv, const ExtremaCycle& cycle,
    int grid_count, double margin, int refinements = 4) {
  ComonotoneReport rep;
  rep.worst_violation = 0.0;
  rep.ok = true;
  int m = std::max(grid_count, 16);
  double prev_worst = std::numeric_limits<double>::infinity();
  for (int pass = 0; pass <= refinements; ++pass) {
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(m) + 16 * cycle.points.size());
    for (int i = 0; i < m; ++i) xs.push_back(-kPi + kTwoPi * i / m);
    const double spacing = kTwoPi / m;
    for (std::size_t i = 0; i < cycle.points.size(); ++i) {
      xs.push_back(wrap_angle(cycle.points[i]));
      // Extra points resolving clustered cycles tighter than the grid.
      if (i + 1 < cycle.points.size()) {
        const double gap = cycle.points[i + 1] - cycle.points[i];
        if (gap < 2.0 * spacing)
          for (int q = 1; q <= 8; ++q)
            xs.push_back(wrap_angle(cycle.points[i] + gap * q / 9.0));
      }
    }
    double worst = 0.0, worst_x = 0.0;
    for (double x : xs) {
      const double v = deriv(x) * pi_product(cycle, x);
      if (v < worst) {
        worst = v;
        worst_x = x;
      }
    }
    rep.worst_violation = worst;
    rep.worst_x = worst_x;
    rep.ok = worst >= -margin;
    // Stop once the verdict is stable under refinement.
    if (pass > 0 && rep.ok && worst >= prev_worst - 1e-15) break;
    prev_worst = worst;
    m *= 2;
  }
  return rep;
}

/// Comonotonicity certificate for a trigonometric polynomial.
inline ComonotoneReport is_comonotone(const TrigPolynomial& T,
                                      const ExtremaCycle& cycle,
                                      int grid_count = 0, double margin = 1e-9) {
  const TrigPolynomial d = T.derivative();
  const int m = std::max(grid_count, 8 * T.degree_bound);
  return certify_comonotone([&d](double x) { return d(x); }, cycle, m, margin);
}

/// ||T^(j)||_grid / (n^j ||T||_grid); 0 when the derivative vanishes.
inline double bernstein_ratio(const TrigPolynomial& T, int j) {
  require(j >= 0 && j <= 6, "bernstein_ratio: need 0 <= j <= 6");
  const double denom_norm = T.sup_norm_grid();
  if (denom_norm == 0.0) throw ZeroPolynomial("bernstein_ratio: zero polynomial");
  TrigPolynomial d = T;
  for (int i = 0; i < j; ++i) d = d.derivative();
  const double num = d.sup_norm_grid();
  if (num == 0.0) return 0.0;
  return num / (std::pow(T.degree_bound, j) * denom_norm);
}

}  // namespace cta
