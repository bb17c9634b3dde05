#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "cta/common.hpp"

namespace cta {

namespace detail {
// 15-point Gauss-Legendre rule on [-1, 1].
inline constexpr double kGL15Nodes[15] = {
    -0.9879925180204854, -0.9372733924007060, -0.8482065834104272,
    -0.7244177313601701, -0.5709721726085388, -0.3941513470775634,
    -0.2011940939974345, 0.0,                 0.2011940939974345,
    0.3941513470775634,  0.5709721726085388,  0.7244177313601701,
    0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
inline constexpr double kGL15Weights[15] = {
    0.0307532419961173, 0.0703660474881081, 0.1071592204671719,
    0.1395706779261543, 0.1662692058169939, 0.1861610000155622,
    0.1984314853271116, 0.2025782419255613, 0.1984314853271116,
    0.1861610000155622, 0.1662692058169939, 0.1395706779261543,
    0.1071592204671719, 0.0703660474881081, 0.0307532419961173};
}  // namespace detail

inline double gauss15(const std::function<double(double)>& f, double a,
                      double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 15; ++i)
    s += detail::kGL15Weights[i] * f(mid + half * detail::kGL15Nodes[i]);
  return s * half;
}

namespace detail {
/// Panel value plus the L1 mass estimate used for the roundoff floor.
inline double gauss15_abs(const std::function<double(double)>& f, double a,
                          double b, double& abs_mass) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0, m = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double v = f(mid + half * kGL15Nodes[i]);
    s += kGL15Weights[i] * v;
    m += kGL15Weights[i] * std::abs(v);
  }
  abs_mass = m * std::abs(half);
  return s * half;
}
// Below this multiple of machine epsilon times the local mass, the
// bisection defect is roundoff, not truncation; splitting further only
// grows the tree. Generous because elementary-function chains carry a few
// dozen ulps themselves; the achievable total error is this times the L1
// mass of the integrand.
inline constexpr double kRoundoffFloor = 512.0 * 2.220446049250313e-16;
}  // namespace detail

/// Adaptive Gauss-Legendre with interval-bisection error control. The
/// tolerance budget is proportional to interval width, with a roundoff
/// floor so noise-level defects terminate the recursion.
inline double integrate_adaptive(const std::function<double(double)>& f,
                                 double a, double b, double abs_tol = 1e-12,
                                 int max_depth = 48) {
  std::function<double(double, double, double, double, int)> rec =
      [&](double lo, double hi, double whole, double tol, int depth) -> double {
    const double mid = 0.5 * (lo + hi);
    double mass_l = 0.0, mass_r = 0.0;
    const double left = detail::gauss15_abs(f, lo, mid, mass_l);
    const double right = detail::gauss15_abs(f, mid, hi, mass_r);
    const double floor = detail::kRoundoffFloor * (mass_l + mass_r);
    if (depth <= 0 || std::abs(left + right - whole) <= std::max(tol, floor))
      return left + right;
    return rec(lo, mid, left, 0.5 * tol, depth - 1) +
           rec(mid, hi, right, 0.5 * tol, depth - 1);
  };
  return rec(a, b, gauss15(f, a, b), abs_tol, max_depth);
}

/// Antiderivative F(x) = int_0^x f of a 2pi-periodic integrand with zero
/// mean. Prefix integrals are accumulated once on an adaptively refined
/// breakpoint table over [-pi, pi]; evaluation adds a single local panel
/// from the nearest breakpoint, so no interpolation error enters.
class PeriodicAntiderivative {
 public:
  PeriodicAntiderivative() = default;

  PeriodicAntiderivative(std::function<double(double)> f, double abs_tol = 1e-12,
                         int seed_cells = 64)
      : f_(std::move(f)) {
    build(abs_tol, seed_cells);
  }

  double operator()(double x) const {
    const double u = wrap_point(x);
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), u);
    std::size_t i = static_cast<std::size_t>(it - breaks_.begin());
    if (i == 0) return prefix_.front();  // u == -pi
    --i;
    if (u == breaks_[i]) return prefix_[i];
    return prefix_[i] + gauss15(f_, breaks_[i], u);
  }

  /// Total integral over one period (zero-mean defect diagnostic).
  double period_integral() const { return prefix_.back() - prefix_.front(); }

 private:
  static double wrap_point(double x) {
    if (x >= -kPi && x <= kPi) return x;
    return wrap_angle(x);
  }

  void build(double abs_tol, int seed_cells) {
    std::vector<double> cells;
    std::function<void(double, double, double, double, int)> subdivide =
        [&](double lo, double hi, double whole, double tol, int depth) {
          const double mid = 0.5 * (lo + hi);
          double mass_l = 0.0, mass_r = 0.0;
          const double left = detail::gauss15_abs(f_, lo, mid, mass_l);
          const double right = detail::gauss15_abs(f_, mid, hi, mass_r);
          const double floor = detail::kRoundoffFloor * (mass_l + mass_r);
          if (depth <= 0 ||
              std::abs(left + right - whole) <= std::max(tol, floor)) {
            cells.push_back(lo);
            return;
          }
          subdivide(lo, mid, left, 0.5 * tol, depth - 1);
          subdivide(mid, hi, right, 0.5 * tol, depth - 1);
        };
    // Seed with a uniform split so sharp local features anywhere in the
    // period are found by the refinement.
    const int seed = std::max(8, seed_cells);
    for (int i = 0; i < seed; ++i) {
      const double lo = -kPi + kTwoPi * i / seed;
      const double hi = -kPi + kTwoPi * (i + 1) / seed;
      subdivide(lo, hi, gauss15(f_, lo, hi), abs_tol / seed, 40);
    }
    cells.push_back(kPi);
    breaks_ = std::move(cells);
    // Anchor the prefix at x = 0.
    auto pos = std::lower_bound(breaks_.begin(), breaks_.end(), 0.0);
    if (pos == breaks_.end() || *pos != 0.0) breaks_.insert(pos, 0.0);
    prefix_.assign(breaks_.size(), 0.0);
    for (std::size_t i = 1; i < breaks_.size(); ++i)
      prefix_[i] = prefix_[i - 1] + gauss15(f_, breaks_[i - 1], breaks_[i]);
    const std::size_t zero =
        static_cast<std::size_t>(std::lower_bound(breaks_.begin(), breaks_.end(), 0.0) -
                                 breaks_.begin());
    const double shift = prefix_[zero];
    for (double& p : prefix_) p -= shift;
  }

  std::function<double(double)> f_;
  std::vector<double> breaks_;
  std::vector<double> prefix_;
};

}  // namespace cta
