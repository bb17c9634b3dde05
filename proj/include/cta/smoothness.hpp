#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "cta/common.hpp"

namespace cta {

/// Resolution of the sup-estimation grids for moduli of smoothness.
/// The default h grid mixes a uniform part (always containing t itself,
/// where many suprema are attained) with a geometric tail toward 0.
struct GridSpec {
  int h_count = 64;
  int x_count = 2048;
  std::vector<double> h_values;  // explicit override; used verbatim if set

  std::vector<double> steps(double t) const {
    if (!h_values.empty()) return h_values;
    std::vector<double> hs;
    hs.reserve(static_cast<std::size_t>(h_count));
    const int geometric = std::min(16, h_count / 4);
    const int uniform = h_count - geometric;
    for (int i = 1; i < uniform; ++i) hs.push_back(t * i / uniform);
    hs.push_back(t);  // many suprema sit at the endpoint; keep it exact
    for (int j = 1; j <= geometric; ++j) hs.push_back(t * std::ldexp(1.0, -j));
    std::sort(hs.begin(), hs.end());
    return hs;
  }
};

struct ModulusEstimate {
  double value = 0.0;
  int k = 1;
  double t = 0.0;
  int grid_h_count = 0;
  int grid_x_count = 0;
  std::optional<std::pair<double, double>> interval;
};

/// k-th finite difference sum_{i=0}^{k} (-1)^i C(k,i) g(x + i h).
inline double finite_difference(const std::function<double(double)>& g,
                                double x, double h, int k) {
  require(k >= 1 && k <= 8, "finite_difference: k must be in [1, 8]");
  require(h > 0.0, "finite_difference: h must be positive");
  double s = 0.0;
  for (int i = 0; i <= k; ++i)
    s += ((i % 2 == 0) ? 1.0 : -1.0) * binomial(k, i) * g(x + i * h);
  return s;
}

/// Grid estimate (a lower bound) of the k-th modulus of smoothness of a
/// 2pi-periodic g: max over steps h in (0, t] and x in [-pi, pi).
inline ModulusEstimate modulus_circle(const std::function<double(double)>& g,
                                      int k, double t,
                                      const GridSpec& spec = {}) {
  require(t > 0.0 && t <= kTwoPi, "modulus_circle: need 0 < t <= 2pi");
  ModulusEstimate est;
  est.k = k;
  est.t = t;
  est.grid_x_count = spec.x_count;
  const auto hs = spec.steps(t);
  est.grid_h_count = static_cast<int>(hs.size());
  double worst = 0.0;
  for (double h : hs) {
    if (!(h > 0.0) || h > t) continue;
    for (int i = 0; i < spec.x_count; ++i) {
      const double x = -kPi + kTwoPi * i / spec.x_count;
      worst = std::max(worst, std::abs(finite_difference(g, x, h, k)));
    }
  }
  est.value = worst;
  return est;
}

/// Interval modulus: x ranges over [a, b-kh] for each step h. Steps with
/// an empty x-range are skipped (the h range is clipped to k h <= b-a).
inline ModulusEstimate modulus_interval(const std::function<double(double)>& g,
                                        int k, double t, double a, double b,
                                        const GridSpec& spec = {}) {
  if (!(b - a > 0.0)) throw EmptyRange("modulus_interval: b - a <= 0");
  require(t > 0.0, "modulus_interval: t must be positive");
  ModulusEstimate est;
  est.k = k;
  est.t = t;
  est.grid_x_count = spec.x_count;
  est.interval = std::make_pair(a, b);
  const auto hs = spec.steps(t);
  est.grid_h_count = static_cast<int>(hs.size());
  double worst = 0.0;
  for (double h : hs) {
    if (!(h > 0.0) || h > t) continue;
    const double hi = b - k * h;
    if (hi < a) continue;
    // Endpoints included; doubling x_count refines to a superset.
    const int count = spec.x_count;
    for (int i = 0; i <= count; ++i) {
      const double x = a + (hi - a) * i / count;
      worst = std::max(worst, std::abs(finite_difference(g, x, h, k)));
    }
  }
  est.value = worst;
  return est;
}

}  // namespace cta
