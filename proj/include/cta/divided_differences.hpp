#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "cta/common.hpp"
#include "cta/smoothness.hpp"

namespace cta {

/// Strictly increasing knot set t_0 < ... < t_m.
struct KnotSet {
  std::vector<double> knots;

  explicit KnotSet(std::vector<double> t) : knots(std::move(t)) {
    require(!knots.empty(), "KnotSet: empty");
    const double span = knots.back() - knots.front();
    min_gap_ = span;
    for (std::size_t i = 1; i < knots.size(); ++i) {
      const double gap = knots[i] - knots[i - 1];
      if (gap <= 1e-12 * std::max(span, 1.0))
        throw DegenerateKnots("KnotSet: knots not strictly increasing / gap too small");
      min_gap_ = std::min(min_gap_, gap);
    }
  }

  int order() const { return static_cast<int>(knots.size()) - 1; }  // m
  double span() const { return knots.back() - knots.front(); }
  double min_gap() const { return min_gap_; }

 private:
  double min_gap_ = 0.0;
};

/// Alternating monotone data patterns: pattern_a means
/// (-1)^(m-i) (g(t_i) - g(t_{i-1})) >= 0 for all i, pattern_b the reverse.
enum class MonotonePattern { pattern_a, pattern_b };

/// Divided difference [t_0,...,t_m; g] by the Neville/Newton recurrence.
/// [t_0; g] = g(t_0).
inline double divided_difference(const KnotSet& knots,
                                 std::vector<double> values) {
  const int m = knots.order();
  if (static_cast<int>(values.size()) != m + 1)
    throw LengthMismatch("divided_difference: values length != knot count");
  for (int level = 1; level <= m; ++level)
    for (int i = 0; i + level <= m; ++i)
      values[static_cast<std::size_t>(i)] =
          (values[static_cast<std::size_t>(i + 1)] - values[static_cast<std::size_t>(i)]) /
          (knots.knots[static_cast<std::size_t>(i + level)] - knots.knots[static_cast<std::size_t>(i)]);
  return values[0];
}

inline bool pattern_holds(const std::vector<double>& values,
                          MonotonePattern pattern) {
  const int m = static_cast<int>(values.size()) - 1;
  double scale = 0.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  const double tol = 1e-12 * std::max(scale, 1.0);
  for (int i = 1; i <= m; ++i) {
    const double signedd = ((m - i) % 2 == 0 ? 1.0 : -1.0) *
                           (values[static_cast<std::size_t>(i)] -
                            values[static_cast<std::size_t>(i - 1)]);
    if (pattern == MonotonePattern::pattern_a ? signedd < -tol : signedd > tol)
      return false;
  }
  return true;
}

namespace detail {
inline void validate_pattern(const std::vector<double>& values,
                             MonotonePattern pattern) {
  if (!pattern_holds(values, pattern))
    throw PatternViolation("values do not satisfy the declared monotone pattern");
}
inline double value_scale(const std::vector<double>& values) {
  double s = 0.0;
  for (double v : values) s = std::max(s, std::abs(v));
  return std::max(s, 1.0);
}
}  // namespace detail

struct SignReport {
  bool holds = false;
  double value = 0.0;
};

/// Under a monotone pattern, the divided difference carries the pattern's
/// sign: >= 0 for pattern_a, <= 0 for pattern_b.
inline SignReport check_sign(const KnotSet& knots,
                             const std::vector<double>& values,
                             MonotonePattern pattern) {
  detail::validate_pattern(values, pattern);
  SignReport r;
  r.value = divided_difference(knots, values);
  const double tol = 1e-12 * detail::value_scale(values);
  r.holds = (pattern == MonotonePattern::pattern_a) ? r.value >= -tol
                                                    : r.value <= tol;
  return r;
}

struct RecurrenceReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_err = 0.0;
};

/// |[t_0..t_m]| = (|[t_1..t_m]| + |[t_0..t_{m-1}]|) / (t_m - t_0),
/// valid under either monotone pattern.
inline RecurrenceReport check_recurrence(const KnotSet& knots,
                                         const std::vector<double>& values,
                                         MonotonePattern pattern) {
  require(knots.order() >= 2, "check_recurrence: need m >= 2");
  detail::validate_pattern(values, pattern);
  RecurrenceReport r;
  r.lhs = std::abs(divided_difference(knots, values));
  KnotSet tail(std::vector<double>(knots.knots.begin() + 1, knots.knots.end()));
  KnotSet head(std::vector<double>(knots.knots.begin(), knots.knots.end() - 1));
  const double dd_tail = std::abs(divided_difference(
      tail, std::vector<double>(values.begin() + 1, values.end())));
  const double dd_head = std::abs(divided_difference(
      head, std::vector<double>(values.begin(), values.end() - 1)));
  r.rhs = (dd_tail + dd_head) / knots.span();
  r.rel_err = std::abs(r.lhs - r.rhs) / (1.0 + std::abs(r.lhs));
  return r;
}

struct LowerBoundReport {
  bool holds = false;
  double slack = 0.0;
};

/// (t_m - t_0)^m |[t_0..t_m; g]| >= max g(t_i) - min g(t_i).
inline LowerBoundReport check_lower_bound(const KnotSet& knots,
                                          const std::vector<double>& values,
                                          MonotonePattern pattern) {
  detail::validate_pattern(values, pattern);
  LowerBoundReport r;
  const double dd = std::abs(divided_difference(knots, values));
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  const double lhs = std::pow(knots.span(), knots.order()) * dd;
  r.slack = lhs - (*mx - *mn);
  r.holds = r.slack >= -1e-10 * detail::value_scale(values);
  return r;
}

struct ProductBoundReport {
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// |[t_0..t_m; g]| prod_{i=r}^{m} (t_i - t_0) >= |[t_1..t_r; g]|.
inline ProductBoundReport check_product_bound(const KnotSet& knots,
                                              const std::vector<double>& values,
                                              MonotonePattern pattern, int r) {
  const int m = knots.order();
  if (r < 2 || r > m) throw BadR("check_product_bound: need 2 <= r <= m");
  detail::validate_pattern(values, pattern);
  ProductBoundReport rep;
  double prod = 1.0;
  for (int i = r; i <= m; ++i)
    prod *= knots.knots[static_cast<std::size_t>(i)] - knots.knots.front();
  rep.lhs = std::abs(divided_difference(knots, values)) * prod;
  KnotSet mid(std::vector<double>(knots.knots.begin() + 1,
                                  knots.knots.begin() + r + 1));
  rep.rhs = std::abs(divided_difference(
      mid, std::vector<double>(values.begin() + 1, values.begin() + r + 1)));
  rep.holds = rep.lhs >= rep.rhs - 1e-10 * detail::value_scale(values);
  return rep;
}

struct DividedDifferenceBoundReport {
  double lhs = 0.0;
  double rhs_without_c = 0.0;
  double ratio = 0.0;  // the empirical constant
};

/// Compares |[x_0..x_m; f]| against the modulus-of-smoothness majorant
/// (1/l!) w_{m-l}(f^(l), b-a; [a,b]) sum_j 1/prod_{i>=l, i!=j} |x_j - x_i|.
/// The absolute constant of the bound is never pinned; the ratio is the
/// empirically observed one.
inline DividedDifferenceBoundReport divided_difference_bound(
    const std::function<double(double)>& f,
    const std::function<double(double)>& f_deriv_l, int l, const KnotSet& knots,
    double a, double b, const GridSpec& spec = {}) {
  const int m = knots.order();
  if (l < 0 || l >= m)
    throw UnsupportedOrder("divided_difference_bound: need 0 <= l < m");
  DividedDifferenceBoundReport rep;
  std::vector<double> values;
  values.reserve(knots.knots.size());
  for (double t : knots.knots) values.push_back(f(t));
  rep.lhs = std::abs(divided_difference(knots, values));
  const auto omega = modulus_interval(f_deriv_l, m - l, b - a, a, b, spec);
  double sum = 0.0;
  for (int j = l; j <= m; ++j) {
    double prod = 1.0;
    for (int i = l; i <= m; ++i)
      if (i != j)
        prod *= std::abs(knots.knots[static_cast<std::size_t>(j)] -
                         knots.knots[static_cast<std::size_t>(i)]);
    sum += 1.0 / prod;
  }
  double lfact = 1.0;
  for (int i = 2; i <= l; ++i) lfact *= i;
  rep.rhs_without_c = omega.value * sum / lfact;
  rep.ratio = (rep.rhs_without_c > 0.0) ? rep.lhs / rep.rhs_without_c
              : (rep.lhs == 0.0)        ? 0.0
                                        : std::numeric_limits<double>::infinity();
  return rep;
}

}  // namespace cta
