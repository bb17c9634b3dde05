#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cta/common.hpp"
#include "cta/quadrature.hpp"
#include "cta/taylor_jet.hpp"

namespace cta {

/// A 2pi-periodic function together with whatever analytic derivative
/// evaluators it ships. Orders past the analytic ones are served by
/// central finite differences on the highest analytic derivative.
struct PeriodicFunctionModel {
  std::function<double(double)> f;
  std::vector<std::function<double(double)>> analytic_derivatives;
  int max_analytic_order = 0;
  std::string label;

  double operator()(double x) const { return f(x); }
};

/// Smooth even cutoff: 0 on |x|<=1, 1 on |x|>=2, C-infinity transition
/// psi(|x|-1)/(psi(|x|-1)+psi(2-|x|)) with psi(t)=exp(-1/t) for t>0.
inline Jet bump_jet(const Jet& u) {
  const double v = std::abs(u.value());
  if (v <= 1.0) return Jet::constant(0.0);
  if (v >= 2.0) return Jet::constant(1.0);
  const Jet w = (u.value() >= 0.0) ? u : -u;
  const Jet one = Jet::constant(1.0);
  const Jet t1 = w - 1.0;
  const Jet t2 = -w + 2.0;
  const Jet e1 = jet_exp(-(one / t1));
  const Jet e2 = jet_exp(-(one / t2));
  return e1 / (e1 + e2);
}

inline double eval_bump(double x) {
  const double v = std::abs(x);
  if (v <= 1.0) return 0.0;
  if (v >= 2.0) return 1.0;
  const double e1 = std::exp(-1.0 / (v - 1.0));
  const double e2 = std::exp(-1.0 / (2.0 - v));
  return e1 / (e1 + e2);
}

/// j-th derivative of the cutoff, j <= 6.
inline double bump_derivative(int j, double x) {
  require(j >= 0 && j <= 6, "bump_derivative: order must be in [0, 6]");
  return bump_jet(Jet::variable(x)).derivative(j);
}

constexpr int kFiniteDifferenceBudget = 6;

namespace detail {

/// Central difference estimate of the m-th derivative of g at x, step h.
inline double central_difference(const std::function<double(double)>& g,
                                 double x, double h, int m) {
  double s = 0.0;
  for (int i = 0; i <= m; ++i)
    s += ((i % 2 == 0) ? 1.0 : -1.0) * binomial(m, i) * g(x + (0.5 * m - i) * h);
  return s / std::pow(h, m);
}

}  // namespace detail

/// Derivative of order j. Analytic evaluators are used as far as they go;
/// beyond that, central differences with one Richardson step (error
/// O(h^4)) applied to the highest analytic derivative, up to 6 orders out.
inline double derivative(const PeriodicFunctionModel& model, int j, double x) {
  require(j >= 0, "derivative: order must be nonnegative");
  if (j == 0) return model.f(x);
  const int d = model.max_analytic_order;
  if (j <= d) return model.analytic_derivatives[static_cast<std::size_t>(j - 1)](x);
  const int m = j - d;
  if (m > kFiniteDifferenceBudget)
    throw UnsupportedOrder("derivative: order " + std::to_string(j) +
                           " exceeds analytic order " + std::to_string(d) +
                           " plus finite-difference budget");
  const std::function<double(double)> base =
      (d == 0) ? model.f : model.analytic_derivatives[static_cast<std::size_t>(d - 1)];
  const double h =
      std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (j + 4)) *
      (1.0 + std::abs(x));
  const double coarse = detail::central_difference(base, x, h, m);
  const double fine = detail::central_difference(base, x, 0.5 * h, m);
  return (4.0 * fine - coarse) / 3.0;
}

/// Builds a model whose value and derivatives all come from one jet
/// evaluator. `order` declares how many derivative orders are exposed.
inline PeriodicFunctionModel make_jet_model(std::string label,
                                            std::function<Jet(double)> jet_fn,
                                            int order) {
  require(order >= 0 && order <= Jet::kOrder, "make_jet_model: bad order");
  PeriodicFunctionModel m;
  m.label = std::move(label);
  m.f = [jet_fn](double x) { return jet_fn(x).value(); };
  for (int j = 1; j <= order; ++j)
    m.analytic_derivatives.push_back(
        [jet_fn, j](double x) { return jet_fn(x).derivative(j); });
  m.max_analytic_order = order;
  return m;
}

inline PeriodicFunctionModel make_sin_model() {
  return make_jet_model(
      "sin", [](double x) { return jet_sin(Jet::variable(x)); }, Jet::kOrder);
}

inline PeriodicFunctionModel make_constant_model(double v) {
  return make_jet_model(
      "const", [v](double) { return Jet::constant(v); }, Jet::kOrder);
}

/// Model built from an antiderivative: value from the quadrature table,
/// derivatives j >= 1 from the integrand's jets. A plain-value integrand
/// keeps the quadrature hot path cheap.
inline PeriodicFunctionModel make_antiderivative_model(
    std::string label, std::function<double(double)> integrand,
    std::function<Jet(double)> integrand_jets, int order,
    double quad_tol = 1e-12, int seed_cells = 64) {
  PeriodicFunctionModel m;
  m.label = std::move(label);
  auto table =
      std::make_shared<PeriodicAntiderivative>(integrand, quad_tol, seed_cells);
  m.f = [table](double x) { return (*table)(x); };
  m.analytic_derivatives.push_back(integrand);
  for (int j = 2; j <= order; ++j)
    m.analytic_derivatives.push_back(
        [integrand_jets, j](double x) { return integrand_jets(x).derivative(j - 1); });
  m.max_analytic_order = order;
  return m;
}

/// Max periodicity defect |f(x+2pi)-f(x)| over `count` seeded random points,
/// relative to 1 + sup|f|.
inline double periodicity_defect(const PeriodicFunctionModel& model, int count,
                                 std::uint64_t seed = 12345) {
  std::uint64_t state = seed ? seed : 1;
  auto next01 = [&state]() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return (state >> 11) * (1.0 / 9007199254740992.0);
  };
  double worst = 0.0, scale = 0.0;
  for (int i = 0; i < count; ++i) {
    const double x = -kPi + kTwoPi * next01();
    const double a = model.f(x), b = model.f(x + kTwoPi);
    worst = std::max(worst, std::abs(a - b));
    scale = std::max(scale, std::abs(a));
  }
  return worst / (1.0 + scale);
}

}  // namespace cta
