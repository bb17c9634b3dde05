#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "cta/algebraic_poly.hpp"
#include "cta/common.hpp"
#include "cta/lp.hpp"
#include "cta/trig_poly.hpp"

namespace cta {

struct MinimaxSolution {
  std::variant<TrigPolynomial, AlgebraicPolynomial> polynomial{TrigPolynomial(1)};
  double value = 0.0;  // recomputed grid sup of |f - T|
  double lp_epsilon = 0.0;
  int grid_count = 0;
  bool constrained = false;
  int active_constraint_count = 0;
  long solver_iterations = 0;
  int alternation_count = 0;
  double worst_sign_violation = 0.0;  // min of T' Pi over the sign grid

  const TrigPolynomial& trig() const { return std::get<TrigPolynomial>(polynomial); }
  const AlgebraicPolynomial& algebraic() const {
    return std::get<AlgebraicPolynomial>(polynomial);
  }
};

namespace detail {

/// Discretized Chebyshev problems are solved through the dual of
///   min eps  s.t.  |f(x_g) - sum_j c_j phi_j(x_g)| <= eps,
///                  sigma_c sum_j c_j psi_j(x_c) >= 0,
/// which in standard form has one column per one-sided error constraint
/// (u_g, v_g) and per sign constraint (w_c), d feature rows with rhs 0 and
/// one normalization row with rhs 1. The optimal multipliers of the rows
/// are exactly the primal coefficients, and -objective is eps*.
struct DualFitProblem {
  int d = 0;  // feature count
  std::vector<std::vector<double>> columns;
  std::vector<double> cost;

  void add_fit_point(const std::vector<double>& phi, double fvalue) {
    std::vector<double> cu(static_cast<std::size_t>(d) + 1);
    std::vector<double> cv(static_cast<std::size_t>(d) + 1);
    for (int j = 0; j < d; ++j) {
      cu[static_cast<std::size_t>(j)] = phi[static_cast<std::size_t>(j)];
      cv[static_cast<std::size_t>(j)] = -phi[static_cast<std::size_t>(j)];
    }
    cu[static_cast<std::size_t>(d)] = 1.0;
    cv[static_cast<std::size_t>(d)] = 1.0;
    columns.push_back(std::move(cu));
    columns.push_back(std::move(cv));
    cost.push_back(fvalue);
    cost.push_back(-fvalue);
  }

  void add_sign_point(const std::vector<double>& psi, double sigma) {
    std::vector<double> cw(static_cast<std::size_t>(d) + 1, 0.0);
    for (int j = 0; j < d; ++j)
      cw[static_cast<std::size_t>(j)] = -sigma * psi[static_cast<std::size_t>(j)];
    columns.push_back(std::move(cw));
    cost.push_back(0.0);
  }

  SimplexResult solve(const SimplexOptions& opt) {
    std::vector<double> b(static_cast<std::size_t>(d) + 1, 0.0);
    b.back() = 1.0;
    DenseSimplex solver(std::move(columns), std::move(b), std::move(cost), opt);
    return solver.solve();
  }
};

inline std::vector<double> trig_features(int n, double x) {
  std::vector<double> phi(static_cast<std::size_t>(2 * n - 1));
  phi[0] = 1.0;
  const double c1 = std::cos(x), s1 = std::sin(x);
  double cj = 1.0, sj = 0.0;
  for (int j = 1; j < n; ++j) {
    const double cn = cj * c1 - sj * s1;
    const double sn = sj * c1 + cj * s1;
    cj = cn;
    sj = sn;
    phi[static_cast<std::size_t>(j)] = cj;
    phi[static_cast<std::size_t>(n - 1 + j)] = sj;
  }
  return phi;
}

inline std::vector<double> trig_derivative_features(int n, double x) {
  std::vector<double> psi(static_cast<std::size_t>(2 * n - 1), 0.0);
  const double c1 = std::cos(x), s1 = std::sin(x);
  double cj = 1.0, sj = 0.0;
  for (int j = 1; j < n; ++j) {
    const double cn = cj * c1 - sj * s1;
    const double sn = sj * c1 + cj * s1;
    cj = cn;
    sj = sn;
    psi[static_cast<std::size_t>(j)] = -j * sj;
    psi[static_cast<std::size_t>(n - 1 + j)] = j * cj;
  }
  return psi;
}

inline TrigPolynomial trig_from_duals(int n, const std::vector<double>& y) {
  TrigPolynomial T(n);
  T.c0 = y[0];
  for (int j = 1; j < n; ++j) {
    T.a[static_cast<std::size_t>(j - 1)] = y[static_cast<std::size_t>(j)];
    T.b[static_cast<std::size_t>(j - 1)] = y[static_cast<std::size_t>(n - 1 + j)];
  }
  return T;
}

inline int count_alternations(const std::vector<double>& xs,
                              const std::vector<double>& errs, double value) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (std::abs(errs[i]) >= value - 1e-6 && errs[i] != 0.0)
      pts.emplace_back(xs[i], errs[i]);
  std::sort(pts.begin(), pts.end());
  int count = pts.empty() ? 0 : 1;
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i].second * pts[i - 1].second < 0) ++count;
  return count;
}

inline int count_active(const std::vector<double>& x) {
  int n = 0;
  for (double v : x)
    if (v > 1e-12) ++n;
  return n;
}

}  // namespace detail

/// Uniform fit grid on [-pi, pi), plus the cycle points and a fixed local
/// refinement between neighbouring cycle points (clustered cycles carry
/// the sign structure the uniform grid cannot see).
inline std::vector<double> minimax_grid(int uniform_count,
                                        const ExtremaCycle* cycle) {
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(uniform_count) + 64);
  for (int i = 0; i < uniform_count; ++i)
    xs.push_back(-kPi + kTwoPi * i / uniform_count);
  if (cycle) {
    std::vector<double> pts;
    for (double y : cycle->points) pts.push_back(wrap_angle(y));
    std::sort(pts.begin(), pts.end());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      xs.push_back(pts[i]);
      if (i + 1 < pts.size()) {
        const double gap = pts[i + 1] - pts[i];
        for (int q = 1; q <= 8; ++q) xs.push_back(pts[i] + gap * q / 9.0);
        xs.push_back(wrap_angle(pts[i] - 0.5 * gap));
        xs.push_back(wrap_angle(pts[i + 1] + 0.5 * gap));
      }
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(),
                       [](double a, double b) { return std::abs(a - b) < 1e-13; }),
           xs.end());
  return xs;
}

inline int default_trig_grid(int n) { return std::max(512, 32 * n); }

/// Best uniform approximation by trigonometric polynomials of degree < n
/// on a grid (no shape constraint).
inline MinimaxSolution best_unconstrained(const std::function<double(double)>& f,
                                          int n, int grid_count = 0,
                                          SimplexOptions opt = {}) {
  require(n >= 1, "best_unconstrained: n >= 1");
  const int M = grid_count > 0 ? grid_count : default_trig_grid(n);
  const auto xs = minimax_grid(M, nullptr);
  detail::DualFitProblem prob;
  prob.d = 2 * n - 1;
  std::vector<double> fv;
  fv.reserve(xs.size());
  for (double x : xs) {
    const double v = f(x);
    fv.push_back(v);
    prob.add_fit_point(detail::trig_features(n, x), v);
  }
  SimplexResult res = prob.solve(opt);
  MinimaxSolution sol;
  TrigPolynomial T = detail::trig_from_duals(n, res.duals);
  sol.lp_epsilon = -res.objective;
  sol.grid_count = static_cast<int>(xs.size());
  sol.solver_iterations = res.iterations;
  sol.active_constraint_count = detail::count_active(res.x);
  std::vector<double> errs(xs.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    errs[i] = fv[i] - T(xs[i]);
    worst = std::max(worst, std::abs(errs[i]));
  }
  sol.value = worst;
  sol.alternation_count = detail::count_alternations(xs, errs, worst);
  sol.polynomial = std::move(T);
  return sol;
}

/// Best comonotone approximation estimate: the uniform-fit LP with the
/// sign constraints sigma(x) T'(x) >= 0 imposed at grid points where
/// |Pi| is above a relative floor. The optimum is a lower bound for the
/// continuum quantity (fewer constraint points, grid max <= sup).
inline MinimaxSolution best_comonotone(const std::function<double(double)>& f,
                                       const ExtremaCycle& cycle, int n,
                                       int grid_count = 0,
                                       SimplexOptions opt = {}) {
  require(n >= 1, "best_comonotone: n >= 1");
  const int M = grid_count > 0 ? grid_count : default_trig_grid(n);
  const auto xs = minimax_grid(M, &cycle);
  double pi_max = 0.0;
  for (double x : xs) pi_max = std::max(pi_max, std::abs(pi_product(cycle, x)));
  const double pi_tol = 1e-8 * pi_max;
  detail::DualFitProblem prob;
  prob.d = 2 * n - 1;
  std::vector<double> fv;
  fv.reserve(xs.size());
  for (double x : xs) {
    const double v = f(x);
    fv.push_back(v);
    prob.add_fit_point(detail::trig_features(n, x), v);
  }
  std::vector<double> sign_xs;
  for (double x : xs) {
    const double piv = pi_product(cycle, x);
    if (std::abs(piv) > pi_tol) {
      prob.add_sign_point(detail::trig_derivative_features(n, x),
                          piv > 0 ? 1.0 : -1.0);
      sign_xs.push_back(x);
    }
  }
  SimplexResult res = prob.solve(opt);
  MinimaxSolution sol;
  sol.constrained = true;
  TrigPolynomial T = detail::trig_from_duals(n, res.duals);
  sol.lp_epsilon = -res.objective;
  sol.grid_count = static_cast<int>(xs.size());
  sol.solver_iterations = res.iterations;
  sol.active_constraint_count = detail::count_active(res.x);
  std::vector<double> errs(xs.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    errs[i] = fv[i] - T(xs[i]);
    worst = std::max(worst, std::abs(errs[i]));
  }
  sol.value = worst;
  sol.alternation_count = detail::count_alternations(xs, errs, worst);
  const TrigPolynomial dT = T.derivative();
  double worst_sign = 0.0;
  for (double x : sign_xs)
    worst_sign = std::min(worst_sign, dT(x) * pi_product(cycle, x));
  sol.worst_sign_violation = worst_sign;
  sol.polynomial = std::move(T);
  return sol;
}

namespace detail {

/// Chebyshev basis values T_0..T_{m-1} at u in [-1,1].
inline std::vector<double> chebyshev_features(int m, double u) {
  std::vector<double> t(static_cast<std::size_t>(m));
  t[0] = 1.0;
  if (m > 1) t[1] = u;
  for (int i = 2; i < m; ++i)
    t[static_cast<std::size_t>(i)] =
        2.0 * u * t[static_cast<std::size_t>(i - 1)] - t[static_cast<std::size_t>(i - 2)];
  return t;
}

/// Chebyshev-combination -> shifted monomials (x - mid).
inline AlgebraicPolynomial chebyshev_to_polynomial(const std::vector<double>& gamma,
                                                   double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  const int m = static_cast<int>(gamma.size());
  // Monomial coefficients (in u) of T_i by the recurrence.
  std::vector<std::vector<double>> T(static_cast<std::size_t>(std::max(m, 2)));
  T[0] = {1.0};
  T[1] = {0.0, 1.0};
  for (int i = 2; i < m; ++i) {
    std::vector<double> c(static_cast<std::size_t>(i) + 1, 0.0);
    for (std::size_t j = 0; j < T[static_cast<std::size_t>(i - 1)].size(); ++j)
      c[j + 1] += 2.0 * T[static_cast<std::size_t>(i - 1)][j];
    for (std::size_t j = 0; j < T[static_cast<std::size_t>(i - 2)].size(); ++j)
      c[j] -= T[static_cast<std::size_t>(i - 2)][j];
    T[static_cast<std::size_t>(i)] = std::move(c);
  }
  std::vector<double> mono(static_cast<std::size_t>(m), 0.0);
  for (int i = 0; i < m; ++i)
    for (std::size_t j = 0; j < T[static_cast<std::size_t>(i)].size(); ++j)
      mono[j] += gamma[static_cast<std::size_t>(i)] * T[static_cast<std::size_t>(i)][j];
  // u = (x - mid)/half.
  std::vector<double> coeffs(static_cast<std::size_t>(m), 0.0);
  double scale = 1.0;
  for (int j = 0; j < m; ++j) {
    coeffs[static_cast<std::size_t>(j)] = mono[static_cast<std::size_t>(j)] / scale;
    scale *= half;
  }
  return AlgebraicPolynomial(mid, std::move(coeffs));
}

}  // namespace detail

/// Best uniform algebraic approximation of degree < m on [a, b]
/// (the Whitney step), discretized on a Chebyshev-distributed grid.
inline MinimaxSolution best_algebraic(const std::function<double(double)>& f,
                                      double a, double b, int m,
                                      int grid_count = 0,
                                      SimplexOptions opt = {}) {
  require(a < b, "best_algebraic: need a < b");
  require(m >= 1, "best_algebraic: degree bound >= 1");
  int M = grid_count > 0 ? grid_count : std::max(257, 32 * m);
  if (M % 2 == 0) ++M;  // odd count keeps the interval midpoint on the grid
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  std::vector<double> xs(static_cast<std::size_t>(M));
  for (int i = 0; i < M; ++i)
    xs[static_cast<std::size_t>(i)] = mid - half * std::cos(kPi * i / (M - 1));
  detail::DualFitProblem prob;
  prob.d = m;
  std::vector<double> fv;
  fv.reserve(xs.size());
  for (double x : xs) {
    const double v = f(x);
    fv.push_back(v);
    prob.add_fit_point(detail::chebyshev_features(m, (x - mid) / half), v);
  }
  SimplexResult res = prob.solve(opt);
  MinimaxSolution sol;
  // res.duals has d+1 entries; the normalization multiplier is dropped.
  AlgebraicPolynomial P = detail::chebyshev_to_polynomial(
      std::vector<double>(res.duals.begin(), res.duals.begin() + m), a, b);
  sol.lp_epsilon = -res.objective;
  sol.grid_count = M;
  sol.solver_iterations = res.iterations;
  sol.active_constraint_count = detail::count_active(res.x);
  std::vector<double> errs(xs.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    errs[i] = fv[i] - P(xs[i]);
    worst = std::max(worst, std::abs(errs[i]));
  }
  sol.value = worst;
  sol.alternation_count = detail::count_alternations(xs, errs, worst);
  sol.polynomial = std::move(P);
  return sol;
}

}  // namespace cta
