#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "cta/algebraic_poly.hpp"
#include "cta/common.hpp"
#include "cta/minimax.hpp"
#include "cta/periodic.hpp"
#include "cta/smoothness.hpp"
#include "cta/trig_poly.hpp"

namespace cta {

/// One connected component O_mu = (lo, hi) of the cell neighbourhood of
/// the cycle points, with the extrema it contains (positions in [-pi, pi)).
struct PartitionComponent {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> extrema;
};

/// Uniform partition x_j = j pi / n of [-pi, pi] with the components around
/// the cycle points. When a component would wrap across +-pi the whole
/// frame is rotated by a multiple of the cell width; `rotation` records the
/// shift (original x = rotated x + rotation).
struct Partition {
  int n = 0;
  double h = 0.0;
  double rotation = 0.0;
  std::vector<PartitionComponent> components;
  std::vector<std::pair<double, double>> outside_cells;
  std::vector<double> rotated_points;  // cycle representatives, parity kept
};

inline Partition build_partition(int n, const ExtremaCycle& cycle) {
  const int s = cycle.s;
  if (n <= 6 * s)
    throw TooFewCells("build_partition: need n > 6s, got n = " + std::to_string(n));
  const double h = kPi / n;
  const int cells = 2 * n;

  auto mark = [&](int q, std::vector<char>& covered) {
    std::fill(covered.begin(), covered.end(), 0);
    for (double y : cycle.points) {
      const double w = wrap_angle(y - q * h);
      int j = static_cast<int>(std::floor(w / h));  // x_j <= w < x_{j+1}
      if (j < -n) j = -n;
      if (j > n - 1) j = n - 1;
      for (int d = -1; d <= 1; ++d) {
        int c = j + d + n;
        c = ((c % cells) + cells) % cells;
        covered[static_cast<std::size_t>(c)] = 1;
      }
    }
  };

  std::vector<char> covered(static_cast<std::size_t>(cells), 0);
  int q = 0;
  for (; q < cells; ++q) {
    mark(q, covered);
    if (!(covered.front() && covered.back())) break;  // no run across +-pi
  }
  require(q < cells, "build_partition: no rotation avoids the seam");

  Partition part;
  part.n = n;
  part.h = h;
  part.rotation = q * h;

  std::vector<double> wrapped;
  for (double y : cycle.points) wrapped.push_back(wrap_angle(y - part.rotation));
  std::sort(wrapped.begin(), wrapped.end());
  part.rotated_points = cycle.points;
  for (double& y : part.rotated_points) y -= part.rotation;
  if (part.rotated_points.front() <= -kPi)
    for (double& y : part.rotated_points) y += kTwoPi;

  int c = 0;
  while (c < cells) {
    if (!covered[static_cast<std::size_t>(c)]) {
      part.outside_cells.emplace_back((c - n) * h, (c - n + 1) * h);
      ++c;
      continue;
    }
    int e = c;
    while (e < cells && covered[static_cast<std::size_t>(e)]) ++e;
    PartitionComponent comp;
    comp.lo = (c - n) * h;
    comp.hi = (e - n) * h;
    for (double w : wrapped)
      if (w >= comp.lo && w < comp.hi) comp.extrema.push_back(w);
    part.components.push_back(std::move(comp));
    c = e;
  }
  return part;
}

/// Continuous piecewise polynomial on [-pi, pi], possibly expressed in a
/// rotated frame (original x corresponds to local u = x - frame_shift).
struct PiecewisePolynomial {
  std::vector<double> breakpoints;  // pieces.size() + 1 entries
  std::vector<AlgebraicPolynomial> pieces;
  int degree_bound = 0;  // per-piece degree < degree_bound
  double frame_shift = 0.0;

  double eval_local(double u) const {
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), u);
    std::size_t i = static_cast<std::size_t>(it - breakpoints.begin());
    if (i == 0)
      i = 1;
    else if (i >= breakpoints.size())
      i = breakpoints.size() - 1;
    return pieces[i - 1](u);
  }

  double operator()(double x) const {
    double u = x - frame_shift;
    if (u < -kPi || u > kPi) u = wrap_angle(u);
    return eval_local(u);
  }

  double continuity_defect() const {
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < breakpoints.size(); ++i)
      worst = std::max(worst, std::abs(pieces[i - 1](breakpoints[i]) -
                                       pieces[i](breakpoints[i])));
    return worst;
  }
};

struct PieceOptions {
  GridSpec modulus_spec{24, 192};
  int grid = 384;       // validation / calibration grid on the window
  double sign_tol = 1e-9;
};

struct PieceReport {
  AlgebraicPolynomial piece;
  double sup_error = 0.0;
  double omega = 0.0;
  double error_constant = 0.0;  // sup_error / (span^r omega); 0 when 0/0
  double sign_margin = 0.0;     // min of the lemma's sign product, 10x grid
  double calibration = 0.0;     // measured correction coefficient
};

namespace detail {

inline double window_scale(const std::function<double(double)>& g, double a,
                           double b, int grid) {
  return std::max(1.0, grid_sup(g, a, b, grid));
}

inline double ratio_or_zero(double num, double denom) {
  if (denom > 0.0) return num / denom;
  return (num <= 1e-12) ? 0.0 : std::numeric_limits<double>::infinity();
}

}  // namespace detail

/// Monotone interpolating piece: for f with sigma f' >= 0 on [a, b]
/// (sigma = -1 handles the nonincreasing case), a polynomial of degree
/// < r + k matching f at both endpoints whose derivative keeps the sign.
/// Built from the best algebraic approximation p of sigma f' lifted by the
/// measured defect, integrated, then renormalized onto the endpoints.
inline PieceReport monotone_piece(const PeriodicFunctionModel& f, double a,
                                  double b, int r, int k, bool nonincreasing = false,
                                  const PieceOptions& opt = {}) {
  require(r >= 1 && k >= 1, "monotone_piece: need r >= 1, k >= 1");
  require(a < b, "monotone_piece: need a < b");
  const double sigma = nonincreasing ? -1.0 : 1.0;
  auto fp = [&](double x) { return sigma * derivative(f, 1, x); };
  const double deriv_scale = detail::window_scale(fp, a, b, opt.grid);
  for (int i = 0; i <= opt.grid; ++i) {
    const double x = a + (b - a) * i / opt.grid;
    if (fp(x) < -opt.sign_tol * deriv_scale)
      throw NotMonotone("monotone_piece: derivative changes sign on the window");
  }
  auto fr = [&](double x) { return derivative(f, r, x); };
  const auto omega = modulus_interval(fr, k, b - a, a, b, opt.modulus_spec);

  PieceReport rep;
  rep.omega = omega.value;
  const double fa = f(a), fb = f(b);
  const double span_scale = std::max({1.0, std::abs(fa), std::abs(fb)});

  const int approx_degree = r + k - 1;
  const auto best = best_algebraic(fp, a, b, approx_degree);
  const double lift = 1.05 * best.value;
  AlgebraicPolynomial slope = best.algebraic();
  slope += lift;
  const AlgebraicPolynomial accum = slope.antiderivative(a);
  const double span = accum(b);

  if (std::abs(span) <= 1e-13 * span_scale) {
    rep.piece = AlgebraicPolynomial::constant(fa);
  } else {
    // P = f(a) + (f(b)-f(a)) accum/span; the sigma frames cancel and the
    // direction rides on the sign of f(b)-f(a), matched to slope >= 0.
    AlgebraicPolynomial scaled = accum;
    scaled *= (fb - fa) / span;
    scaled += fa;
    rep.piece = scaled;
  }
  rep.calibration =
      (rep.omega > 0.0) ? lift / (std::pow(b - a, r - 1) * rep.omega) : 0.0;

  const int fine = 10 * opt.grid;
  double sup = 0.0, margin = std::numeric_limits<double>::infinity();
  const auto dpiece = rep.piece.derivative();
  for (int i = 0; i <= fine; ++i) {
    const double x = a + (b - a) * i / fine;
    sup = std::max(sup, std::abs(f(x) - rep.piece(x)));
    margin = std::min(margin, sigma * dpiece(x));
  }
  rep.sup_error = sup;
  rep.sign_margin = margin;
  rep.error_constant =
      detail::ratio_or_zero(sup, std::pow(b - a, r) * rep.omega);
  return rep;
}

namespace detail {

inline void check_window_geometry(double a, double b, double h, int nu,
                                  const std::vector<double>& knots) {
  const double slack = 1e-9 * h;
  if (!(3.0 * h <= b - a + slack && b - a <= 3.0 * nu * h + slack))
    throw HypothesisViolation("window width outside [3h, 3 nu h]");
  if (knots.empty()) throw HypothesisViolation("no interior extrema");
  for (std::size_t i = 1; i < knots.size(); ++i)
    if (knots[i] <= knots[i - 1])
      throw HypothesisViolation("extrema must increase");
  if (knots.front() < a + h - slack || knots.back() > b - h + slack)
    throw HypothesisViolation("extrema must lie in [a+h, b-h]");
}

inline void check_sign_hypothesis(const std::function<double(double)>& fp,
                                  const AlgebraicPolynomial& pattern, double a,
                                  double b, int grid, double tol) {
  double scale = 1.0;
  for (int i = 0; i <= grid; ++i) {
    const double x = a + (b - a) * i / grid;
    scale = std::max(scale, std::abs(fp(x)));
  }
  for (int i = 0; i <= grid; ++i) {
    const double x = a + (b - a) * i / grid;
    if (fp(x) * pattern(x) < -tol * scale)
      throw HypothesisViolation("derivative sign does not follow the extremum pattern");
  }
}

}  // namespace detail

/// Comonotone piece for a window holding exactly nu = r extrema: the
/// derivative is interpolated at {a, t_1..t_r, b}; since it vanishes at the
/// t_i, the integral keeps the sign pattern without any correction.
/// Degree <= r + 2.
inline PieceReport comonotone_piece_full(const PeriodicFunctionModel& f,
                                         double a, double b,
                                         const std::vector<double>& knots,
                                         int r, double h, bool mirrored = false,
                                         const PieceOptions& opt = {}) {
  require(r >= 1, "comonotone_piece_full: need r >= 1");
  if (static_cast<int>(knots.size()) != r)
    throw HypothesisViolation("comonotone_piece_full: need exactly r extrema");
  detail::check_window_geometry(a, b, h, r, knots);
  const double sigma = mirrored ? -1.0 : 1.0;
  const AlgebraicPolynomial pattern = polynomial_from_roots(knots, 0.5 * (a + b));
  auto fp = [&](double x) { return sigma * derivative(f, 1, x); };
  detail::check_sign_hypothesis(fp, pattern, a, b, opt.grid, opt.sign_tol);

  std::vector<double> nodes;
  nodes.push_back(a);
  nodes.insert(nodes.end(), knots.begin(), knots.end());
  nodes.push_back(b);
  std::vector<double> values;
  for (double x : nodes) values.push_back(fp(x));
  const AlgebraicPolynomial L = interpolate(nodes, values, 0.5 * (a + b));

  PieceReport rep;
  auto fr = [&](double x) { return derivative(f, r, x); };
  rep.omega = modulus_interval(fr, 3, h, a, b, opt.modulus_spec).value;
  AlgebraicPolynomial p = L.antiderivative(a);
  p *= sigma;
  p += f(a);
  rep.piece = p;

  const int fine = 10 * opt.grid;
  double sup = 0.0, margin = std::numeric_limits<double>::infinity();
  const auto dp = rep.piece.derivative();
  for (int i = 0; i <= fine; ++i) {
    const double x = a + (b - a) * i / fine;
    sup = std::max(sup, std::abs(f(x) - rep.piece(x)));
    margin = std::min(margin, sigma * dp(x) * pattern(x));
  }
  rep.sup_error = sup;
  rep.sign_margin = margin;
  rep.error_constant = detail::ratio_or_zero(sup, std::pow(h, r) * rep.omega);
  return rep;
}

/// Comonotone piece for a window holding nu <= r - 1 extrema. The
/// derivative interpolant (with stacked nodes near b) is corrected by
/// c0 h^(r-1-nu) omega pi_nu, where c0 is calibrated from the measured
/// interpolation defect so the squared pattern term dominates pointwise.
/// Degree < r + k.
inline PieceReport comonotone_piece_partial(const PeriodicFunctionModel& f,
                                            double a, double b,
                                            const std::vector<double>& knots,
                                            int r, int k, double h,
                                            bool mirrored = false,
                                            const PieceOptions& opt = {}) {
  require(k >= 2, "comonotone_piece_partial: need k >= 2");
  if (r < 2) throw HypothesisViolation("comonotone_piece_partial: need r >= 2");
  const int nu = static_cast<int>(knots.size());
  if (nu < 1 || nu > r - 1)
    throw HypothesisViolation("comonotone_piece_partial: need 1 <= nu <= r-1");
  detail::check_window_geometry(a, b, h, nu, knots);
  const double sigma = mirrored ? -1.0 : 1.0;
  const double center = 0.5 * (a + b);
  const AlgebraicPolynomial pattern = polynomial_from_roots(knots, center);
  auto fp = [&](double x) { return sigma * derivative(f, 1, x); };
  detail::check_sign_hypothesis(fp, pattern, a, b, opt.grid, opt.sign_tol);

  PieceReport rep;
  auto fr = [&](double x) { return derivative(f, r, x); };
  rep.omega = modulus_interval(fr, k, h, a, b, opt.modulus_spec).value;

  std::vector<double> nodes;
  nodes.push_back(a);
  nodes.insert(nodes.end(), knots.begin(), knots.end());
  const int stacked = r + k - nu - 2;
  for (int i = 1; i <= stacked; ++i)
    nodes.push_back(b - h + h * i / stacked);
  std::vector<double> values;
  for (double x : nodes) values.push_back(fp(x));
  const AlgebraicPolynomial L = interpolate(nodes, values, center);

  // Calibrate c0 so that |f' - L| <= c0 h^(r-1-nu) omega |pi_nu| on the grid.
  const double power = std::pow(h, r - 1 - nu);
  double pattern_sup = 0.0;
  for (int i = 0; i <= opt.grid; ++i)
    pattern_sup = std::max(pattern_sup, std::abs(pattern(a + (b - a) * i / opt.grid)));
  double c0 = 0.0;
  if (rep.omega > 0.0) {
    for (int i = 0; i <= opt.grid; ++i) {
      const double x = a + (b - a) * i / opt.grid;
      const double pat = std::abs(pattern(x));
      if (pat < 1e-8 * pattern_sup) continue;
      c0 = std::max(c0, std::abs(fp(x) - L(x)) / (power * rep.omega * pat));
    }
    c0 *= 1.05;
  }
  rep.calibration = c0;

  AlgebraicPolynomial corrected = L;
  {
    AlgebraicPolynomial corr = pattern;
    corr *= c0 * power * rep.omega;
    corrected = corrected + corr;
  }
  AlgebraicPolynomial p = corrected.antiderivative(a);
  p *= sigma;
  p += f(a);
  rep.piece = p;

  const int fine = 10 * opt.grid;
  double sup = 0.0, margin = std::numeric_limits<double>::infinity();
  const auto dp = rep.piece.derivative();
  for (int i = 0; i <= fine; ++i) {
    const double x = a + (b - a) * i / fine;
    sup = std::max(sup, std::abs(f(x) - rep.piece(x)));
    margin = std::min(margin, sigma * dp(x) * pattern(x));
  }
  rep.sup_error = sup;
  rep.sign_margin = margin;
  rep.error_constant = detail::ratio_or_zero(sup, std::pow(h, r) * rep.omega);
  return rep;
}

struct WindowBoundReport {
  double lhs = 0.0;
  double rhs_without_c = 0.0;
  double ratio = 0.0;
};

/// Windows with r+1 extrema admit only the constant bound
/// ||f - f(a)|| <= c h^r w_2(f^(r), h); this probes the empirical constant.
/// For r = 0 the function merely changes monotonicity once, at the knot.
inline WindowBoundReport probe_window_bound(const PeriodicFunctionModel& f,
                                            double a, double b,
                                            const std::vector<double>& knots,
                                            int r, double h, bool mirrored = false,
                                            const PieceOptions& opt = {}) {
  require(r >= 0, "probe_window_bound: need r >= 0");
  if (static_cast<int>(knots.size()) != r + 1)
    throw HypothesisViolation("probe_window_bound: need r + 1 extrema");
  detail::check_window_geometry(a, b, h, r + 1, knots);
  const double sigma = mirrored ? -1.0 : 1.0;
  const AlgebraicPolynomial pattern = polynomial_from_roots(knots, 0.5 * (a + b));
  auto fp = [&](double x) { return sigma * derivative(f, 1, x); };
  detail::check_sign_hypothesis(fp, pattern, a, b, opt.grid, opt.sign_tol);

  WindowBoundReport rep;
  const double fa = f(a);
  rep.lhs = grid_sup([&](double x) { return f(x) - fa; }, a, b, 10 * opt.grid);
  auto fr = [&](double x) { return derivative(f, r, x); };
  rep.rhs_without_c =
      std::pow(h, r) * modulus_interval(fr, 2, h, a, b, opt.modulus_spec).value;
  rep.ratio = detail::ratio_or_zero(rep.lhs, rep.rhs_without_c);
  return rep;
}

struct ClusterBoundReport {
  double norm_last = 0.0;   // ||f - f(y_2s)||
  double norm_first = 0.0;  // ||f - f(y_1)||
  double ratio_odd = 0.0;   // vs h^(2s-1) w_{k+1}(f^(2s-1), h)
  double ratio_even = 0.0;  // vs h^(2s)   w_k(f^(2s), h)
  double ratio_first = 0.0; // vs h^(2s-2) w_2(f^(2s-2), h)
};

/// When the whole cycle clusters within (6s-2)h, constants approximate f to
/// the full Jackson order; this reports the empirical constants of the
/// three bounds.
inline ClusterBoundReport probe_cluster_bound(const PeriodicFunctionModel& f,
                                              const ExtremaCycle& cycle,
                                              double h, int k,
                                              const GridSpec& spec = {48, 1024}) {
  const int s = cycle.s;
  const double span = cycle.points.back() - cycle.points.front();
  if (span > (6.0 * s - 2.0) * h + 1e-12)
    throw HypothesisViolation("probe_cluster_bound: cycle span exceeds (6s-2)h");
  ClusterBoundReport rep;
  const double f_last = f(cycle.points.back());
  const double f_first = f(cycle.points.front());
  rep.norm_last =
      grid_sup([&](double x) { return f(x) - f_last; }, -kPi, kPi, 8192);
  rep.norm_first =
      grid_sup([&](double x) { return f(x) - f_first; }, -kPi, kPi, 8192);

  auto deriv_evaluator = [&f](int order) {
    return [&f, order](double x) { return derivative(f, order, x); };
  };
  rep.ratio_odd = detail::ratio_or_zero(
      rep.norm_last, std::pow(h, 2 * s - 1) *
                         modulus_circle(deriv_evaluator(2 * s - 1), k + 1, h, spec).value);
  if (f.max_analytic_order + kFiniteDifferenceBudget >= 2 * s)
    rep.ratio_even = detail::ratio_or_zero(
        rep.norm_last,
        std::pow(h, 2 * s) * modulus_circle(deriv_evaluator(2 * s), k, h, spec).value);
  rep.ratio_first = detail::ratio_or_zero(
      rep.norm_first,
      std::pow(h, 2 * s - 2) *
          modulus_circle(deriv_evaluator(2 * s - 2), 2, h, spec).value);
  return rep;
}

struct StitchOptions {
  PieceOptions piece;
  GridSpec ratio_modulus{};  // modulus grids for the reported global ratio
  int error_grid = 4096;
};

struct StitchResult {
  PiecewisePolynomial spline;
  Partition partition;
  double sup_error = 0.0;
  double omega = 0.0;
  double ratio = 0.0;        // n^r ||f - S|| / w_k(f^(r), 1/n)
  double sign_margin = 0.0;  // min of S' Pi over piece interiors
  bool constant_path = false;
};

/// Builds the comonotone piecewise polynomial S for f on [-pi, pi]:
/// comonotone local pieces on the components, endpoint-interpolating
/// monotone pieces on the outside cells (linear for r = 0), stitched into
/// a continuous spline by accumulating the integral left to right.
/// Supported regimes: (r = 2s-2, k = 2), (r = 2s-1, k in {2,3}),
/// (r = 2s, k >= 3).
inline StitchResult stitch_spline(const PeriodicFunctionModel& f,
                                  const ExtremaCycle& cycle, int n, int r,
                                  int k, const StitchOptions& opt = {}) {
  const int s = cycle.s;
  const bool regime_a = (r == 2 * s - 2 && k == 2);
  const bool regime_b = (r == 2 * s - 1 && (k == 2 || k == 3));
  const bool regime_c = (r == 2 * s && k >= 3);
  if (!(regime_a || regime_b || regime_c))
    throw RegimeUnsupported("stitch_spline: (r, k) outside the constructive regimes");

  StitchResult out;
  out.partition = build_partition(n, cycle);
  const Partition& part = out.partition;
  const double rho = part.rotation;

  // Work in the rotated frame: g(u) = f(u + rho).
  PeriodicFunctionModel g;
  g.label = f.label + (rho != 0.0 ? "(rotated)" : "");
  g.f = [&f, rho](double u) { return f.f(u + rho); };
  for (std::size_t j = 0; j < f.analytic_derivatives.size(); ++j) {
    auto base = f.analytic_derivatives[j];
    g.analytic_derivatives.push_back([base, rho](double u) { return base(u + rho); });
  }
  g.max_analytic_order = f.max_analytic_order;
  const ExtremaCycle rotated(part.rotated_points);

  PiecewisePolynomial S;
  S.degree_bound = r + k;
  S.frame_shift = rho;

  if (part.components.size() <= 1) {
    // The whole cycle fits one window: a constant does the job.
    out.constant_path = true;
    S.breakpoints = {-kPi, kPi};
    S.pieces = {AlgebraicPolynomial::constant(f.f(0.0))};
    S.degree_bound = std::max(S.degree_bound, 1);
  } else {
    struct Segment {
      double lo, hi;
      AlgebraicPolynomial poly;
      bool component;
      double sign_margin;
    };
    std::vector<Segment> segs;
    for (const auto& comp : part.components) {
      const int nu = static_cast<int>(comp.extrema.size());
      // Orientation: sign of Pi relative to the local extremum pattern,
      // probed just left of the first extremum.
      const double probe = 0.5 * (comp.lo + comp.extrema.front());
      double pat = 1.0;
      for (double t : comp.extrema) pat *= probe - t;
      const double ratio_sign = pi_product(rotated, probe) / pat;
      const bool mirrored = ratio_sign < 0.0;
      PieceReport rep;
      if (nu == r + 1 && r == 2 * s - 2) {
        rep.piece = AlgebraicPolynomial::constant(g.f(comp.lo));
        rep.sign_margin = 0.0;
      } else if (nu == r && r >= 1) {
        rep = comonotone_piece_full(g, comp.lo, comp.hi, comp.extrema, r,
                                    part.h, mirrored, opt.piece);
      } else if (nu <= r - 1 && r >= 2) {
        rep = comonotone_piece_partial(g, comp.lo, comp.hi, comp.extrema, r, k,
                                       part.h, mirrored, opt.piece);
      } else {
        throw RegimeUnsupported("stitch_spline: unexpected extremum count " +
                                std::to_string(nu) + " for r = " + std::to_string(r));
      }
      segs.push_back({comp.lo, comp.hi, rep.piece, true, rep.sign_margin});
    }
    for (const auto& cell : part.outside_cells) {
      const double mid = 0.5 * (cell.first + cell.second);
      const bool nonincreasing = pi_product(rotated, mid) < 0.0;
      AlgebraicPolynomial piece;
      double margin = 0.0;
      if (r >= 1) {
        auto rep = monotone_piece(g, cell.first, cell.second, r, k,
                                  nonincreasing, opt.piece);
        piece = rep.piece;
        margin = rep.sign_margin;
      } else {
        piece = interpolate({cell.first, cell.second},
                            {g.f(cell.first), g.f(cell.second)}, mid);
      }
      segs.push_back({cell.first, cell.second, piece, false, margin});
    }
    std::sort(segs.begin(), segs.end(),
              [](const Segment& x, const Segment& y) { return x.lo < y.lo; });

    // Integral stitching: shift each piece so S is continuous, anchored at
    // S(-pi) = g(-pi).
    double level = g.f(-kPi);
    S.breakpoints.push_back(segs.front().lo);
    for (auto& seg : segs) {
      seg.poly += level - seg.poly(seg.lo);
      level = seg.poly(seg.hi);
      S.breakpoints.push_back(seg.hi);
      S.pieces.push_back(seg.poly);
    }
  }

  // Global comonotonicity margin: min of S' Pi over piece interiors.
  {
    double worst = 0.0;
    for (std::size_t p = 0; p < S.pieces.size(); ++p) {
      const auto dp = S.pieces[p].derivative();
      const double lo = S.breakpoints[p], hi = S.breakpoints[p + 1];
      for (int i = 1; i < 200; ++i) {
        const double u = lo + (hi - lo) * i / 200;
        worst = std::min(worst, dp(u) * pi_product(rotated, u));
      }
    }
    out.sign_margin = worst;
  }

  out.spline = std::move(S);

  double sup = 0.0;
  for (int i = 0; i <= opt.error_grid; ++i) {
    const double x = -kPi + kTwoPi * i / opt.error_grid;
    sup = std::max(sup, std::abs(f.f(x) - out.spline(x)));
  }
  out.sup_error = sup;
  auto fr = [&](double x) { return derivative(f, r, x); };
  out.omega = modulus_circle(fr, k, 1.0 / n, opt.ratio_modulus).value;
  out.ratio = detail::ratio_or_zero(std::pow(n, r) * sup, out.omega);
  return out;
}

}  // namespace cta
