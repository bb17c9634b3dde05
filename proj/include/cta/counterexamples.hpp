#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cta/common.hpp"
#include "cta/minimax.hpp"
#include "cta/periodic.hpp"
#include "cta/quadrature.hpp"
#include "cta/smoothness.hpp"
#include "cta/trig_poly.hpp"

namespace cta {

/// The three adversarial families, named by the theorem labels used in the
/// command-line interface. Each family attaches a cutoff-flattened
/// oscillator tau to a cycle whose interior points sit inside the flat
/// zone, so every comonotone polynomial is forced to park derivative zeros
/// there while the function itself stays macroscopic elsewhere.
enum class CounterexampleFamily { T2_2, T2_4, T2_7 };

inline const char* family_name(CounterexampleFamily f) {
  switch (f) {
    case CounterexampleFamily::T2_2: return "T2_2";
    case CounterexampleFamily::T2_4: return "T2_4";
    default: return "T2_7";
  }
}

inline CounterexampleFamily family_from_name(const std::string& name) {
  if (name == "T2_2") return CounterexampleFamily::T2_2;
  if (name == "T2_4") return CounterexampleFamily::T2_4;
  if (name == "T2_7") return CounterexampleFamily::T2_7;
  throw BadRegime("unknown counterexample family: " + name);
}

/// Divergence exponent of the family: the lower bound grows like
/// n^exponent relative to the Jackson majorant.
inline double family_exponent(CounterexampleFamily f) {
  switch (f) {
    case CounterexampleFamily::T2_2: return 0.5;
    case CounterexampleFamily::T2_4: return 1.0 / 3.0;
    default: return 1.0;
  }
}

inline int family_modulus_order(CounterexampleFamily f) {
  switch (f) {
    case CounterexampleFamily::T2_2: return 3;
    case CounterexampleFamily::T2_4: return 4;
    default: return 2;
  }
}

struct CounterexampleInstance {
  CounterexampleFamily family = CounterexampleFamily::T2_7;
  int n = 0;
  int s = 0;
  int r = 0;
  double b = 0.0;
  std::optional<double> delta;  // flat-derivative radius (T2_4 only)
  double c_star = 0.0;          // validity threshold for n
  bool below_threshold = false; // built with the desk-scale override
  PeriodicFunctionModel F;
  PeriodicFunctionModel tau;
  ExtremaCycle cycle{{0.0, kPi}};
  double comonotone_margin = 0.0;  // worst F' Pi violation at build time

  /// w_k(F^(r), t) for the family's modulus order.
  double modulus(double t, const GridSpec& spec = {}) const {
    const int k = family_modulus_order(family);
    auto fr = [this](double x) { return derivative(F, r, x); };
    return modulus_circle(fr, k, t, spec).value;
  }
};

namespace detail {

inline Jet tau_jet_T2_7(int r, double x) {
  if (r % 2 == 0) return -jet_powi(jet_sin(Jet::variable(x)), r + 1);
  return jet_powi(jet_sin(Jet::variable(x) * 0.5) * 2.0, r + 1);
}

inline Jet tau_jet_T2_2(int r, double x) {
  return jet_powi(jet_sin(Jet::variable(x)), r + 1);
}

inline Jet tau_jet_T2_4(int r, double b, double x) {
  const Jet u = Jet::variable(x);
  return (-jet_cos(u) + std::cos(b)) * jet_powi(jet_sin(u), r);
}

/// Largest radius c in (0, limit) with |tau^(order)| >= threshold(x) on
/// [-c, c], found by scanning then bisecting the first failure.
inline double largest_radius(const std::function<double(double)>& excess,
                             double limit) {
  const int scan = 512;
  double lo = 0.0, hi = limit;
  bool found_fail = false;
  for (int i = 1; i <= scan; ++i) {
    const double x = limit * i / scan;
    if (excess(x) < 0.0) {
      hi = x;
      lo = limit * (i - 1) / scan;
      found_fail = true;
      break;
    }
  }
  if (!found_fail) return limit;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) >= 0.0 ? lo : hi) = mid;
  }
  return lo;
}

inline std::vector<double> equispaced(double lo, double hi, int count) {
  std::vector<double> pts;
  if (count == 1) {
    pts.push_back(0.5 * (lo + hi));
    return pts;
  }
  for (int i = 0; i < count; ++i)
    pts.push_back(lo + (hi - lo) * i / (count - 1));
  return pts;
}

}  // namespace detail

/// Family with tau = -sin^(r+1) x (even r) or (2 sin(x/2))^(r+1) (odd r),
/// F = G(x/b) tau with b = n^-2: valid whenever 0 <= r < 2s - 2. F carries
/// at least r + 1 cycle points inside the flat zone [-b, b].
inline CounterexampleInstance build_T2_7(int n, int r, int s,
                                         bool allow_small_n = false) {
  if (!(r >= 0 && r < 2 * s - 2))
    throw BadRegime("build_T2_7: need 0 <= r < 2s - 2");
  // |tau^(r+1)| >= 1/2 near 0 pins the Bernstein chain's constant.
  auto tau_d = [r](double x) {
    return detail::tau_jet_T2_7(r, x).derivative(r + 1);
  };
  const double c4 = detail::largest_radius(
      [&](double x) { return std::abs(tau_d(x)) - 0.5; }, 1.0);
  const double c_star = std::max({std::sqrt(2.0 / c4), r + 1.0, 8.0});
  if (n <= c_star && !allow_small_n)
    throw NTooSmall("build_T2_7: n below the validity threshold " +
                    std::to_string(c_star));

  CounterexampleInstance inst;
  inst.family = CounterexampleFamily::T2_7;
  inst.n = n;
  inst.r = r;
  inst.s = s;
  inst.b = 1.0 / (static_cast<double>(n) * n);
  inst.c_star = c_star;
  inst.below_threshold = n <= c_star;
  const double b = inst.b;

  inst.tau = make_jet_model(
      "tau", [r](double x) { return detail::tau_jet_T2_7(r, wrap_angle(x)); },
      Jet::kOrder);
  auto F_jets = [r, b](double x) {
    const double u = wrap_angle(x);
    return bump_jet(Jet::variable(u / b, 1.0 / b)) * detail::tau_jet_T2_7(r, u);
  };
  inst.F = make_jet_model("F", F_jets, Jet::kOrder);
  inst.F.label = "T2_7(n=" + std::to_string(n) + ",r=" + std::to_string(r) +
                 ",s=" + std::to_string(s) + ")";

  std::vector<double> pts;
  if (r % 2 == 0) {
    pts.push_back(-kPi / 2);
    for (double y : detail::equispaced(-b, b, 2 * s - 2)) pts.push_back(y);
    pts.push_back(kPi / 2);
  } else {
    pts.push_back(-kPi);
    for (double y : detail::equispaced(-b, b, 2 * s - 1)) pts.push_back(y);
  }
  // Representatives must start inside (-pi, pi]; -pi shifts up a period.
  if (pts.front() <= -kPi)
    for (double& y : pts) y += kTwoPi;
  inst.cycle = ExtremaCycle(pts);

  auto dF = [&inst](double x) { return derivative(inst.F, 1, x); };
  const auto cert = certify_comonotone(dF, inst.cycle, 1024, 1e-9);
  inst.comonotone_margin = cert.worst_violation;
  return inst;
}

/// Family with tau = sin^(r+1) x, r = 2s - 2, F the antiderivative of the
/// cutoff-flattened tau with b = n^(-3/2); the cycle's interior points sit
/// in [b/2, b] inside the flat zone.
inline CounterexampleInstance build_T2_2(int n, int s,
                                         bool allow_small_n = false) {
  const int r = 2 * s - 2;
  auto tau_r = [r](double x) {
    return detail::tau_jet_T2_2(r, x).derivative(r);
  };
  // |tau^(r)(x)| >= |x|/2 near 0.
  const double c9 = detail::largest_radius(
      [&](double x) { return std::abs(tau_r(x)) - 0.5 * std::abs(x); }, 1.0);
  const double c_star =
      std::max({std::pow(2.0 / c9, 2.0 / 3.0), r + 1.0, 256.0});
  if (n <= c_star && !allow_small_n)
    throw NTooSmall("build_T2_2: n below the validity threshold " +
                    std::to_string(c_star));

  CounterexampleInstance inst;
  inst.family = CounterexampleFamily::T2_2;
  inst.n = n;
  inst.r = r;
  inst.s = s;
  inst.b = std::pow(n, -1.5);
  inst.c_star = c_star;
  inst.below_threshold = n <= c_star;
  const double b = inst.b;
  require(b < c9, "build_T2_2: scale parameter exceeds the derivative radius");

  inst.tau = make_jet_model(
      "tau", [r](double x) { return detail::tau_jet_T2_2(r, wrap_angle(x)); },
      Jet::kOrder);
  auto f_jets = [r, b](double x) {
    const double u = wrap_angle(x);
    return bump_jet(Jet::variable(u / b, 1.0 / b)) * detail::tau_jet_T2_2(r, u);
  };
  auto f_value = [r, b](double x) {
    const double u = wrap_angle(x);
    const double g = eval_bump(u / b);
    return g == 0.0 ? 0.0 : g * std::pow(std::sin(u), r + 1);
  };
  inst.F = make_antiderivative_model(
      "F", f_value, f_jets, std::min(r + 5, Jet::kOrder + 1), 1e-12,
      static_cast<int>(std::ceil(16.0 * kPi / b)));
  inst.F.label = "T2_2(n=" + std::to_string(n) + ",s=" + std::to_string(s) + ")";

  std::vector<double> pts{-kPi};
  for (double y : detail::equispaced(0.5 * b, b, 2 * s - 1)) pts.push_back(y);
  for (double& y : pts) y += kTwoPi;  // representatives start in (-pi, pi]
  inst.cycle = ExtremaCycle(pts);

  auto dF = [f_value](double x) { return f_value(x); };
  const auto cert = certify_comonotone(dF, inst.cycle, 1024, 1e-9);
  inst.comonotone_margin = cert.worst_violation;
  return inst;
}

/// Family with tau = (cos b - cos x) sin^r x, r = 2s - 1, b = n^(-4/3);
/// the interior cycle points live in (-delta, delta) where -tau^(r)
/// exceeds b^2/4.
inline CounterexampleInstance build_T2_4(int n, int s,
                                         bool allow_small_n = false) {
  const int r = 2 * s - 1;
  const double c_star = std::max(r + 1.0, 4096.0);
  if (n <= c_star && !allow_small_n)
    throw NTooSmall("build_T2_4: n below the validity threshold " +
                    std::to_string(c_star));

  CounterexampleInstance inst;
  inst.family = CounterexampleFamily::T2_4;
  inst.n = n;
  inst.r = r;
  inst.s = s;
  inst.b = std::pow(n, -4.0 / 3.0);
  inst.c_star = c_star;
  inst.below_threshold = n <= c_star;
  const double b = inst.b;

  auto tau_r = [r, b](double x) {
    return detail::tau_jet_T2_4(r, b, x).derivative(r);
  };
  const double delta = detail::largest_radius(
      [&](double x) { return -tau_r(x) - 0.25 * b * b; }, b);
  if (!(delta > 0.0))
    throw DeltaNotFound("build_T2_4: no radius with -tau^(r) > b^2/4");
  inst.delta = delta;

  inst.tau = make_jet_model(
      "tau",
      [r, b](double x) { return detail::tau_jet_T2_4(r, b, wrap_angle(x)); },
      Jet::kOrder);
  auto f_jets = [r, b](double x) {
    const double u = wrap_angle(x);
    return bump_jet(Jet::variable(u / b, 1.0 / b)) *
           detail::tau_jet_T2_4(r, b, u);
  };
  auto f_value = [r, b](double x) {
    const double u = wrap_angle(x);
    const double g = eval_bump(u / b);
    return g == 0.0 ? 0.0
                    : g * (std::cos(b) - std::cos(u)) * std::pow(std::sin(u), r);
  };
  inst.F = make_antiderivative_model(
      "F", f_value, f_jets, std::min(r + 5, Jet::kOrder + 1), 1e-12,
      static_cast<int>(std::ceil(16.0 * kPi / b)));
  inst.F.label = "T2_4(n=" + std::to_string(n) + ",s=" + std::to_string(s) + ")";

  std::vector<double> pts{-kPi};
  // Interior points strictly inside (-delta, delta).
  for (int i = 1; i <= 2 * s - 1; ++i)
    pts.push_back(-delta + 2.0 * delta * i / (2 * s));
  for (double& y : pts) y += kTwoPi;
  inst.cycle = ExtremaCycle(pts);

  auto dF = [f_value](double x) { return f_value(x); };
  const auto cert = certify_comonotone(dF, inst.cycle, 1024, 1e-9);
  inst.comonotone_margin = cert.worst_violation;
  return inst;
}

inline CounterexampleInstance build_counterexample(CounterexampleFamily family,
                                                   int n, int s, int r = 0,
                                                   bool allow_small_n = false) {
  switch (family) {
    case CounterexampleFamily::T2_2: return build_T2_2(n, s, allow_small_n);
    case CounterexampleFamily::T2_4: return build_T2_4(n, s, allow_small_n);
    default: return build_T2_7(n, r, s, allow_small_n);
  }
}

/// Proof-chain certificates evaluated on a built instance:
/// the closeness of F (or its derivative) to the uncut oscillator, the
/// periodic closure, and the comonotonicity margin.
struct ChainCertificates {
  double f_tau_gap = 0.0;        // ||f - tau|| or ||F - tau|| per family
  double f_tau_bound = 0.0;      // the (2b)^p majorant it must sit under
  double anti_gap = 0.0;         // ||F - T_int|| for the integrated families
  double anti_bound = 0.0;       // (2b)^(p+1) majorant
  double closure_defect = 0.0;   // |F(pi) - F(-pi)| (integrated families)
  double derivative_gap_ratio = 0.0;  // ||F^(r) - tau-side^(r)|| / b^q
  bool comonotone_ok = false;
};

inline ChainCertificates certify_chain(const CounterexampleInstance& inst,
                                       int grid = 8192) {
  ChainCertificates cert;
  const double b = inst.b;
  const auto& F = inst.F;
  const auto& tau = inst.tau;

  if (inst.family == CounterexampleFamily::T2_7) {
    // F = G tau directly: ||F - tau|| <= (2b)^(r+1), support in [-2b, 2b].
    cert.f_tau_bound = std::pow(2.0 * b, inst.r + 1);
    cert.f_tau_gap = grid_sup(
        [&](double x) { return F.f(x) - tau.f(x); }, -2.0 * b, 2.0 * b, grid);
    // ||F^(r) - tau^(r)|| <= c b; report the measured c.
    const double dgap = grid_sup(
        [&](double x) { return derivative(F, inst.r, x) - derivative(tau, inst.r, x); },
        -2.0 * b, 2.0 * b, grid);
    cert.derivative_gap_ratio = dgap / b;
  } else {
    const int p = (inst.family == CounterexampleFamily::T2_2) ? inst.r + 1
                                                              : inst.r + 2;
    // Integrand gap ||f - tau|| <= (2b)^p, supported on [-2b, 2b].
    cert.f_tau_bound = std::pow(2.0 * b, p);
    cert.f_tau_gap = grid_sup(
        [&](double x) { return derivative(F, 1, x) - tau.f(x); }, -2.0 * b,
        2.0 * b, grid);
    // Antiderivative gap ||F - int tau|| <= (2b)^(p+1); F - int tau is
    // constant outside [-2b, 2b], so sample there plus one tail point each.
    cert.anti_bound = std::pow(2.0 * b, p + 1);
    PeriodicAntiderivative tau_anti(tau.f, 1e-12);
    double worst = 0.0;
    for (int i = 0; i <= 4096; ++i) {
      const double x = -2.0 * b + 4.0 * b * i / 4096;
      worst = std::max(worst, std::abs(F.f(x) - tau_anti(x)));
    }
    worst = std::max(worst, std::abs(F.f(-3.0 * b) - tau_anti(-3.0 * b)));
    worst = std::max(worst, std::abs(F.f(3.0) - tau_anti(3.0)));
    cert.anti_gap = worst;
    cert.closure_defect = std::abs(F.f(kPi) - F.f(-kPi));
    // Order-r gap is f^(r-1) - tau^(r-1), bounded by c b^q with q = 2 or 3.
    if (inst.r >= 1) {
      const double q = (inst.family == CounterexampleFamily::T2_2) ? 2.0 : 3.0;
      const double dgap = grid_sup(
          [&](double x) {
            return derivative(F, inst.r, x) - derivative(tau, inst.r - 1, x);
          },
          -2.0 * b, 2.0 * b, grid);
      cert.derivative_gap_ratio = dgap / std::pow(b, q);
    }
  }
  cert.comonotone_ok = inst.comonotone_margin >= -1e-9;
  return cert;
}

struct GrowthRow {
  int n = 0;
  double estimate = 0.0;  // E lower bound from the constrained fit
  double omega = 0.0;     // w_k(F_n^(r), 1/n)
  double ratio = 0.0;     // n^r estimate / omega
};

struct GrowthReport {
  double exponent_fit = 0.0;
  double required = 0.0;
  bool passes = false;
  std::vector<GrowthRow> rows;
};

/// Least-squares slope of log ratio against log n; the family passes when
/// the fitted slope reaches half its theoretical divergence exponent.
inline GrowthReport certify_growth(CounterexampleFamily family,
                                   std::vector<GrowthRow> rows) {
  if (rows.size() < 3)
    throw InsufficientData("certify_growth: need at least three n values");
  GrowthReport rep;
  rep.rows = std::move(rows);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(rep.rows.size());
  for (const auto& row : rep.rows) {
    require(row.ratio > 0.0, "certify_growth: nonpositive ratio");
    const double x = std::log(static_cast<double>(row.n));
    const double y = std::log(row.ratio);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  rep.exponent_fit = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  rep.required = 0.5 * family_exponent(family);
  rep.passes = rep.exponent_fit >= rep.required;
  return rep;
}

struct ModulusChainReport {
  double measured = 0.0;     // w_k(F^(r), t)
  double smooth_term = 0.0;  // sup|tau-side^(r+k)| t^k
  double rough_term = 0.0;   // 2^k ||F^(r) - tau-side^(r)||
  double smooth_coeff = 0.0;
  double rough_coeff = 0.0;  // the same gap divided by b^q (recorded c)
  bool ok = false;
};

/// The subadditivity-plus-Taylor majorant for the family's modulus:
/// w_k(F^(r), t) <= sup|tau^(r+k)| t^k + 2^k ||F^(r) - tau^(r)||, with the
/// tau side shifted by one derivative for the integrated families.
inline ModulusChainReport modulus_chain(const CounterexampleInstance& inst,
                                        double t) {
  const int k = family_modulus_order(inst.family);
  ModulusChainReport rep;
  rep.measured = inst.modulus(t);
  const bool direct = inst.family == CounterexampleFamily::T2_7;
  if (!direct && inst.r < 1)
    throw BadRegime("modulus_chain: integrated family needs r >= 1");
  const int tau_order_high = direct ? inst.r + k : inst.r + k - 1;
  const int tau_order_match = direct ? inst.r : inst.r - 1;
  rep.smooth_coeff = grid_sup(
      [&](double x) { return derivative(inst.tau, tau_order_high, x); }, -kPi,
      kPi, 2048);
  rep.smooth_term = rep.smooth_coeff * std::pow(t, k);
  const double gap = grid_sup(
      [&](double x) {
        return derivative(inst.F, inst.r, x) -
               ((tau_order_match == 0) ? inst.tau.f(x)
                                       : derivative(inst.tau, tau_order_match, x));
      },
      -2.0 * inst.b, 2.0 * inst.b, 4096);
  rep.rough_term = std::pow(2.0, k) * gap;
  const double q = direct ? 1.0
                 : (inst.family == CounterexampleFamily::T2_2) ? 2.0 : 3.0;
  rep.rough_coeff = gap / std::pow(inst.b, q);
  rep.ok = rep.measured <= (rep.smooth_term + rep.rough_term) * 1.05 + 1e-12;
  return rep;
}

}  // namespace cta
