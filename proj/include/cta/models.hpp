#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cta/common.hpp"
#include "cta/periodic.hpp"
#include "cta/quadrature.hpp"
#include "cta/trig_poly.hpp"

namespace cta {

namespace detail {

inline Jet pi_product_jet(const std::vector<double>& points, double x) {
  Jet p = Jet::constant(1.0);
  const Jet jx = Jet::variable(x);
  for (double y : points) p = p * jet_sin((jx - y) * 0.5);
  return p;
}

}  // namespace detail

/// Comonotone test model with prescribed finite smoothness:
///   f(x) = int_0^x Pi(t) w(t) exp(-lambda Pi(t)) dt,
///   w(t) = 1 + amp * ((1 - cos(t - kink_pos))/2)^((max(r-1,0) + beta)/2).
/// The exponential tilt lambda is solved so the integrand has zero mean
/// (f periodic); w > 0 keeps f' Pi = Pi^2 w e^(-lambda Pi) >= 0, so f lies
/// in the comonotone class of the cycle by construction. The |sin|^gamma
/// factor puts a genuine C^(r-1+beta) kink into f', so both the modulus
/// w_k(f^(r), 1/n) and the best-approximation errors decay at the matched
/// polynomial rate n^(-beta) instead of collapsing spectrally.
struct CorpusModel {
  PeriodicFunctionModel model;
  ExtremaCycle cycle;
  int r = 0;
  double lambda = 0.0;
};

inline CorpusModel make_corpus_model(const ExtremaCycle& cycle, int r,
                                     double beta = 0.5, double kink_pos = 2.9,
                                     double kink_amp = 1.0) {
  require(r >= 0, "make_corpus_model: r >= 0");
  const double gamma = std::max(r - 1, 0) + beta;
  const auto points = std::make_shared<std::vector<double>>(cycle.points);

  auto weight_jet = [kink_pos, kink_amp, gamma](double x) {
    // |sin((x - pos)/2)|^gamma as (sin^2)^(gamma/2); the sin^2 form avoids
    // the 1 - cos cancellation that would drown the quadrature in noise.
    const Jet s = jet_sin((Jet::variable(x) - kink_pos) * 0.5);
    return jet_pow(s * s, 0.5 * gamma) * kink_amp + 1.0;
  };
  auto weight_value = [kink_pos, kink_amp, gamma](double x) {
    const double s = std::sin(0.5 * (x - kink_pos));
    return 1.0 + kink_amp * std::pow(s * s, 0.5 * gamma);
  };
  auto integrand_raw = [points, weight_jet](double x) {
    return detail::pi_product_jet(*points, x) * weight_jet(x);
  };

  // Zero-mean tilt: mean(lambda) = int Pi w e^(-lambda Pi) is strictly
  // decreasing; bracket and bisect. Trapezoid on the periodic integrand
  // converges spectrally away from the kink and fast enough at it.
  const int mq = 4096;
  std::vector<double> piv_tab(mq), w_tab(mq);
  for (int i = 0; i < mq; ++i) {
    const double x = -kPi + kTwoPi * i / mq;
    piv_tab[static_cast<std::size_t>(i)] = pi_product(cycle, x);
    w_tab[static_cast<std::size_t>(i)] = weight_value(x);
  }
  auto mean = [&](double lambda) {
    double s = 0.0;
    for (int i = 0; i < mq; ++i)
      s += piv_tab[static_cast<std::size_t>(i)] * w_tab[static_cast<std::size_t>(i)] *
           std::exp(-lambda * piv_tab[static_cast<std::size_t>(i)]);
    return s * (kTwoPi / mq);
  };
  double lo = -1.0, hi = 1.0;
  while (mean(lo) < 0.0 && lo > -64.0) lo *= 2.0;
  while (mean(hi) > 0.0 && hi < 64.0) hi *= 2.0;
  // Strongly lopsided sign products (clustered cycles) would need extreme
  // tilts and degenerate integrands; those cycles get the bump-based
  // constructor instead.
  require(mean(lo) >= 0.0 && mean(hi) <= 0.0,
          "make_corpus_model: cycle too lopsided for the exponential tilt; "
          "use make_clustered_model");
  for (int it = 0; it < 60 && hi - lo > 1e-6; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mean(mid) > 0.0 ? lo : hi) = mid;
  }
  // The trapezoid mean saturates at the kink's smoothness; polish the root
  // with Newton on adaptively integrated means so the antiderivative is
  // periodic to full precision.
  double lambda = 0.5 * (lo + hi);
  auto exact_mean = [&](double lam) {
    return integrate_adaptive(
        [&](double x) {
          const double piv = pi_product(cycle, x);
          return piv * weight_value(x) * std::exp(-lam * piv);
        },
        -kPi, kPi, 1e-13);
  };
  for (int it = 0; it < 8; ++it) {
    const double value = exact_mean(lambda);
    if (std::abs(value) < 1e-13) break;
    const double slope = -integrate_adaptive(
        [&](double x) {
          const double piv = pi_product(cycle, x);
          return piv * piv * weight_value(x) * std::exp(-lambda * piv);
        },
        -kPi, kPi, 1e-12);
    lambda -= value / slope;
  }

  auto integrand_jets = [integrand_raw, points, lambda](double x) {
    const Jet piv = detail::pi_product_jet(*points, x);
    return integrand_raw(x) * jet_exp(piv * (-lambda));
  };
  auto integrand_value = [points, kink_pos, kink_amp, gamma, lambda](double x) {
    double piv = 1.0;
    for (double y : *points) piv *= std::sin(0.5 * (x - y));
    const double s = std::sin(0.5 * (x - kink_pos));
    const double w = 1.0 + kink_amp * std::pow(s * s, 0.5 * gamma);
    return piv * w * std::exp(-lambda * piv);
  };

  CorpusModel out{make_antiderivative_model("corpus", integrand_value,
                                            integrand_jets, std::max(r, 1)),
                  cycle, r, lambda};
  out.model.label = "corpus(s=" + std::to_string(cycle.s) +
                    ",r=" + std::to_string(r) + ")";
  return out;
}

/// Comonotone model for a tightly clustered pair {y1, y2} (s = 1): the
/// derivative is Pi times a nonnegative smooth weight assembled from the
/// cutoff, with one coefficient balancing the mean exactly:
///   f' = Pi (c1 G1 + c2 G2),
/// G1 vanishing on the cluster window and 1 away from it, G2 supported
/// strictly inside (y1, y2). Such f climbs slowly around the circle and
/// drops across the cluster, which is the only shape the class admits.
inline CorpusModel make_clustered_model(double y1, double y2) {
  require(y2 > y1 && y2 - y1 < 0.5, "make_clustered_model: need a tight pair");
  // The antiderivative table seeds 64 cells; narrower supports than this
  // could slip between quadrature nodes.
  require(y2 - y1 >= 0.02, "make_clustered_model: pair too tight to resolve");
  ExtremaCycle cycle({y1, y2});
  const double mid = 0.5 * (y1 + y2), half = 0.5 * (y2 - y1);
  const auto pts = std::make_shared<std::vector<double>>(cycle.points);

  auto g1_jet = [mid, half](double x) {
    return bump_jet(Jet::variable(wrap_angle(x - mid) / half, 1.0 / half));
  };
  auto g2_jet = [mid, half](double x) {
    return -bump_jet(Jet::variable(wrap_angle(x - mid) / (0.5 * half),
                                   1.0 / (0.5 * half))) +
           1.0;
  };
  auto pi_jet = [pts](double x) { return detail::pi_product_jet(*pts, x); };
  auto pi_value = [pts](double x) {
    double p = 1.0;
    for (double y : *pts) p *= std::sin(0.5 * (x - y));
    return p;
  };
  auto g1_value = [mid, half](double x) {
    return eval_bump(wrap_angle(x - mid) / half);
  };
  auto g2_value = [mid, half](double x) {
    return 1.0 - eval_bump(wrap_angle(x - mid) / (0.5 * half));
  };

  // Integrate segment-wise: the supports are narrow, and a top-level panel
  // over the whole period would never sample them.
  auto mass_of = [&](const std::function<double(double)>& g) {
    const double edges[] = {-kPi, mid - 2.0 * half, mid - half, mid,
                            mid + half, mid + 2.0 * half, kPi};
    double total = 0.0;
    for (int i = 0; i + 1 < 7; ++i)
      total += integrate_adaptive(g, edges[i], edges[i + 1], 2e-14);
    return total;
  };
  const double m1 =
      mass_of([&](double x) { return pi_value(x) * g1_value(x); });
  const double m2 =
      mass_of([&](double x) { return pi_value(x) * g2_value(x); });
  require(m1 > 0.0 && m2 < 0.0, "make_clustered_model: unexpected sign masses");
  const double c1 = 1.0, c2 = -m1 / m2;

  auto jets = [pi_jet, g1_jet, g2_jet, c1, c2](double x) {
    return pi_jet(x) * (g1_jet(x) * c1 + g2_jet(x) * c2);
  };
  auto value = [pi_value, g1_value, g2_value, c1, c2](double x) {
    return pi_value(x) * (c1 * g1_value(x) + c2 * g2_value(x));
  };
  CorpusModel out{make_antiderivative_model("clustered", value, jets, 6), cycle,
                  6, 0.0};
  out.model.label = "clustered-pair";
  return out;
}

/// Canonical well-separated cycles used by the experiment corpus.
inline ExtremaCycle default_cycle(int s) {
  switch (s) {
    case 1:
      return ExtremaCycle({-2.031, 1.117});
    case 2:
      return ExtremaCycle({-2.417, -1.093, 0.637, 2.251});
    case 3:
      return ExtremaCycle({-2.71, -1.83, -0.94, 0.22, 1.31, 2.43});
    default: {
      std::vector<double> pts;
      for (int i = 0; i < 2 * s; ++i)
        pts.push_back(-kPi + kTwoPi * (i + 0.37) / (2 * s));
      return ExtremaCycle(pts);
    }
  }
}

/// Simple analytic member of the comonotone class of {0, pi}.
inline CorpusModel make_cosine_model() {
  CorpusModel out{make_jet_model(
                      "cos", [](double x) { return jet_cos(Jet::variable(x)); },
                      Jet::kOrder),
                  ExtremaCycle({0.0, kPi}), Jet::kOrder, 0.0};
  return out;
}

}  // namespace cta
