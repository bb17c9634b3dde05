#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "cta/models.hpp"
#include "cta/partition.hpp"

using namespace cta;

namespace {

PeriodicFunctionModel window_model(std::function<Jet(double)> jets, int order = 6) {
  return make_jet_model("window", std::move(jets), order);
}

}  // namespace

TEST_CASE("partition layout") {
  SECTION("two separated components, widths at most 6sh") {
    ExtremaCycle y({0.0, kPi - 0.01});
    const auto part = build_partition(16, y);
    REQUIRE(part.components.size() == 2);
    for (const auto& c : part.components) {
      CHECK(c.hi - c.lo <= 6.0 * y.s * part.h + 1e-12);
      CHECK(c.extrema.size() == 1);
    }
  }
  SECTION("clustered cycle gives a single component") {
    ExtremaCycle y({0.01, 0.02, 0.03, 0.04});
    const auto part = build_partition(16, y);
    REQUIRE(part.components.size() == 1);
    CHECK(part.components.front().extrema.size() == 4);
  }
  SECTION("too few cells") {
    ExtremaCycle y({0.0, kPi});
    CHECK_THROWS_AS(build_partition(6, y), TooFewCells);
    ExtremaCycle y2({-2.0, -1.0, 1.0, 2.0});
    CHECK_THROWS_AS(build_partition(12, y2), TooFewCells);
  }
}

TEST_CASE("partition properties on random cycles") {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int rep = 0; rep < 500; ++rep) {
    const int s = 1 + static_cast<int>(rng() % 3);
    const int n = 6 * s + 1 + static_cast<int>(rng() % 40);
    std::vector<double> pts;
    for (int i = 0; i < 2 * s; ++i)
      pts.push_back(-kPi + 1e-6 + (kTwoPi - 2e-6) * (i + 0.05 + 0.9 * u01(rng)) / (2 * s));
    ExtremaCycle y(pts);
    const auto part = build_partition(n, y);

    std::size_t covered_points = 0;
    double prev_hi = -1e9;
    for (const auto& c : part.components) {
      CHECK(c.hi - c.lo <= 6.0 * s * part.h + 1e-12);
      CHECK(c.lo >= prev_hi - 1e-12);  // disjoint, ordered
      prev_hi = c.hi;
      CHECK(c.lo >= -kPi - 1e-12);
      CHECK(c.hi <= kPi + 1e-12);
      covered_points += c.extrema.size();
    }
    CHECK(covered_points == pts.size());

    // Components plus outside cells tile [-pi, pi].
    double total = 0.0;
    for (const auto& c : part.components) total += c.hi - c.lo;
    for (const auto& cell : part.outside_cells) total += cell.second - cell.first;
    CHECK(total == Catch::Approx(kTwoPi).margin(1e-9));
  }
}

TEST_CASE("monotone piece") {
  SECTION("affine input reproduces exactly") {
    auto f = window_model([](double x) { return Jet::variable(x) * 2.0 + 1.0; });
    const auto rep = monotone_piece(f, 0.25, 1.0, 2, 2);
    CHECK(rep.sup_error < 1e-11);
    CHECK(rep.piece(0.25) == Catch::Approx(f.f(0.25)).margin(1e-12));
    CHECK(rep.piece(1.0) == Catch::Approx(f.f(1.0)).margin(1e-12));
  }
  SECTION("x + sin x, r = 1, k = 3") {
    auto f = window_model(
        [](double x) { return Jet::variable(x) + jet_sin(Jet::variable(x)); });
    const auto rep = monotone_piece(f, 0.0, 1.0, 1, 3);
    CHECK(rep.piece(0.0) == Catch::Approx(f.f(0.0)).margin(1e-10));
    CHECK(rep.piece(1.0) == Catch::Approx(f.f(1.0)).margin(2e-10));
    CHECK(rep.sign_margin >= -1e-9);
    CHECK(rep.error_constant < 100.0);
  }
  SECTION("constant input takes the degenerate-span path") {
    auto f = window_model([](double) { return Jet::constant(4.2); });
    const auto rep = monotone_piece(f, 0.0, 1.0, 1, 2);
    CHECK(rep.sup_error < 1e-13);
    CHECK(rep.piece.degree() == 0);
  }
  SECTION("rejects non-monotone input") {
    auto f = window_model([](double x) { return jet_sin(Jet::variable(x)); });
    CHECK_THROWS_AS(monotone_piece(f, 0.0, 3.0, 1, 2), NotMonotone);
  }
  SECTION("nonincreasing variant") {
    auto f = window_model(
        [](double x) { return -(Jet::variable(x) + jet_sin(Jet::variable(x))); });
    const auto rep = monotone_piece(f, 0.0, 1.0, 1, 2, /*nonincreasing=*/true);
    CHECK(rep.piece(0.0) == Catch::Approx(f.f(0.0)).margin(1e-10));
    CHECK(rep.sign_margin >= -1e-9);
    CHECK(rep.sup_error < 0.1);
  }
}

TEST_CASE("comonotone piece with a full set of extrema") {
  const double h = 0.25;
  SECTION("low-degree input is reproduced") {
    // f with f' = (x - t1)(x + 2): degree 3 = r + 2, one interior extremum.
    const double t1 = 0.5;
    auto f = window_model([t1](double x) {
      const Jet u = Jet::variable(x);
      return (u * u * u) * (1.0 / 3.0) + (u * u) * (0.5 * (2.0 - t1)) - u * (2.0 * t1);
    });
    const auto rep =
        comonotone_piece_full(f, 0.0, 0.75, {t1}, 1, h, /*mirrored=*/false);
    CHECK(rep.sup_error < 1e-9);
    CHECK(rep.sign_margin >= -1e-9);
  }
  SECTION("geometry gates") {
    auto f = window_model([](double x) { return jet_cos(Jet::variable(x)); });
    CHECK_THROWS_AS(comonotone_piece_full(f, 0.0, 0.75, {0.1}, 1, h, false),
                    HypothesisViolation);  // knot below a + h
    CHECK_THROWS_AS(comonotone_piece_full(f, 0.0, 3.0, {1.5}, 1, h, false),
                    HypothesisViolation);  // window too wide
  }
  SECTION("partition-driven window from the corpus") {
    const auto corpus = make_corpus_model(default_cycle(1), 1);
    const auto part = build_partition(16, corpus.cycle);
    REQUIRE(part.rotation == 0.0);
    const auto& comp = part.components.front();
    REQUIRE(comp.extrema.size() == 1);
    const double probe = 0.5 * (comp.lo + comp.extrema.front());
    const bool mirrored =
        pi_product(corpus.cycle, probe) / (probe - comp.extrema.front()) < 0.0;
    const auto rep = comonotone_piece_full(corpus.model, comp.lo, comp.hi,
                                           comp.extrema, 1, part.h, mirrored);
    CHECK(rep.sign_margin >= -1e-9);
    CHECK(rep.piece(comp.lo) == Catch::Approx(corpus.model.f(comp.lo)).margin(1e-9));
    CHECK(rep.error_constant < 1e4);
  }
}

TEST_CASE("comonotone piece with partial extrema") {
  const double h = 0.25;
  SECTION("flat input exercises the bare correction term") {
    auto f = window_model([](double) { return Jet::constant(1.0); });
    const auto rep = comonotone_piece_partial(f, 0.0, 0.75, {0.3}, 3, 3, h, false);
    CHECK(rep.sup_error < 1e-10);
    CHECK(rep.sign_margin >= -1e-12);
  }
  SECTION("r = 3, nu = 1, k = 3 on a synthetic model") {
    // Derivative (x - t1)(e^{0.3x} + 1/2): one sign change, smooth weight.
    const double t1 = 0.4;
    auto deriv = [t1](double x) { return (x - t1) * (std::exp(0.3 * x) + 0.5); };
    PeriodicAntiderivative table(deriv, 1e-13);
    PeriodicFunctionModel model;
    model.label = "synthetic";
    model.f = [table](double x) { return table(x); };
    model.analytic_derivatives.push_back(deriv);
    model.analytic_derivatives.push_back([t1](double x) {
      return (std::exp(0.3 * x) + 0.5) + (x - t1) * 0.3 * std::exp(0.3 * x);
    });
    model.analytic_derivatives.push_back([t1](double x) {
      return 0.6 * std::exp(0.3 * x) + (x - t1) * 0.09 * std::exp(0.3 * x);
    });
    model.max_analytic_order = 3;
    const auto rep = comonotone_piece_partial(model, 0.0, 0.75, {t1}, 3, 3, h, false);
    CHECK(rep.piece(0.0) == Catch::Approx(model.f(0.0)).margin(1e-9));
    CHECK(rep.sign_margin >= -1e-9);
    CHECK(rep.sup_error < 0.05);
  }
  SECTION("nu = r is rejected") {
    auto f = window_model([](double x) { return jet_cos(Jet::variable(x)); });
    CHECK_THROWS_AS(
        comonotone_piece_partial(f, 0.0, 0.75, {0.3, 0.5}, 2, 3, h, false),
        HypothesisViolation);
  }
}

TEST_CASE("window constant bound probe") {
  const double h = 0.25;
  SECTION("constant f gives a zero numerator") {
    auto f = window_model([](double) { return Jet::constant(2.0); });
    const auto rep = probe_window_bound(f, 0.0, 1.0, {0.3, 0.7}, 1, h);
    CHECK(rep.lhs < 1e-14);
    CHECK(rep.ratio == 0.0);
  }
  SECTION("single monotonicity change, r = 0") {
    auto f = window_model([](double x) {
      const Jet u = Jet::variable(x) - 0.45;
      return u * u;  // parabola with a minimum at 0.45
    });
    const auto rep = probe_window_bound(f, 0.0, 0.75, {0.45}, 0, h,
                                        /*mirrored=*/false);
    CHECK(rep.ratio > 0.0);
    CHECK(rep.ratio < 1e3);
  }
  SECTION("random admissible instances have finite ratios") {
    std::mt19937_64 rng(8080);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    int done = 0;
    while (done < 50) {
      const int r = 1 + static_cast<int>(rng() % 2);
      const double a = -1.0 + u01(rng);
      const double width = (3.0 + 3.0 * r * u01(rng)) * h;
      const double b = a + std::min(width, 3.0 * (r + 1) * h);
      if (b - a < 3.0 * h) continue;
      std::vector<double> knots;
      for (int i = 0; i <= r; ++i)
        knots.push_back(a + h + (b - a - 2 * h) * (i + 0.5) / (r + 1.0));
      auto deriv = [knots](double x) {
        double p = 1.2 + std::sin(x);
        for (double t : knots) p *= x - t;
        return p;
      };
      PeriodicAntiderivative table(deriv, 1e-12);
      PeriodicFunctionModel model;
      model.f = [table](double x) { return table(x); };
      model.analytic_derivatives.push_back(deriv);
      model.max_analytic_order = 1;
      model.label = "probe";
      const auto rep = probe_window_bound(model, a, b, knots, r, h);
      CHECK(std::isfinite(rep.ratio));
      ++done;
    }
  }
}

TEST_CASE("clustered-cycle constant bounds") {
  const auto corpus = make_clustered_model(0.30, 0.32);
  const ExtremaCycle& tight = corpus.cycle;

  double prev_odd = -1.0;
  for (double h : {0.1, 0.05, 0.025}) {
    const auto rep = probe_cluster_bound(corpus.model, tight, h, 2);
    CHECK(std::isfinite(rep.ratio_odd));
    CHECK(rep.ratio_odd < 1e3);
    CHECK(rep.ratio_first < 1e3);
    if (prev_odd > 0.0) {
      const double spread = std::max(rep.ratio_odd, prev_odd) /
                            std::min(rep.ratio_odd, prev_odd);
      CHECK(spread < 50.0);
    }
    prev_odd = rep.ratio_odd;
  }

  // Constant f: all numerators vanish.
  auto flat = window_model([](double) { return Jet::constant(1.0); });
  const auto rep = probe_cluster_bound(flat, tight, 0.1, 2);
  CHECK(rep.norm_last < 1e-14);

  // Cluster width gate.
  ExtremaCycle wide({-1.0, 1.0});
  CHECK_THROWS_AS(probe_cluster_bound(corpus.model, wide, 0.1, 2),
                  HypothesisViolation);
}

TEST_CASE("stitched spline") {
  SECTION("cosine model, r = 2, k = 3") {
    const auto cosm = make_cosine_model();
    const auto res = stitch_spline(cosm.model, cosm.cycle, 16, 2, 3);
    CHECK(res.spline.continuity_defect() < 1e-9);
    CHECK(res.sign_margin >= -1e-9);
    CHECK(res.sup_error < 0.05);
    for (double x : {-3.0, -1.2, 0.0, 0.7, 2.9})
      CHECK(res.spline(x) == Catch::Approx(std::cos(x)).margin(0.05));
  }
  SECTION("clustered cycle returns the constant") {
    const auto corpus = make_clustered_model(0.30, 0.32);
    const auto res = stitch_spline(corpus.model, corpus.cycle, 16, 0, 2);
    CHECK(res.constant_path);
    CHECK(res.spline(1.7) == Catch::Approx(corpus.model.f(0.0)));
  }
  SECTION("gates") {
    const auto cosm = make_cosine_model();
    CHECK_THROWS_AS(stitch_spline(cosm.model, cosm.cycle, 6, 2, 3), TooFewCells);
    CHECK_THROWS_AS(stitch_spline(cosm.model, cosm.cycle, 16, 5, 2),
                    RegimeUnsupported);
  }
  SECTION("rotation path still approximates") {
    ExtremaCycle y({0.0, kPi - 0.01});
    const auto corpus = make_corpus_model(y, 1);
    const auto res = stitch_spline(corpus.model, y, 16, 1, 3);
    CHECK(res.partition.rotation > 0.0);
    CHECK(res.spline.continuity_defect() < 1e-9);
    CHECK(res.sign_margin >= -1e-9 * (1.0 + res.sup_error));
    double worst = 0.0;
    for (int i = 0; i < 512; ++i) {
      const double x = -kPi + kTwoPi * i / 512;
      worst = std::max(worst, std::abs(corpus.model.f(x) - res.spline(x)));
    }
    CHECK(worst <= res.sup_error + 1e-12);
    CHECK(res.sup_error < 0.05);
  }
  SECTION("ratio stays bounded across n (light sweep)") {
    const auto corpus = make_corpus_model(default_cycle(1), 1);
    const double r16 = stitch_spline(corpus.model, corpus.cycle, 16, 1, 3).ratio;
    const double r32 = stitch_spline(corpus.model, corpus.cycle, 32, 1, 3).ratio;
    CHECK(std::max(r16, r32) / std::min(r16, r32) < 50.0);
  }
}
