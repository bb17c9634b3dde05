#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "cta/divided_differences.hpp"

using namespace cta;

namespace {

// Independent oracle: the explicit symmetric sum, valid for knots in any
// order. Cancels badly on clustered knots, so the tests feed it
// well-separated ones.
double explicit_sum(const std::vector<double>& t, const std::vector<double>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    double denom = 1.0;
    for (std::size_t j = 0; j < t.size(); ++j)
      if (j != i) denom *= t[i] - t[j];
    s += v[i] / denom;
  }
  return s;
}

struct PatternInstance {
  KnotSet knots;
  std::vector<double> values;
  MonotonePattern pattern;
};

PatternInstance random_pattern_instance(std::mt19937_64& rng, int m,
                                        MonotonePattern pattern) {
  std::uniform_real_distribution<double> pos(-3.0, 3.0);
  std::uniform_real_distribution<double> mag(0.0, 2.0);
  std::vector<double> t;
  while (true) {
    t.clear();
    for (int i = 0; i <= m; ++i) t.push_back(pos(rng));
    std::sort(t.begin(), t.end());
    bool ok = true;
    for (int i = 1; i <= m; ++i)
      if (t[static_cast<std::size_t>(i)] - t[static_cast<std::size_t>(i - 1)] < 1e-2) ok = false;
    if (ok) break;
  }
  std::vector<double> v(static_cast<std::size_t>(m) + 1);
  v[0] = pos(rng);
  for (int i = 1; i <= m; ++i) {
    double step = mag(rng);
    if (rng() % 8 == 0) step = 0.0;  // exercise the weak inequalities
    const double sgn = ((m - i) % 2 == 0 ? 1.0 : -1.0) *
                       (pattern == MonotonePattern::pattern_a ? 1.0 : -1.0);
    v[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i - 1)] + sgn * step;
  }
  return {KnotSet(t), std::move(v), pattern};
}

}  // namespace

TEST_CASE("divided difference basics") {
  // Leading coefficient of x^2.
  KnotSet k({0.0, 1.0, 2.0});
  CHECK(divided_difference(k, {0.0, 1.0, 4.0}) == Catch::Approx(1.0));

  // ((2-3)/(4-2) - (3-1)/(2-1)) / (4-1) = -5/6.
  KnotSet k2({1.0, 2.0, 4.0});
  CHECK(divided_difference(k2, {1.0, 3.0, 2.0}) == Catch::Approx(-5.0 / 6.0));

  // Zeroth order is the value itself.
  KnotSet k3({2.5});
  CHECK(divided_difference(k3, {7.0}) == Catch::Approx(7.0));

  CHECK_THROWS_AS(divided_difference(k, {1.0, 2.0}), LengthMismatch);
  CHECK_THROWS_AS(KnotSet({0.0, 1e-15, 1.0}), DegenerateKnots);
}

TEST_CASE("exactness on monomials") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pos(-2.0, 2.0);
  for (int m = 1; m <= 6; ++m) {
    std::vector<double> t;
    for (int i = 0; i <= m; ++i) t.push_back(pos(rng) + 5.0 * i);
    std::sort(t.begin(), t.end());
    KnotSet knots(t);
    std::vector<double> vm, vlow;
    for (double x : t) {
      vm.push_back(std::pow(x, m));
      vlow.push_back(std::pow(x, m - 1));
    }
    CHECK(divided_difference(knots, vm) == Catch::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(divided_difference(knots, vlow)) < 1e-10);
  }
}

TEST_CASE("explicit-sum oracle and permutation invariance") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> val(-4.0, 4.0);
  for (int rep = 0; rep < 50; ++rep) {
    const int m = 1 + static_cast<int>(rng() % 5);
    std::vector<double> t;
    for (int i = 0; i <= m; ++i) t.push_back(-3.0 + 6.0 * i / m + 0.2 * val(rng) / 4.0);
    std::sort(t.begin(), t.end());
    std::vector<double> v;
    for (int i = 0; i <= m; ++i) v.push_back(val(rng));
    const double newton = divided_difference(KnotSet(t), v);
    CHECK(newton == Catch::Approx(explicit_sum(t, v)).epsilon(1e-12).margin(1e-12));
    // Simultaneous permutation leaves the symmetric sum unchanged.
    std::vector<std::size_t> idx(t.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<double> tp, vp;
    for (auto i : idx) {
      tp.push_back(t[i]);
      vp.push_back(v[i]);
    }
    CHECK(explicit_sum(tp, vp) == Catch::Approx(newton).epsilon(1e-12).margin(1e-12));
  }
}

TEST_CASE("raw two-term recurrence holds without any pattern") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> val(-4.0, 4.0);
  for (int rep = 0; rep < 100; ++rep) {
    const int m = 2 + static_cast<int>(rng() % 4);
    std::vector<double> t;
    for (int i = 0; i <= m; ++i) t.push_back(i + 0.3 * val(rng) / 4.0);
    std::sort(t.begin(), t.end());
    std::vector<double> v;
    for (int i = 0; i <= m; ++i) v.push_back(val(rng));
    KnotSet full(t);
    KnotSet head(std::vector<double>(t.begin(), t.end() - 1));
    KnotSet tail(std::vector<double>(t.begin() + 1, t.end()));
    const double lhs = divided_difference(full, v);
    const double rhs = (divided_difference(tail, {v.begin() + 1, v.end()}) -
                        divided_difference(head, {v.begin(), v.end() - 1})) /
                       (t.back() - t.front());
    CHECK(lhs == Catch::Approx(rhs).epsilon(1e-12).margin(1e-12));
  }
}

TEST_CASE("sign, recurrence, lower and product bounds on random monotone patterns") {
  std::mt19937_64 rng(2024);
  int checked_product = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const int m = 2 + static_cast<int>(rng() % 5);  // m in [2, 6]
    const auto pattern = (rng() % 2 == 0) ? MonotonePattern::pattern_a
                                          : MonotonePattern::pattern_b;
    const auto inst = random_pattern_instance(rng, m, pattern);

    const auto sign = check_sign(inst.knots, inst.values, inst.pattern);
    CHECK(sign.holds);

    const auto rec = check_recurrence(inst.knots, inst.values, inst.pattern);
    CHECK(rec.rel_err < 1e-10);

    const auto low = check_lower_bound(inst.knots, inst.values, inst.pattern);
    CHECK(low.holds);

    for (int r = 2; r <= m; ++r) {
      const auto prod = check_product_bound(inst.knots, inst.values, inst.pattern, r);
      CHECK(prod.holds);
      ++checked_product;
    }
  }
  CHECK(checked_product > 1000);
}

TEST_CASE("pattern gates") {
  KnotSet k({0.0, 1.0, 2.0});
  // Monotone increasing data fits neither alternating pattern at m = 2.
  CHECK_THROWS_AS(check_sign(k, {0.0, 1.0, 4.0}, MonotonePattern::pattern_a),
                  PatternViolation);
  // Valley data (0, -1, 0): pattern_a, dd = +1.
  const auto rep = check_sign(k, {0.0, -1.0, 0.0}, MonotonePattern::pattern_a);
  CHECK(rep.holds);
  CHECK(rep.value == Catch::Approx(1.0));
  // Constant data satisfies both patterns with value 0.
  CHECK(check_sign(k, {2.0, 2.0, 2.0}, MonotonePattern::pattern_b).value ==
        Catch::Approx(0.0).margin(1e-14));
  // m = 1: equality case of the lower bound.
  KnotSet k1({0.0, 2.0});
  const auto low = check_lower_bound(k1, {0.0, 3.0}, MonotonePattern::pattern_a);
  CHECK(low.holds);
  CHECK(low.slack == Catch::Approx(0.0).margin(1e-12));
  // The lower-bound arithmetic for x^2 data on {0,1,2}: 2^2 * 1 >= 4 - 0.
  CHECK(std::pow(2.0, 2) * std::abs(divided_difference(k, {0.0, 1.0, 4.0})) >=
        4.0 - 1e-12);
  CHECK_THROWS_AS(check_product_bound(k, {0.0, -1.0, 0.0},
                                      MonotonePattern::pattern_a, 1),
                  BadR);
}

TEST_CASE("divided-difference modulus bound") {
  GridSpec spec;
  spec.h_count = 32;
  spec.x_count = 512;

  SECTION("polynomial below both orders vanishes on both sides") {
    auto f = [](double x) { return x * x; };
    auto f1 = [](double x) { return 2.0 * x; };
    KnotSet k({0.1, 0.5, 1.1, 1.9});
    const auto rep = divided_difference_bound(f, f1, 1, k, 0.0, 2.0, spec);
    CHECK(rep.lhs == Catch::Approx(0.0).margin(1e-12));
    CHECK(rep.ratio == Catch::Approx(0.0).margin(1e-9));
  }

  SECTION("sin with l=1, m=3") {
    auto f = [](double x) { return std::sin(x); };
    auto f1 = [](double x) { return std::cos(x); };
    KnotSet k({0.0, 0.5, 1.0, 1.5});
    const auto rep = divided_difference_bound(f, f1, 1, k, 0.0, 1.5, spec);
    CHECK(rep.ratio > 0.0);
    CHECK(rep.ratio < 10.0);
  }

  SECTION("random smooth sweep: ratio stable under grid refinement") {
    std::mt19937_64 rng(555);
    std::uniform_real_distribution<double> amp(-2.0, 2.0);
    std::uniform_real_distribution<double> pos(0.0, 2.0);
    double worst_ratio = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
      const double a1 = amp(rng), a2 = amp(rng);
      const int l = static_cast<int>(rng() % 3);
      const int m = std::max(l + 1, 2 + static_cast<int>(rng() % 4));
      auto f = [&](double x) { return a1 * std::sin(x) + a2 * std::cos(2 * x); };
      auto fl = [&, l](double x) {
        switch (l) {
          case 0: return a1 * std::sin(x) + a2 * std::cos(2 * x);
          case 1: return a1 * std::cos(x) - 2 * a2 * std::sin(2 * x);
          default: return -a1 * std::sin(x) - 4 * a2 * std::cos(2 * x);
        }
      };
      std::vector<double> t;
      while (true) {
        t.clear();
        for (int i = 0; i <= m; ++i) t.push_back(pos(rng));
        std::sort(t.begin(), t.end());
        bool ok = true;
        for (int i = 1; i <= m; ++i)
          if (t[static_cast<std::size_t>(i)] - t[static_cast<std::size_t>(i - 1)] < 5e-2) ok = false;
        if (ok) break;
      }
      KnotSet knots(t);
      const auto r1 = divided_difference_bound(f, fl, l, knots, 0.0, 2.0, spec);
      GridSpec fine = spec;
      fine.x_count *= 2;
      const auto r2 = divided_difference_bound(f, fl, l, knots, 0.0, 2.0, fine);
      if (r1.rhs_without_c > 1e-12) {
        worst_ratio = std::max(worst_ratio, r1.ratio);
        // A denser modulus grid may only raise the majorant.
        CHECK(r2.ratio <= r1.ratio * (1.0 + 1e-9) + 1e-12);
      }
    }
    CHECK(worst_ratio < 50.0);
    INFO("largest empirical constant " << worst_ratio);
  }
}
