#include <catch2/catch_amalgamated.hpp>

#include "cta/lp.hpp"

using namespace cta;

TEST_CASE("trivial feasibility: min eps s.t. 0 <= eps") {
  LinearProgram lp(1);
  lp.set_objective({1.0});
  lp.add_constraint({-1.0}, Relation::LessEq, 0.0);  // -eps <= 0
  lp.add_constraint({1.0}, Relation::GreaterEq, 0.0);
  auto res = lp.minimize();
  CHECK(res.objective == Catch::Approx(0.0).margin(1e-12));
  CHECK(res.x[0] == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("scalar fit: min eps s.t. |1 - c| <= eps") {
  LinearProgram lp(2);  // variables (c, eps)
  lp.set_objective({0.0, 1.0});
  lp.add_constraint({-1.0, -1.0}, Relation::LessEq, -1.0);  // 1 - c <= eps
  lp.add_constraint({1.0, -1.0}, Relation::LessEq, 1.0);    // c - 1 <= eps
  auto res = lp.minimize();
  CHECK(res.objective == Catch::Approx(0.0).margin(1e-10));
  CHECK(res.x[0] == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("best line to x^2 on [0,1] grid equioscillates at 1/8") {
  // Classic Chebyshev oracle: min over (alpha, beta) of max |x^2-(alpha x+beta)|
  // equals 1/8 on [0,1].
  const int M = 129;
  LinearProgram lp(3);  // (alpha, beta, eps)
  lp.set_objective({0.0, 0.0, 1.0});
  for (int i = 0; i < M; ++i) {
    const double x = static_cast<double>(i) / (M - 1);
    lp.add_constraint({x, 1.0, -1.0}, Relation::LessEq, x * x);
    lp.add_constraint({-x, -1.0, -1.0}, Relation::LessEq, -x * x);
  }
  auto res = lp.minimize();
  CHECK(res.objective == Catch::Approx(0.125).margin(1e-3));
  CHECK(res.x[0] == Catch::Approx(1.0).margin(1e-2));
}

TEST_CASE("infeasible system is detected") {
  LinearProgram lp(1);
  lp.set_objective({0.0});
  lp.add_constraint({1.0}, Relation::LessEq, 0.0);
  lp.add_constraint({1.0}, Relation::GreaterEq, 1.0);
  CHECK_THROWS_AS(lp.minimize(), Infeasible);
}

TEST_CASE("unbounded objective is detected") {
  LinearProgram lp(1);
  lp.set_objective({-1.0});
  lp.add_constraint({1.0}, Relation::GreaterEq, 0.0);
  CHECK_THROWS_AS(lp.minimize(), Unbounded);
}

TEST_CASE("solves are deterministic") {
  auto run = [] {
    LinearProgram lp(3);
    lp.set_objective({1.0, 2.0, -1.0});
    for (int v = 0; v < 3; ++v) {
      std::vector<double> row(3, 0.0);
      row[static_cast<std::size_t>(v)] = 1.0;
      lp.add_constraint(row, Relation::GreaterEq, 0.0);
    }
    lp.add_constraint({1.0, 1.0, 1.0}, Relation::LessEq, 4.0);
    lp.add_constraint({1.0, -1.0, 0.0}, Relation::GreaterEq, -2.0);
    lp.add_constraint({0.0, 1.0, 2.0}, Relation::LessEq, 6.0);
    lp.add_constraint({1.0, 0.0, 1.0}, Relation::Equal, 1.0);
    return lp.minimize();
  };
  auto a = run();
  auto b = run();
  REQUIRE(a.x.size() == b.x.size());
  for (std::size_t i = 0; i < a.x.size(); ++i) CHECK(a.x[i] == b.x[i]);
  CHECK(a.objective == b.objective);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("standard-form solver reports duals") {
  // min u + v  s.t. u - v = 0, u + v = 1  ->  u = v = 1/2.
  std::vector<std::vector<double>> cols = {{1.0, 1.0}, {-1.0, 1.0}};
  DenseSimplex s(cols, {0.0, 1.0}, {1.0, -1.0});
  auto res = s.solve();
  CHECK(res.x[0] == Catch::Approx(0.5));
  CHECK(res.x[1] == Catch::Approx(0.5));
  CHECK(res.objective == Catch::Approx(0.0).margin(1e-12));
  // Multipliers must reproduce the costs on the basic columns.
  CHECK(res.duals[0] * 1.0 + res.duals[1] * 1.0 == Catch::Approx(1.0));
  CHECK(res.duals[0] * -1.0 + res.duals[1] * 1.0 == Catch::Approx(-1.0));
}
