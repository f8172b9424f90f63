#include <random>

#include "biloc/error.hpp"
#include "biloc/simplex.hpp"
#include "doctest.h"

using namespace biloc;

TEST_CASE("small maximization with duals") {
  LpProblem lp;
  const int x = lp.add_column(3.0, 0.0, kInfinity);
  const int y = lp.add_column(2.0, 0.0, kInfinity);
  lp.add_row({{x, 1.0}, {y, 1.0}}, Sense::le, 4.0);
  lp.add_row({{x, 1.0}, {y, 3.0}}, Sense::le, 7.0);
  lp.add_row({{x, 1.0}}, Sense::le, 3.0);
  const auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.objective == doctest::Approx(11.0));
  CHECK(sol.values[x] == doctest::Approx(3.0));
  CHECK(sol.values[y] == doctest::Approx(1.0));
  CHECK(sol.duals[0] == doctest::Approx(2.0));
  CHECK(sol.duals[1] == doctest::Approx(0.0));
  CHECK(sol.duals[2] == doctest::Approx(1.0));
}

TEST_CASE("minimization with equality and ge rows") {
  LpProblem lp;
  lp.maximize = false;
  const int a = lp.add_column(2.0, 0.0, 10.0);
  const int b = lp.add_column(5.0, 1.0, 10.0);
  lp.add_row({{a, 1.0}, {b, 1.0}}, Sense::eq, 6.0);
  lp.add_row({{a, 1.0}}, Sense::ge, 2.0);
  const auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.objective == doctest::Approx(2.0 * 5 + 5.0 * 1));
  CHECK(sol.values[a] == doctest::Approx(5.0));
}

TEST_CASE("infeasible and unbounded") {
  LpProblem lp;
  const int x = lp.add_column(1.0, 0.0, 1.0);
  lp.add_row({{x, 1.0}}, Sense::ge, 2.0);
  CHECK(solve_lp(lp).status == LpStatus::infeasible);

  LpProblem open;
  const int u = open.add_column(1.0, 0.0, kInfinity);
  const int v = open.add_column(0.0, 0.0, kInfinity);
  open.add_row({{u, 1.0}, {v, -1.0}}, Sense::le, 1.0);
  CHECK(solve_lp(open).status == LpStatus::unbounded);
}

TEST_CASE("degenerate problem terminates under Bland's rule") {
  // Beale's cycling example.
  LpProblem lp;
  lp.maximize = false;
  const int x4 = lp.add_column(-0.75, 0.0, kInfinity);
  const int x5 = lp.add_column(150.0, 0.0, kInfinity);
  const int x6 = lp.add_column(-0.02, 0.0, kInfinity);
  const int x7 = lp.add_column(6.0, 0.0, kInfinity);
  lp.add_row({{x4, 0.25}, {x5, -60.0}, {x6, -0.04}, {x7, 9.0}}, Sense::le, 0.0);
  lp.add_row({{x4, 0.5}, {x5, -90.0}, {x6, -0.02}, {x7, 3.0}}, Sense::le, 0.0);
  lp.add_row({{x6, 1.0}}, Sense::le, 1.0);
  for (bool bland : {false, true}) {
    LpOptions o;
    o.bland = bland;
    const auto sol = solve_lp(lp, o);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.objective == doctest::Approx(-0.05));
  }
}

TEST_CASE("strong duality on random bounded problems") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    LpProblem lp;
    const int n = 6, m = 4;
    for (int j = 0; j < n; ++j) lp.add_column(u(rng) * 10 - 3, 0.0, 1.0 + 3 * u(rng));
    for (int i = 0; i < m; ++i) {
      std::vector<std::pair<int, double>> terms;
      for (int j = 0; j < n; ++j) terms.push_back({j, u(rng) * 4 - 1});
      lp.add_row(terms, Sense::le, 1.0 + 5 * u(rng));
    }
    const auto sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    // Dual objective: y b + sum of positive reduced costs at upper bounds.
    double dual = 0.0;
    for (int i = 0; i < m; ++i) {
      CHECK(sol.duals[i] >= -1e-9);
      dual += sol.duals[i] * lp.rows[i].rhs;
    }
    for (int j = 0; j < n; ++j) {
      double rc = lp.objective[j];
      for (int i = 0; i < m; ++i) {
        for (auto [c, a] : lp.rows[i].terms) {
          if (c == j) rc -= sol.duals[i] * a;
        }
      }
      if (rc > 0) dual += rc * lp.upper[j];
    }
    CHECK(dual == doctest::Approx(sol.objective).epsilon(1e-9));
    CHECK(sol.max_residual <= 1e-7);
  }
}
