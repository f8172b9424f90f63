#include <random>

#include "biloc/simplex.hpp"
#include "biloc/transport.hpp"
#include "doctest.h"

using namespace biloc;

namespace {

// The same problem as a plain LP over shares.
double lp_cost(const TransportProblem& tp, bool* feasible) {
  const int I = static_cast<int>(tp.capacity.size());
  const int J = static_cast<int>(tp.load.size());
  LpProblem lp;
  lp.maximize = false;
  for (int i = 0; i < I; ++i) {
    for (int j = 0; j < J; ++j) lp.add_column(tp.cost[i][j], 0.0, 1.0);
  }
  for (int j = 0; j < J; ++j) {
    std::vector<std::pair<int, double>> terms;
    for (int i = 0; i < I; ++i) terms.push_back({i * J + j, 1.0});
    lp.add_row(terms, Sense::eq, 1.0);
  }
  for (int i = 0; i < I; ++i) {
    std::vector<std::pair<int, double>> terms;
    for (int j = 0; j < J; ++j) terms.push_back({i * J + j, tp.load[j]});
    lp.add_row(terms, Sense::le, tp.capacity[i]);
  }
  const auto sol = solve_lp(lp);
  *feasible = sol.status == LpStatus::optimal;
  return sol.objective;
}

}  // namespace

TEST_CASE("two facilities, split customer") {
  TransportProblem tp;
  tp.capacity = {10.0, 100.0};
  tp.load = {20.0};
  tp.cost = {{1.0}, {3.0}};
  const auto r = solve_transport(tp);
  REQUIRE(r.feasible);
  CHECK(r.share[0][0] == doctest::Approx(0.5));
  CHECK(r.share[1][0] == doctest::Approx(0.5));
  CHECK(r.cost == doctest::Approx(2.0));
}

TEST_CASE("insufficient capacity") {
  TransportProblem tp;
  tp.capacity = {5.0};
  tp.load = {3.0, 3.0};
  tp.cost = {{1.0, 1.0}};
  CHECK_FALSE(solve_transport(tp).feasible);
}

TEST_CASE("agrees with the simplex and certifies with duals") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int feasible_cases = 0;
  for (int t = 0; t < 200; ++t) {
    TransportProblem tp;
    const int I = 1 + t % 4, J = 1 + (t / 4) % 6;
    for (int i = 0; i < I; ++i) tp.capacity.push_back(5 + 40 * u(rng));
    for (int j = 0; j < J; ++j) tp.load.push_back(1 + 20 * u(rng));
    tp.cost.assign(I, std::vector<double>(J));
    for (auto& row : tp.cost) {
      for (auto& c : row) c = 100 * u(rng);
    }
    bool lp_feasible = false;
    const double expected = lp_cost(tp, &lp_feasible);
    const auto r = solve_transport(tp);
    REQUIRE(r.feasible == lp_feasible);
    if (!r.feasible) continue;
    ++feasible_cases;
    CHECK(r.cost == doctest::Approx(expected).epsilon(1e-9));
    double dual = 0.0;
    for (double v : r.customer_duals) dual += v;
    for (int i = 0; i < I; ++i) {
      CHECK(r.capacity_duals[i] >= -1e-9);
      dual -= r.capacity_duals[i] * tp.capacity[i];
    }
    CHECK(dual == doctest::Approx(r.cost).epsilon(1e-9));
    // Dual feasibility: reduced cost of every share is nonnegative.
    for (int i = 0; i < I; ++i) {
      for (int j = 0; j < J; ++j) {
        CHECK(tp.cost[i][j] + r.capacity_duals[i] * tp.load[j] - r.customer_duals[j] >= -1e-7);
      }
    }
  }
  CHECK(feasible_cases > 50);
}
