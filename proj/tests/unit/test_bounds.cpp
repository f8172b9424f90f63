#include <cmath>

#include "biloc/bench.hpp"
#include "biloc/bounds.hpp"
#include "biloc/error.hpp"
#include "biloc/milp.hpp"
#include "biloc/solver.hpp"
#include "doctest.h"
#include "single_lane.hpp"
#include "tiny_family.hpp"

using namespace biloc;

namespace {

// Facility A serves shipper 0 with service 0 at the low price.
Solution hand_solution() {
  Solution s;
  s.values[open_name(0)] = 1.0;
  s.values[price_name(0, 0, 0)] = 1.0;
  s.values[service_name(0, 0, 0)] = 1.0;
  s.values[assign_name(0, 0, 0)] = 1.0;
  s.values[assign_name(0, 1, 0)] = 1.0;
  return s;
}

}  // namespace

TEST_CASE("offer bound on the fixture") {
  const Instance inst = fixture_instance();
  const auto ub = profit_upper_bound_detail(inst, fixture_rho(inst));
  // 0.9 (150 * 6 - 483) + 0.9 (40 * 6 - 100) - 140.
  CHECK(ub.value == doctest::Approx(375.3 + 126.0 - 140.0));
  CHECK_FALSE(ub.trivial);
  REQUIRE(ub.offers.size() == 2);
  CHECK(ub.offers[0].service == 0);
  CHECK(ub.offers[0].price_level == 0);
}

TEST_CASE("offer bound is trivial when no offer has a positive margin") {
  const Instance inst = fixture_instance();
  const auto ub = profit_upper_bound_detail(inst, rho_table_constant(inst, 0.0));
  CHECK(ub.trivial);
  CHECK(ub.value <= kTrivialThreshold);
}

TEST_CASE("evaluate recomputes the objective from r, y, z and w") {
  const Instance inst = fixture_instance();
  const auto e = evaluate_detail(inst, fixture_rho(inst), hand_solution());
  CHECK(e.revenue == doctest::Approx(0.9 * 150 * 6));
  CHECK(e.cost == doctest::Approx(0.9 * (3.2 * 50 + 3.23 * 100)));
  CHECK(e.fixed_cost == doctest::Approx(250.0));
  CHECK(e.objective == doctest::Approx(125.3));
}

TEST_CASE("check_solution finds violations") {
  const Instance inst = fixture_instance();
  CHECK(check_solution(inst, hand_solution()).empty());

  Solution closed = hand_solution();
  closed.values.erase(open_name(0));
  CHECK_FALSE(check_solution(inst, closed).empty());
  CHECK_THROWS_AS(evaluate(inst, fixture_rho(inst), closed), FeasibilityError);

  Solution split = hand_solution();
  split.values[assign_name(0, 1, 0)] = 0.5;
  CHECK_FALSE(check_solution(inst, split).empty());

  // Service 1 for shipper 0 needs 1.15 * 150 units of capacity at A.
  Solution heavy;
  heavy.values[open_name(0)] = 1.0;
  heavy.values[price_name(0, 1, 1)] = 1.0;
  heavy.values[service_name(0, 0, 1)] = 1.0;
  heavy.values[assign_name(0, 0, 1)] = 1.0;
  heavy.values[assign_name(0, 1, 1)] = 1.0;
  CHECK_FALSE(check_solution(inst, heavy).empty());
}

TEST_CASE("offer bound examples") {
  const Instance fixture = fixture_instance();
  CHECK(profit_upper_bound(fixture, rho_table_constant(fixture, 0.0)) == doctest::Approx(-140.0));

  Instance lane = testing::single_lane();
  lane.costs = {25.0};  // rho d q = 20 < 25
  CHECK(profit_upper_bound_detail(lane, rho_table_constant(lane, 1.0)).trivial);

  // Positive bound, but the facility cannot hold the demand.
  const Instance tight = testing::single_lane(5.0);
  const RhoTable one = rho_table_constant(tight, 1.0);
  CHECK(profit_upper_bound(tight, one) == doctest::Approx(11.0));
  CHECK(enumerate_oracle(tight, one).objective == 0.0);
  CHECK(solve(build(tight, one)).objective == 0.0);
}

TEST_CASE("single lane arithmetic") {
  const Instance inst = testing::single_lane();
  const RhoTable one = rho_table_constant(inst, 1.0);
  CHECK(evaluate(inst, one, Solution{}) == 0.0);
  Solution s;
  s.values[open_name(0)] = 1.0;
  s.values[price_name(0, 0, 0)] = 1.0;
  s.values[service_name(0, 0, 0)] = 1.0;
  s.values[assign_name(0, 0, 0)] = 1.0;
  CHECK(evaluate(inst, one, s) == doctest::Approx(11.0));
  CHECK(enumerate_oracle(inst, one).objective == doctest::Approx(11.0));
  CHECK(solve(build(inst, one)).objective == doctest::Approx(11.0));
}

TEST_CASE("bound soundness and re-evaluation on the tiny family") {
  for (std::uint64_t seed = 500; seed < 560; ++seed) {
    const Instance inst = testing::tiny_instance(seed);
    const RhoTable rho = rho_table_closed_form(inst);
    const Solution s = solve(build(inst, rho));
    // Offering nothing is always worth 0, whatever the bound says.
    CHECK(std::max(0.0, profit_upper_bound(inst, rho)) >= s.objective - 1e-9);
    CHECK(std::abs(evaluate(inst, rho, s) - s.objective) <= 1e-8 * std::max(1.0, std::abs(s.objective)));
  }
}

TEST_CASE("cost terms vanish without a price") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Instance inst = testing::tiny_instance(seed);
    const Solution s = solve(build(inst, rho_table_closed_form(inst)), {SolveMethod::lp_bnb});
    for (int n = 0; n < inst.shipper_count(); ++n) {
      for (int m : inst.shipper_services(n)) {
        for (int p = 0; p < static_cast<int>(inst.ladder(n, m).size()); ++p) {
          if (s.value(price_name(n, m, p)) > 0.5) continue;
          for (int i = 0; i < inst.facility_count(); ++i) {
            for (int j = 0; j < inst.customer_count(); ++j) {
              if (inst.customers[j].shipper == n) CHECK(std::abs(s.value(cost_product_name(i, j, m, p))) <= 1e-12);
            }
          }
        }
      }
    }
  }
}
