#include <cmath>

#include "biloc/bench.hpp"
#include "biloc/bounds.hpp"
#include "biloc/milp.hpp"

namespace biloc {

namespace {

// Per-unit assignment rates, facility A then B, customers 0..3.
constexpr double kRate[2][4] = {{3.2, 3.23, 4.0, 4.0}, {4.0, 4.0, 2.5, 2.5}};

// rho by (service, price level), shared by both shippers.
constexpr double kRho[2][2] = {{0.9, 0.6}, {0.8, 0.55}};

SweepRow solve_row(const std::string& point, const Instance& inst, const RhoTable& rho) {
  SweepRow row;
  row.kind = "fixture";
  row.point = point;
  SolveOptions options;
  options.workers = 1;
  const Solution sol = solve(build(inst, rho), options);
  row.status = to_string(sol.status);
  row.objective = sol.objective;
  row.revenue = sol.revenue;
  row.cost = sol.cost;
  row.fixed_cost = sol.fixed_cost;
  row.nodes = sol.nodes;
  row.seconds = sol.seconds;
  row.trivial = sol.status == SolveStatus::trivial;
  row.gap = sol.gap;
  row.message = sol.message;
  return row;
}

Instance without_min_demand(Instance inst) {
  for (auto& ladder : inst.price_ladders) {
    for (auto& e : ladder.entries) e.min_demand = 0.0;
  }
  return inst;
}

}  // namespace

Instance fixture_instance() {
  Instance inst;
  inst.facilities = {{150.0, 250.0, {0.0, 0.0}}, {50.0, 140.0, {1.0, 0.0}}};
  inst.customers = {{0, 0, 50.0, {0.1, 0.2}}, {0, 0, 100.0, {0.2, 0.1}}, {1, 0, 20.0, {0.9, 0.2}}, {1, 0, 20.0, {0.8, 0.1}}};
  inst.shippers = {{{{0, 1}}}, {{{0, 1}}}};
  inst.service_levels = {{1.0, 1.0}, {1.15, 1.1}};
  for (int n = 0; n < 2; ++n) {
    inst.price_ladders.push_back({n, 0, {{6.0, 40.0}, {6.5, 0.0}}});
    inst.price_ladders.push_back({n, 1, {{6.3, 50.0}, {7.0, 0.0}}});
  }
  inst.costs.assign(2 * 4 * 2, 0.0);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int m = 0; m < 2; ++m) {
        inst.cost(i, j, m) = kRate[i][j] * inst.customers[j].demand * inst.service_levels[m].cost_multiplier;
      }
    }
  }
  inst.choice.alpha = -0.1;
  inst.choice.beta = 1.0;
  inst.choice.L = {{{4.5, 4.5}}, {{4.5, 4.5}}};
  inst.choice.L_optout = {{3.0}, {3.0}};
  return inst;
}

RhoTable fixture_rho(const Instance& inst) {
  RhoTable rho;
  for (int n = 0; n < inst.shipper_count(); ++n) {
    for (int k = 0; k < inst.category_count(n); ++k) {
      for (int m : inst.category_services(n, k)) {
        for (int p = 0; p < static_cast<int>(inst.ladder(n, m).size()); ++p) rho.set(n, k, m, p, kRho[m][p]);
      }
    }
  }
  return rho;
}

FixtureReport run_fixture_example() {
  FixtureReport report;
  const Instance inst = fixture_instance();
  const Instance relaxed = without_min_demand(inst);
  report.rows.push_back(solve_row("fixture", inst, fixture_rho(inst)));
  report.rows.push_back(solve_row("perfect_information", relaxed, rho_table_constant(relaxed, 1.0)));
  report.rows.push_back(solve_row("uniform", inst, rho_table_constant(inst, 0.5)));
  report.rows.push_back(solve_row("fixture_no_min_demand", relaxed, fixture_rho(relaxed)));
  report.perfect_information_dominates = report.rows[1].objective >= report.rows[3].objective - 1e-9;

  // Shipper 1 serving its category with service 1 at the low price.
  Solution gated;
  gated.values[price_name(1, 1, 0)] = 1.0;
  gated.values[service_name(1, 0, 1)] = 1.0;
  gated.values[open_name(1)] = 1.0;
  for (int j : inst.category_customers(1, 0)) gated.values[assign_name(1, j, 1)] = 1.0;
  for (const auto& v : check_solution(inst, gated)) {
    if (v.find("min demand") != std::string::npos) report.min_demand_gate = true;
  }

  report.capacity_gate = inst.service_levels[1].gamma * inst.category_demand(0, 0) > inst.facilities[0].capacity;
  return report;
}

}  // namespace biloc
