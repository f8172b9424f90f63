#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "biloc/choice.hpp"
#include "biloc/instance.hpp"
#include "biloc/solution.hpp"

namespace biloc {

enum class SimulationMode {
  reduced_consistent,  // keep the first-stage shares of the accepting customers
  reallocation,        // re-solve the assignment of the accepting customers per scenario
};

const char* to_string(SimulationMode mode);
SimulationMode simulation_mode_from_string(std::string_view text);

struct ScenarioOutcome {
  std::size_t scenario = 0;
  std::vector<std::vector<int>> accepted;          // [n][k] -> accepted service or -1
  std::vector<std::vector<double>> contribution;   // [n][k] revenue minus assignment cost
  std::vector<std::vector<char>> violation;        // [n][m] minimum demand missed
  std::vector<std::vector<double>> share;          // [i][j], reallocation mode only
  double profit = 0.0;
  bool feasible = true;
};

struct SimulationOptions {
  int workers = 1;
  bool keep_outcomes = false;
};

struct SimulationReport {
  SimulationMode mode = SimulationMode::reduced_consistent;
  std::size_t scenarios = 0;
  std::uint64_t seed = 0;
  double mean = 0.0;       // over feasible scenarios
  double std_error = 0.0;
  std::size_t infeasible = 0;
  std::vector<std::vector<double>> violation_rate;  // [n][m]
  std::vector<ScenarioOutcome> outcomes;            // when kept
};

// Scenario-by-scenario profit of a fixed first stage. Each offered category
// accepts when its simulated offer utility beats its simulated opt-out.
// Results do not depend on the worker count.
SimulationReport simulate(const Instance& instance, const FirstStage& first_stage, const ScenarioSet& scenarios,
                          SimulationMode mode, const SimulationOptions& options = {});

// Share of outcomes where the accepted demand of (n, m) falls short of the
// minimum demand of the chosen price.
std::vector<std::vector<double>> min_demand_violation_rate(const std::vector<ScenarioOutcome>& outcomes);

// Long-format CSV: mode, metric, shipper, service, value. The mode gap row
// appears when both modes are present.
std::string simulation_csv(const std::vector<SimulationReport>& reports);

}  // namespace biloc
