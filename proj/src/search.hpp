#pragma once

#include <chrono>
#include <optional>
#include <vector>

#include "biloc/milp.hpp"
#include "biloc/solution.hpp"
#include "biloc/solver.hpp"
#include "structure.hpp"

namespace biloc::detail {

using Clock = std::chrono::steady_clock;

// First-stage decisions in reduced coordinates.
struct Choice {
  std::vector<char> open;                 // [i]
  std::vector<std::vector<int>> service;  // [n][k] -> m or -1
  std::vector<std::vector<int>> price;    // [n][m] -> p or -1
  std::vector<std::vector<double>> share; // [i][j]
};

struct ChoiceValue {
  bool feasible = false;
  double objective = 0.0;
  std::vector<std::vector<double>> share;  // [i][j]
};

Choice empty_choice(const Reduced& d);

// Exact objective of a first stage with the best assignment of the served
// customers. Assumes the first stage satisfies the pricing rules.
ChoiceValue evaluate_choice(const Reduced& d, const Choice& c);

// Heuristic first stage built from the upper bound's best offers.
std::optional<Choice> warm_start(const Reduced& d);

// Values for every model column; products are taken exactly.
std::vector<double> assemble(const MilpModel& model, const Reduced& d, const Choice& c);

// Objective, revenue, cost, fixed cost and value map from a column vector.
void fill_report(const MilpModel& model, const std::vector<double>& x, Solution& out);

Solution branch_and_bound(const MilpModel& model, const SolveOptions& options, const std::vector<double>* warm,
                          Clock::time_point start);

Solution decomposition(const MilpModel& model, const Reduced& d, const SolveOptions& options,
                       Clock::time_point start);

}  // namespace biloc::detail
