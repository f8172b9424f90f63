#pragma once

#include <string>
#include <vector>

#include "biloc/choice.hpp"
#include "biloc/instance.hpp"
#include "biloc/solution.hpp"

namespace biloc {

// Bounds at or below this value certify that offering nothing is optimal.
inline constexpr double kTrivialThreshold = 1e-9;

struct BestOffer {
  int shipper = 0;
  int category = 0;
  int service = 0;
  int price_level = 0;
  double value = 0.0;  // rho * (d_k q - sum_j min_i c_ij^m), > 0
};

struct UpperBound {
  double value = 0.0;
  bool trivial = false;
  // Per category, the most profitable offer when it is positive.
  std::vector<BestOffer> offers;
};

// Sum over categories of the best positive expected margin, ignoring
// capacities and price sharing, minus the cheapest fixed cost.
UpperBound profit_upper_bound_detail(const Instance& instance, const RhoTable& rho);
double profit_upper_bound(const Instance& instance, const RhoTable& rho);

// Constraint violations of the solution's r, y, z and w values, one entry
// per violated row or bound. Empty when feasible.
std::vector<std::string> check_solution(const Instance& instance, const Solution& solution);

struct Evaluation {
  double objective = 0.0;
  double revenue = 0.0;
  double cost = 0.0;
  double fixed_cost = 0.0;
};

// Objective recomputed from r, y, z and w alone with the products y z and
// w y taken exactly. Throws FeasibilityError listing the violations when
// check_solution is not empty.
Evaluation evaluate_detail(const Instance& instance, const RhoTable& rho, const Solution& solution);
double evaluate(const Instance& instance, const RhoTable& rho, const Solution& solution);

}  // namespace biloc
