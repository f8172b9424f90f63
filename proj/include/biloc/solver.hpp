#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "biloc/choice.hpp"
#include "biloc/instance.hpp"
#include "biloc/milp.hpp"
#include "biloc/simplex.hpp"
#include "biloc/solution.hpp"

namespace biloc {

enum class SolveMethod {
  automatic,      // decomposition when the model has the built structure, else lp_bnb
  lp_bnb,         // branch and bound over simplex relaxations of the model
  decomposition,  // facility-subset enumeration with per-shipper offer search
};

const char* to_string(SolveMethod method);
SolveMethod solve_method_from_string(std::string_view text);

struct SolveOptions {
  SolveMethod method = SolveMethod::automatic;
  double time_limit = 600.0;  // seconds
  int workers = 1;
  bool warm_start = true;
  long node_limit = 0;  // 0 = unlimited
};

// Open node of the branch-and-bound tree.
struct BnBNode {
  std::vector<std::pair<int, double>> fixings;  // (variable, value)
  double bound = 0.0;                           // relaxation value of the parent
  int depth = 0;
  int branch_variable = -1;
  VarRole branch_role = VarRole::other;
};

// Exact maximization of a built model. Models whose offer bound is at most
// kTrivialThreshold return status trivial, objective 0 and zero nodes.
Solution solve(const MilpModel& model, const SolveOptions& options = {});

// Continuous relaxation of the model.
LpSolution solve_relaxation(const MilpModel& model);

// Independent brute force over (r, y, z) straight from the instance, with each
// assignment problem solved by the simplex kernel. Refuses instances with more
// than `max_binaries` first-stage binaries.
Solution enumerate_oracle(const Instance& instance, const RhoTable& rho, int max_binaries = 22);

struct Offer {
  int shipper = 0;
  int category = 0;
  int service = 0;
  int price_level = 0;
};

struct Transportation {
  bool feasible = false;
  double cost = 0.0;                        // sum rho c_ij^m w_ij^m
  std::vector<std::vector<double>> share;   // [i][j]
};

// Cheapest assignment of the customers of the offered categories to the open
// facilities under capacity, weighted by the offers' rho.
Transportation transportation(const Instance& instance, const RhoTable& rho, const std::vector<bool>& open,
                              const std::vector<Offer>& offers);

}  // namespace biloc
