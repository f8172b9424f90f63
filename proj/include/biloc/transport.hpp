#pragma once

#include <vector>

namespace biloc {

// Single-sourcing-free transportation problem: every customer j must be served
// in full (shares over facilities sum to one), facility i can absorb at most
// capacity[i] units of load and customer j puts load[j] units on whichever
// facilities serve it. Serving j entirely from i costs cost[i][j].
struct TransportProblem {
  std::vector<double> capacity;           // per facility
  std::vector<double> load;               // per customer, > 0
  std::vector<std::vector<double>> cost;  // [facility][customer], >= 0
};

struct TransportResult {
  bool feasible = false;
  double cost = 0.0;
  std::vector<std::vector<double>> share;  // [facility][customer] in [0, 1]
  // Optimal duals: cost == sum(customer_duals) - sum(capacity_duals * capacity).
  std::vector<double> capacity_duals;  // >= 0
  std::vector<double> customer_duals;
};

// Successive shortest paths with Bellman-Ford label correction.
TransportResult solve_transport(const TransportProblem& problem);

}  // namespace biloc
