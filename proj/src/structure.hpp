#pragma once

// Coefficient-level view of the single-level model. Every field is a number
// that appears verbatim in the built model, so a model can be decoded back
// into this form and rebuilt bit for bit.

#include <optional>
#include <vector>

#include "biloc/bounds.hpp"
#include "biloc/choice.hpp"
#include "biloc/instance.hpp"
#include "biloc/milp.hpp"

namespace biloc::detail {

struct Reduced {
  int I = 0;
  int J = 0;
  int N = 0;
  int M = 0;
  int max_prices = 0;

  std::vector<double> fixed_cost;  // [i]
  std::vector<double> capacity;    // [i]

  std::vector<int> category_count;                        // [n]
  std::vector<std::vector<std::vector<int>>> services;    // [n][k], sorted
  std::vector<std::vector<double>> category_demand;       // [n][k]
  std::vector<std::vector<std::vector<int>>> members;     // [n][k] -> customers
  std::vector<int> customer_shipper;                      // [j], -1 without services
  std::vector<int> customer_category;                     // [j]
  std::vector<std::vector<double>> load;                  // [j][m] = gamma^m d_j
  std::vector<std::vector<std::vector<double>>> min_demand;  // [n][m][p]; size is |P_n^m|
  std::vector<std::vector<std::vector<std::vector<double>>>> revenue;  // [n][k][m][p] = rho d_k q
  std::vector<double> cost;                               // rho c_ij^m, see cost_at

  int prices(int n, int m) const { return static_cast<int>(min_demand[n][m].size()); }
  double cost_at(int i, int j, int m, int p) const {
    return cost[((static_cast<std::size_t>(i) * J + j) * M + m) * max_prices + p];
  }
  double& cost_at(int i, int j, int m, int p) {
    return cost[((static_cast<std::size_t>(i) * J + j) * M + m) * max_prices + p];
  }
  bool offered(int n, int k, int m) const;
  // Sorted union of services over the shipper's categories.
  std::vector<int> shipper_services(int n) const;
};

Reduced reduce(const Instance& instance, const RhoTable& rho);
MilpModel build_model(const Reduced& data);
// Succeeds only when `model` is exactly what build_model would produce.
std::optional<Reduced> decode(const MilpModel& model);

UpperBound upper_bound(const Reduced& data);

}  // namespace biloc::detail
