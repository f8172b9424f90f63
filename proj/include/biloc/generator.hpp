#pragma once

#include <cstdint>

#include "biloc/instance.hpp"

namespace biloc {

// Parameters of the seeded CFLP-style instance generator.
//
// Facilities and customers are placed uniformly on the unit square. The base
// cost of serving customer j from facility i is distance * haul_rate * d_j and
// service level m multiplies it by 1 + 0.05 m. Capacities are drawn uniformly
// and rescaled so that total capacity / total demand equals `ratio`; fixed
// costs follow U[0.5, 1.5] * fixed_cost_scale * sqrt(u_i). Customers are
// dealt round-robin to shippers, then to categories.
struct GeneratorParams {
  int facilities = 4;
  int customers = 48;
  int shippers = 2;
  int categories = 3;  // per shipper
  int services = 3;
  int prices = 5;
  double ratio = 2.0;
  double price_min = 15.0;
  double price_max = 23.0;
  std::uint64_t seed = 963490972;

  int demand_min = 5;
  int demand_max = 35;
  double haul_rate = 30.0;
  double fixed_cost_scale = 40.0;
  double min_demand = 0.0;  // l_n^{mp} for every ladder entry
  double gamma = 1.0;       // capacity scale of every service level

  // Demand model: U = alpha * q + service_preference, opt-out = optout_utility.
  double alpha = -0.1;
  double beta = 1.0;
  double service_preference = 4.5;
  double optout_utility = 3.0;
};

// Throws ParameterError on the first invalid field.
void check(const GeneratorParams& params);

// Equal price steps between price_min and price_max (a single price when
// prices == 1).
std::vector<double> price_levels(const GeneratorParams& params);

Instance generate(const GeneratorParams& params);

}  // namespace biloc
