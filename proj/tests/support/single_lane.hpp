#pragma once

// One facility, one customer, one service, one price: rho = 1, d = 10, q = 2,
// c = 5, f = 4, so serving earns 10 * 2 - 5 - 4 = 11.

#include "biloc/instance.hpp"

namespace biloc::testing {

inline Instance single_lane(double capacity = 100.0) {
  Instance inst;
  inst.facilities = {{capacity, 4.0, {0.0, 0.0}}};
  inst.customers = {{0, 0, 10.0, {0.0, 0.0}}};
  inst.shippers = {{{{0}}}};
  inst.service_levels = {{1.0, 1.0}};
  inst.price_ladders = {{0, 0, {{2.0, 0.0}}}};
  inst.costs = {5.0};
  inst.choice.L = {{{4.5}}};
  inst.choice.L_optout = {{3.0}};
  return inst;
}

}  // namespace biloc::testing
