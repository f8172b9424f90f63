#include "biloc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "biloc/error.hpp"
#include "biloc/milp.hpp"
#include "structure.hpp"

namespace biloc {

namespace detail {

UpperBound upper_bound(const Reduced& d) {
  UpperBound ub;
  double total = 0.0;
  for (int n = 0; n < d.N; ++n) {
    for (int k = 0; k < static_cast<int>(d.services[n].size()); ++k) {
      BestOffer best{n, k, -1, -1, 0.0};
      for (int m : d.services[n][k]) {
        for (int p = 0; p < d.prices(n, m); ++p) {
          double v = d.revenue[n][k][m][p];
          for (int j : d.members[n][k]) {
            double cheapest = std::numeric_limits<double>::infinity();
            for (int i = 0; i < d.I; ++i) cheapest = std::min(cheapest, d.cost_at(i, j, m, p));
            v -= cheapest;
          }
          if (v > best.value) best = {n, k, m, p, v};
        }
      }
      if (best.service >= 0) {
        total += best.value;
        ub.offers.push_back(best);
      }
    }
  }
  if (d.I == 0) {
    ub.value = 0.0;
    ub.offers.clear();
  } else {
    ub.value = total - *std::min_element(d.fixed_cost.begin(), d.fixed_cost.end());
  }
  ub.trivial = ub.value <= kTrivialThreshold;
  return ub;
}

}  // namespace detail

UpperBound profit_upper_bound_detail(const Instance& instance, const RhoTable& rho) {
  return detail::upper_bound(detail::reduce(instance, rho));
}

double profit_upper_bound(const Instance& instance, const RhoTable& rho) {
  return profit_upper_bound_detail(instance, rho).value;
}

namespace {

constexpr double kIntegrality = 1e-6;
constexpr double kFeasibility = 1e-7;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

std::vector<std::string> check_solution(const Instance& inst, const Solution& sol) {
  std::vector<std::string> out;
  const int I = inst.facility_count(), J = inst.customer_count(), N = inst.shipper_count();
  std::set<std::string> known;

  auto binary = [&](const std::string& name) {
    known.insert(name);
    const double v = sol.value(name);
    if (std::min(std::abs(v), std::abs(v - 1.0)) > kIntegrality) out.push_back(name + " = " + fmt(v) + " is not binary");
    return v;
  };

  std::vector<double> r(I);
  for (int i = 0; i < I; ++i) r[i] = binary(open_name(i));

  for (int n = 0; n < N; ++n) {
    double offers = 0.0;
    for (int m : inst.shipper_services(n)) {
      double prices = 0.0;
      for (std::size_t p = 0; p < inst.ladder(n, m).size(); ++p) prices += binary(price_name(n, m, static_cast<int>(p)));
      if (prices > 1.0 + kFeasibility) {
        out.push_back("one price: shipper " + std::to_string(n) + ", service " + std::to_string(m) + " has " +
                      fmt(prices) + " prices");
      }
      offers += prices;
    }
    if (offers > inst.category_count(n) + kFeasibility) {
      out.push_back("offer cap: shipper " + std::to_string(n) + " has " + fmt(offers) + " offers for " +
                    std::to_string(inst.category_count(n)) + " categories");
    }
    for (int k = 0; k < inst.category_count(n); ++k) {
      double services = 0.0;
      for (int m : inst.category_services(n, k)) {
        const double z = binary(service_name(n, k, m));
        services += z;
        double priced = 0.0;
        for (std::size_t p = 0; p < inst.ladder(n, m).size(); ++p) priced += sol.value(price_name(n, m, static_cast<int>(p)));
        if (z > priced + kFeasibility) out.push_back("service priced: " + service_name(n, k, m) + " has no price");
      }
      if (services > 1.0 + kFeasibility) {
        out.push_back("one service: shipper " + std::to_string(n) + ", category " + std::to_string(k) + " has " +
                      fmt(services) + " services");
      }
    }
    for (int m : inst.shipper_services(n)) {
      double demand = 0.0;
      for (int k = 0; k < inst.category_count(n); ++k) {
        if (inst.offers(n, k, m)) demand += inst.category_demand(n, k) * sol.value(service_name(n, k, m));
      }
      double required = 0.0;
      const auto& ladder = inst.ladder(n, m);
      for (std::size_t p = 0; p < ladder.size(); ++p) required += ladder[p].min_demand * sol.value(price_name(n, m, static_cast<int>(p)));
      if (demand < required - kFeasibility * (1.0 + required)) {
        out.push_back("min demand: shipper " + std::to_string(n) + ", service " + std::to_string(m) + " serves " +
                      fmt(demand) + " < " + fmt(required));
      }
    }
  }

  std::vector<double> load(I, 0.0);
  for (int j = 0; j < J; ++j) {
    const auto& c = inst.customers[j];
    for (int m : inst.customer_services(j)) {
      double assigned = 0.0;
      for (int i = 0; i < I; ++i) {
        const std::string name = assign_name(i, j, m);
        known.insert(name);
        const double w = sol.value(name);
        if (w < -kFeasibility || w > 1.0 + kFeasibility) out.push_back(name + " = " + fmt(w) + " outside [0, 1]");
        assigned += w;
        load[i] += inst.service_levels[m].gamma * c.demand * w;
      }
      const double z = sol.value(service_name(c.shipper, c.category, m));
      if (std::abs(assigned - z) > kFeasibility) {
        out.push_back("assign: customer " + std::to_string(j) + ", service " + std::to_string(m) + " assigned " +
                      fmt(assigned) + " of " + fmt(z));
      }
      for (std::size_t p = 0; p < inst.ladder(c.shipper, m).size(); ++p) {
        for (int i = 0; i < I; ++i) known.insert(cost_product_name(i, j, m, static_cast<int>(p)));
      }
    }
    for (int i = 0; i < I; ++i) {
      double total = 0.0;
      for (int m : inst.customer_services(j)) total += sol.value(assign_name(i, j, m));
      if (total > r[i] + kFeasibility) {
        out.push_back("open only: customer " + std::to_string(j) + " uses closed facility " + std::to_string(i));
      }
    }
  }
  for (int i = 0; i < I; ++i) {
    const double cap = inst.facilities[i].capacity * r[i];
    if (load[i] > cap + kFeasibility * (1.0 + inst.facilities[i].capacity)) {
      out.push_back("capacity: facility " + std::to_string(i) + " carries " + fmt(load[i]) + " > " + fmt(cap));
    }
  }
  for (int n = 0; n < N; ++n) {
    for (int k = 0; k < inst.category_count(n); ++k) {
      for (int m : inst.category_services(n, k)) {
        for (std::size_t p = 0; p < inst.ladder(n, m).size(); ++p) known.insert(offer_product_name(n, k, m, static_cast<int>(p)));
      }
    }
  }
  for (const auto& [name, v] : sol.values) {
    if (!known.count(name) && v != 0.0) out.push_back("unknown variable " + name);
  }
  return out;
}

Evaluation evaluate_detail(const Instance& inst, const RhoTable& rho, const Solution& sol) {
  const auto problems = check_solution(inst, sol);
  if (!problems.empty()) {
    std::string msg = "infeasible solution (" + std::to_string(problems.size()) + " violations): " + problems.front();
    for (std::size_t q = 1; q < problems.size() && q < 5; ++q) msg += "; " + problems[q];
    throw FeasibilityError(msg);
  }
  Evaluation e;
  for (int i = 0; i < inst.facility_count(); ++i) e.fixed_cost += inst.facilities[i].fixed_cost * sol.value(open_name(i));
  for (int n = 0; n < inst.shipper_count(); ++n) {
    for (int k = 0; k < inst.category_count(n); ++k) {
      const double dk = inst.category_demand(n, k);
      for (int m : inst.category_services(n, k)) {
        const double z = sol.value(service_name(n, k, m));
        for (std::size_t p = 0; p < inst.ladder(n, m).size(); ++p) {
          const int pl = static_cast<int>(p);
          const double y = sol.value(price_name(n, m, pl));
          e.revenue += rho.at(n, k, m, pl) * dk * inst.price(n, m, pl) * y * z;
        }
      }
    }
  }
  for (int j = 0; j < inst.customer_count(); ++j) {
    const auto& c = inst.customers[j];
    for (int m : inst.customer_services(j)) {
      for (std::size_t p = 0; p < inst.ladder(c.shipper, m).size(); ++p) {
        const int pl = static_cast<int>(p);
        const double y = sol.value(price_name(c.shipper, m, pl));
        if (y == 0.0) continue;
        const double rh = rho.at(c.shipper, c.category, m, pl);
        for (int i = 0; i < inst.facility_count(); ++i) e.cost += rh * inst.cost(i, j, m) * sol.value(assign_name(i, j, m)) * y;
      }
    }
  }
  e.objective = e.revenue - e.cost - e.fixed_cost;
  return e;
}

double evaluate(const Instance& instance, const RhoTable& rho, const Solution& solution) {
  return evaluate_detail(instance, rho, solution).objective;
}

}  // namespace biloc
