#include <algorithm>
#include <cmath>
#include <map>

#include "biloc/error.hpp"
#include "biloc/milp.hpp"
#include "biloc/simplex.hpp"
#include "biloc/solver.hpp"

namespace biloc {

namespace {

struct PriceSlot {
  int shipper = 0;
  int service = 0;
  int levels = 0;
};

struct Served {
  int shipper = 0;
  int category = 0;
  int service = 0;
  int price = 0;
};

// Assignment cost of the served categories with facilities `mask` open, as a
// plain LP over w.
struct Assignment {
  bool feasible = false;
  double cost = 0.0;
  std::map<std::pair<int, int>, double> share;  // (i, j)
};

Assignment assign(const Instance& inst, const RhoTable& rho, unsigned mask, const std::vector<Served>& served) {
  Assignment out;
  if (served.empty()) {
    out.feasible = true;
    return out;
  }
  if (mask == 0) return out;
  const int I = inst.facility_count();
  LpProblem lp;
  lp.maximize = false;
  std::vector<std::vector<std::pair<int, double>>> capacity(I);
  std::vector<std::tuple<int, int, int>> columns;  // (i, j, column)
  for (const auto& s : served) {
    const double r = rho.at(s.shipper, s.category, s.service, s.price);
    const double gamma = inst.service_levels[s.service].gamma;
    for (int j : inst.category_customers(s.shipper, s.category)) {
      std::vector<std::pair<int, double>> row;
      for (int i = 0; i < I; ++i) {
        if (!(mask >> i & 1u)) continue;
        const int col = lp.add_column(r * inst.cost(i, j, s.service), 0.0, 1.0);
        row.emplace_back(col, 1.0);
        capacity[i].emplace_back(col, gamma * inst.customers[j].demand);
        columns.emplace_back(i, j, col);
      }
      lp.add_row(std::move(row), Sense::eq, 1.0);
    }
  }
  for (int i = 0; i < I; ++i) {
    if (!capacity[i].empty()) lp.add_row(std::move(capacity[i]), Sense::le, inst.facilities[i].capacity);
  }
  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::optimal) return out;
  out.feasible = true;
  out.cost = sol.objective;
  for (const auto& [i, j, col] : columns) out.share[{i, j}] = std::clamp(sol.values[col], 0.0, 1.0);
  return out;
}

}  // namespace

Solution enumerate_oracle(const Instance& inst, const RhoTable& rho, int max_binaries) {
  const auto problems = validate(inst);
  if (!problems.empty()) throw ParameterError("invalid instance: " + problems.front());
  const int I = inst.facility_count(), N = inst.shipper_count();

  std::vector<PriceSlot> slots;
  int binaries = I;
  for (int n = 0; n < N; ++n) {
    for (int m : inst.shipper_services(n)) {
      const int levels = static_cast<int>(inst.ladder(n, m).size());
      slots.push_back({n, m, levels});
      binaries += levels;
    }
    for (int k = 0; k < inst.category_count(n); ++k) binaries += static_cast<int>(inst.category_services(n, k).size());
  }
  if (binaries > max_binaries) {
    throw ParameterError("instance has " + std::to_string(binaries) + " first-stage binaries, limit is " +
                         std::to_string(max_binaries));
  }

  std::vector<std::pair<int, int>> categories;
  for (int n = 0; n < N; ++n) {
    for (int k = 0; k < inst.category_count(n); ++k) categories.emplace_back(n, k);
  }

  Solution best;
  best.method = "enumerate";
  bool have = false;
  unsigned best_mask = 0;
  std::vector<Served> best_served;
  std::vector<int> best_price;
  Assignment best_assignment;
  std::map<std::pair<unsigned, std::vector<int>>, Assignment> cache;

  std::vector<int> price(slots.size(), -1);  // chosen level per slot
  std::vector<int> service(categories.size(), -1);
  auto slot_of = [&](int n, int m) {
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if (slots[s].shipper == n && slots[s].service == m) return static_cast<int>(s);
    }
    return -1;
  };

  auto evaluate = [&](unsigned mask) {
    // offer cap and minimum demand
    for (int n = 0; n < N; ++n) {
      int offers = 0;
      for (std::size_t s = 0; s < slots.size(); ++s) {
        if (slots[s].shipper == n && price[s] >= 0) ++offers;
      }
      if (offers > inst.category_count(n)) return;
    }
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if (price[s] < 0) continue;
      double demand = 0.0;
      for (std::size_t c = 0; c < categories.size(); ++c) {
        if (categories[c].first == slots[s].shipper && service[c] == slots[s].service) {
          demand += inst.category_demand(categories[c].first, categories[c].second);
        }
      }
      if (demand < inst.ladder(slots[s].shipper, slots[s].service)[price[s]].min_demand) return;
    }
    std::vector<Served> served;
    std::vector<int> key;
    double revenue = 0.0;
    for (std::size_t c = 0; c < categories.size(); ++c) {
      const int m = service[c];
      if (m < 0) {
        key.push_back(-1);
        continue;
      }
      const auto [n, k] = categories[c];
      const int p = price[slot_of(n, m)];
      served.push_back({n, k, m, p});
      key.push_back(m * 1000 + p);
      revenue += rho.at(n, k, m, p) * inst.category_demand(n, k) * inst.price(n, m, p);
    }
    auto it = cache.find({mask, key});
    if (it == cache.end()) it = cache.emplace(std::make_pair(mask, key), assign(inst, rho, mask, served)).first;
    ++best.nodes;
    const Assignment& a = it->second;
    if (!a.feasible) return;
    double fixed = 0.0;
    for (int i = 0; i < I; ++i) {
      if (mask >> i & 1u) fixed += inst.facilities[i].fixed_cost;
    }
    const double objective = revenue - a.cost - fixed;
    if (have && objective <= best.objective) return;
    have = true;
    best.objective = objective;
    best.revenue = revenue;
    best.cost = a.cost;
    best.fixed_cost = fixed;
    best_mask = mask;
    best_served = served;
    best_price = price;
    best_assignment = a;
  };

  auto choose_service = [&](auto&& self, std::size_t c, unsigned mask) -> void {
    if (c == categories.size()) {
      evaluate(mask);
      return;
    }
    service[c] = -1;
    self(self, c + 1, mask);
    const auto [n, k] = categories[c];
    for (int m : inst.category_services(n, k)) {
      if (price[slot_of(n, m)] < 0) continue;
      service[c] = m;
      self(self, c + 1, mask);
    }
    service[c] = -1;
  };
  auto choose_price = [&](auto&& self, std::size_t s, unsigned mask) -> void {
    if (s == slots.size()) {
      choose_service(choose_service, 0, mask);
      return;
    }
    price[s] = -1;
    self(self, s + 1, mask);
    for (int p = 0; p < slots[s].levels; ++p) {
      price[s] = p;
      self(self, s + 1, mask);
    }
    price[s] = -1;
  };
  for (unsigned mask = 0; mask < (1u << I); ++mask) choose_price(choose_price, 0, mask);

  if (!have) {
    best.status = SolveStatus::infeasible;
    return best;
  }
  best.status = SolveStatus::optimal;
  best.bound = best.objective;
  for (int i = 0; i < I; ++i) {
    if (best_mask >> i & 1u) best.values[open_name(i)] = 1.0;
  }
  for (std::size_t s = 0; s < slots.size(); ++s) {
    if (best_price[s] >= 0) best.values[price_name(slots[s].shipper, slots[s].service, best_price[s])] = 1.0;
  }
  for (const auto& sv : best_served) {
    best.values[service_name(sv.shipper, sv.category, sv.service)] = 1.0;
    best.values[offer_product_name(sv.shipper, sv.category, sv.service, sv.price)] = 1.0;
    for (int j : inst.category_customers(sv.shipper, sv.category)) {
      for (int i = 0; i < I; ++i) {
        auto it = best_assignment.share.find({i, j});
        if (it == best_assignment.share.end() || it->second == 0.0) continue;
        best.values[assign_name(i, j, sv.service)] = it->second;
        best.values[cost_product_name(i, j, sv.service, sv.price)] = it->second;
      }
    }
  }
  return best;
}

}  // namespace biloc
