#include "biloc/instance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "biloc/error.hpp"

namespace biloc {

namespace {

const std::vector<PriceEntry> kNoPrices;

std::size_t cost_index(const Instance& inst, int i, int j, int m) {
  if (i < 0 || i >= inst.facility_count() || j < 0 || j >= inst.customer_count() || m < 0 ||
      m >= inst.service_count()) {
    std::ostringstream os;
    os << "cost index (" << i << "," << j << "," << m << ") out of range";
    throw IndexError(os.str());
  }
  return (static_cast<std::size_t>(i) * inst.customers.size() + static_cast<std::size_t>(j)) *
             inst.service_levels.size() +
         static_cast<std::size_t>(m);
}

}  // namespace

int Instance::category_count(int n) const {
  if (n < 0 || n >= shipper_count()) throw IndexError("shipper " + std::to_string(n) + " out of range");
  return shippers[n].category_count();
}

double Instance::cost(int i, int j, int m) const { return costs.at(cost_index(*this, i, j, m)); }

double& Instance::cost(int i, int j, int m) { return costs.at(cost_index(*this, i, j, m)); }

double Instance::category_demand(int n, int k) const {
  double total = 0.0;
  for (const auto& c : customers) {
    if (c.shipper == n && c.category == k) total += c.demand;
  }
  return total;
}

std::vector<int> Instance::category_customers(int n, int k) const {
  std::vector<int> out;
  for (int j = 0; j < customer_count(); ++j) {
    if (customers[j].shipper == n && customers[j].category == k) out.push_back(j);
  }
  return out;
}

const std::vector<int>& Instance::category_services(int n, int k) const {
  if (k < 0 || k >= category_count(n)) {
    throw IndexError("category " + std::to_string(k) + " of shipper " + std::to_string(n) + " out of range");
  }
  return shippers[n].category_services[k];
}

std::vector<int> Instance::shipper_services(int n) const {
  std::vector<int> out;
  for (int k = 0; k < category_count(n); ++k) {
    for (int m : shippers[n].category_services[k]) out.push_back(m);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

const std::vector<int>& Instance::customer_services(int j) const {
  const auto& c = customers.at(j);
  return category_services(c.shipper, c.category);
}

bool Instance::offers(int n, int k, int m) const {
  const auto& ms = category_services(n, k);
  return std::find(ms.begin(), ms.end(), m) != ms.end();
}

const std::vector<PriceEntry>& Instance::ladder(int n, int m) const {
  for (const auto& l : price_ladders) {
    if (l.shipper == n && l.service == m) return l.entries;
  }
  return kNoPrices;
}

double Instance::price(int n, int m, int p) const {
  const auto& entries = ladder(n, m);
  if (p < 0 || p >= static_cast<int>(entries.size())) {
    std::ostringstream os;
    os << "price level " << p << " not available for shipper " << n << ", service " << m;
    throw IndexError(os.str());
  }
  return entries[p].price;
}

double Instance::total_capacity() const {
  double total = 0.0;
  for (const auto& f : facilities) total += f.capacity;
  return total;
}

double Instance::total_demand() const {
  double total = 0.0;
  for (const auto& c : customers) total += c.demand;
  return total;
}

Instance scale_to_ratio(const Instance& instance, double ratio) {
  if (!(ratio > 0.0) || !std::isfinite(ratio)) {
    throw ParameterError("capacity ratio must be positive, got " + std::to_string(ratio));
  }
  Instance out = instance;
  const double current = instance.capacity_ratio();
  if (current == ratio) return out;
  const double factor = ratio / current;
  for (auto& f : out.facilities) f.capacity *= factor;
  return out;
}

std::vector<std::string> validate(const Instance& inst) {
  std::vector<std::string> v;
  auto add = [&v](const std::string& s) { v.push_back(s); };
  const int I = inst.facility_count();
  const int J = inst.customer_count();
  const int N = inst.shipper_count();
  const int M = inst.service_count();

  for (int i = 0; i < I; ++i) {
    const auto& f = inst.facilities[i];
    if (!(f.capacity > 0.0)) add("facility " + std::to_string(i) + ": capacity must be > 0");
    if (!(f.fixed_cost >= 0.0)) add("facility " + std::to_string(i) + ": fixed cost must be >= 0");
  }
  for (int m = 0; m < M; ++m) {
    const auto& s = inst.service_levels[m];
    if (!(s.gamma >= 1.0)) add("service " + std::to_string(m) + ": gamma must be >= 1");
    if (!(s.cost_multiplier >= 1.0)) add("service " + std::to_string(m) + ": cost multiplier must be >= 1");
  }
  for (int n = 0; n < N; ++n) {
    const auto& sh = inst.shippers[n];
    for (int k = 0; k < sh.category_count(); ++k) {
      for (int m : sh.category_services[k]) {
        if (m < 0 || m >= M) {
          add("shipper " + std::to_string(n) + " category " + std::to_string(k) + ": service " +
              std::to_string(m) + " out of range");
        }
      }
    }
  }
  bool customers_ok = true;
  for (int j = 0; j < J; ++j) {
    const auto& c = inst.customers[j];
    if (!(c.demand > 0.0)) add("customer " + std::to_string(j) + ": demand must be > 0");
    if (c.shipper < 0 || c.shipper >= N) {
      add("customer " + std::to_string(j) + ": shipper " + std::to_string(c.shipper) + " does not exist");
      customers_ok = false;
    } else if (c.category < 0 || c.category >= inst.shippers[c.shipper].category_count()) {
      add("customer " + std::to_string(j) + ": category " + std::to_string(c.category) + " of shipper " +
          std::to_string(c.shipper) + " does not exist");
      customers_ok = false;
    }
  }
  for (std::size_t l = 0; l < inst.price_ladders.size(); ++l) {
    const auto& lad = inst.price_ladders[l];
    const std::string where = "price ladder " + std::to_string(l);
    if (lad.shipper < 0 || lad.shipper >= N) add(where + ": shipper out of range");
    if (lad.service < 0 || lad.service >= M) add(where + ": service out of range");
    for (std::size_t p = 0; p < lad.entries.size(); ++p) {
      if (!(lad.entries[p].price > 0.0)) add(where + ": price " + std::to_string(p) + " must be > 0");
      if (!(lad.entries[p].min_demand >= 0.0)) add(where + ": min demand " + std::to_string(p) + " must be >= 0");
      if (p > 0 && !(lad.entries[p].price > lad.entries[p - 1].price)) {
        add(where + ": prices must be strictly increasing");
      }
    }
    for (std::size_t o = 0; o < l; ++o) {
      if (inst.price_ladders[o].shipper == lad.shipper && inst.price_ladders[o].service == lad.service) {
        add(where + ": duplicate ladder for shipper " + std::to_string(lad.shipper) + ", service " +
            std::to_string(lad.service));
      }
    }
  }
  const std::size_t expected_costs = static_cast<std::size_t>(I) * J * M;
  if (inst.costs.size() != expected_costs) {
    add("costs: expected " + std::to_string(expected_costs) + " entries, found " + std::to_string(inst.costs.size()));
  } else if (customers_ok) {
    for (int i = 0; i < I; ++i) {
      for (int j = 0; j < J; ++j) {
        for (int m : inst.customer_services(j)) {
          if (m < 0 || m >= M) continue;
          const double c = inst.cost(i, j, m);
          if (!(c >= 0.0) || !std::isfinite(c)) {
            add("cost (" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(m) +
                ") must be finite and >= 0");
          }
        }
      }
    }
  }

  const auto& ch = inst.choice;
  if (!(ch.beta > 0.0) || !std::isfinite(ch.beta)) add("choice model: beta must be > 0");
  if (!std::isfinite(ch.alpha)) add("choice model: alpha must be finite");
  if (static_cast<int>(ch.L.size()) != N || static_cast<int>(ch.L_optout.size()) != N) {
    add("choice model: L and L_optout must have one entry per shipper");
  } else {
    for (int n = 0; n < N; ++n) {
      const int K = inst.shippers[n].category_count();
      if (static_cast<int>(ch.L[n].size()) != K || static_cast<int>(ch.L_optout[n].size()) != K) {
        add("choice model: shipper " + std::to_string(n) + " needs one L row per category");
        continue;
      }
      for (int k = 0; k < K; ++k) {
        if (static_cast<int>(ch.L[n][k].size()) != M) {
          add("choice model: L[" + std::to_string(n) + "][" + std::to_string(k) + "] needs one value per service");
        }
      }
    }
  }
  return v;
}

}  // namespace biloc
