#include "biloc/generator.hpp"

#include <cmath>
#include <random>
#include <string>

#include "biloc/error.hpp"

namespace biloc {

namespace {

// Uniform doubles from the raw 64-bit engine output so the stream does not
// depend on the standard library's distribution implementations.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : engine_(seed) {}

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double range(double lo, double hi) { return lo + (hi - lo) * unit(); }
  int integer(int lo, int hi) {
    const int span = hi - lo + 1;
    const int v = lo + static_cast<int>(unit() * span);
    return v > hi ? hi : v;
  }

 private:
  std::mt19937_64 engine_;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw ParameterError("generator: " + message);
}

}  // namespace

void check(const GeneratorParams& p) {
  require(p.facilities >= 1, "facilities must be >= 1");
  require(p.customers >= 1, "customers must be >= 1");
  require(p.shippers >= 1, "shippers must be >= 1");
  require(p.categories >= 1, "categories must be >= 1");
  require(p.services >= 1, "services must be >= 1");
  require(p.prices >= 1, "prices must be >= 1");
  require(p.customers >= p.shippers * p.categories,
          "customers must be at least shippers * categories so every category is populated");
  require(p.ratio > 0.0 && std::isfinite(p.ratio), "ratio must be > 0");
  require(p.price_min > 0.0, "price_min must be > 0");
  require(p.price_min < p.price_max, "price_min must be < price_max");
  require(p.demand_min >= 1 && p.demand_min <= p.demand_max, "demand range must satisfy 1 <= min <= max");
  require(p.haul_rate >= 0.0, "haul_rate must be >= 0");
  require(p.fixed_cost_scale >= 0.0, "fixed_cost_scale must be >= 0");
  require(p.min_demand >= 0.0, "min_demand must be >= 0");
  require(p.gamma >= 1.0, "gamma must be >= 1");
  require(p.beta > 0.0, "beta must be > 0");
}

std::vector<double> price_levels(const GeneratorParams& p) {
  if (p.prices == 1) return {p.price_min};
  std::vector<double> out(p.prices);
  const double step = (p.price_max - p.price_min) / (p.prices - 1);
  for (int i = 0; i < p.prices; ++i) out[i] = p.price_min + step * i;
  out.back() = p.price_max;
  return out;
}

Instance generate(const GeneratorParams& p) {
  check(p);
  Uniform rng(p.seed);
  Instance inst;
  inst.meta.seed = p.seed;

  inst.facilities.resize(p.facilities);
  std::vector<double> raw_capacity(p.facilities);
  for (int i = 0; i < p.facilities; ++i) {
    inst.facilities[i].location = {rng.unit(), rng.unit()};
    raw_capacity[i] = rng.range(0.5, 1.5);
  }

  inst.customers.resize(p.customers);
  for (int j = 0; j < p.customers; ++j) {
    auto& c = inst.customers[j];
    c.location = {rng.unit(), rng.unit()};
    c.demand = rng.integer(p.demand_min, p.demand_max);
    c.shipper = j % p.shippers;
    c.category = (j / p.shippers) % p.categories;
  }

  const double demand = inst.total_demand();
  double raw_total = 0.0;
  for (double r : raw_capacity) raw_total += r;
  const double scale = p.ratio * demand / raw_total;
  for (int i = 0; i < p.facilities; ++i) {
    auto& f = inst.facilities[i];
    f.capacity = raw_capacity[i] * scale;
    f.fixed_cost = rng.range(0.5, 1.5) * p.fixed_cost_scale * std::sqrt(f.capacity);
  }

  inst.service_levels.resize(p.services);
  for (int m = 0; m < p.services; ++m) inst.service_levels[m] = {p.gamma, 1.0 + 0.05 * m};

  std::vector<int> all_services(p.services);
  for (int m = 0; m < p.services; ++m) all_services[m] = m;
  inst.shippers.assign(p.shippers, Shipper{std::vector<std::vector<int>>(p.categories, all_services)});

  const auto levels = price_levels(p);
  for (int n = 0; n < p.shippers; ++n) {
    for (int m = 0; m < p.services; ++m) {
      PriceLadder ladder{n, m, {}};
      for (double q : levels) ladder.entries.push_back({q, p.min_demand});
      inst.price_ladders.push_back(std::move(ladder));
    }
  }

  inst.costs.resize(static_cast<std::size_t>(p.facilities) * p.customers * p.services);
  for (int i = 0; i < p.facilities; ++i) {
    for (int j = 0; j < p.customers; ++j) {
      const auto& a = inst.facilities[i].location;
      const auto& b = inst.customers[j].location;
      const double base = std::hypot(a.x - b.x, a.y - b.y) * p.haul_rate * inst.customers[j].demand;
      for (int m = 0; m < p.services; ++m) inst.cost(i, j, m) = base * inst.service_levels[m].cost_multiplier;
    }
  }

  inst.choice.alpha = p.alpha;
  inst.choice.beta = p.beta;
  inst.choice.deterministic = false;
  inst.choice.L.assign(p.shippers, std::vector<std::vector<double>>(
                                       p.categories, std::vector<double>(p.services, p.service_preference)));
  inst.choice.L_optout.assign(p.shippers, std::vector<double>(p.categories, p.optout_utility));
  return inst;
}

}  // namespace biloc
