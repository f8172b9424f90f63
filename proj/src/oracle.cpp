#include "biloc/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

#include "biloc/error.hpp"
#include "biloc/transport.hpp"
#include "format.hpp"

namespace biloc {

const char* to_string(SimulationMode mode) {
  switch (mode) {
    case SimulationMode::reduced_consistent:
      return "reduced";
    case SimulationMode::reallocation:
      return "reallocation";
  }
  return "reduced";
}

SimulationMode simulation_mode_from_string(std::string_view text) {
  if (text == "reduced" || text == "reduced-consistent") return SimulationMode::reduced_consistent;
  if (text == "reallocation" || text == "per-scenario-reallocation") return SimulationMode::reallocation;
  throw ParameterError("unknown simulation mode '" + std::string(text) + "'");
}

namespace {

constexpr std::size_t kBlock = 4096;

struct Category {
  int shipper = 0;
  int category = 0;
  int service = 0;
  double price = 0.0;
  double demand = 0.0;
  double margin = 0.0;       // d_k q minus the first-stage assignment cost
  double v_offer = 0.0;
  double v_optout = 0.0;
  std::vector<int> members;
};

struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }
  void merge(const Moments& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    const double n = static_cast<double>(count + o.count);
    const double delta = o.mean - mean;
    mean += delta * static_cast<double>(o.count) / n;
    m2 += o.m2 + delta * delta * static_cast<double>(count) * static_cast<double>(o.count) / n;
    count += o.count;
  }
};

struct BlockResult {
  Moments moments;
  std::size_t infeasible = 0;
  std::vector<std::vector<std::size_t>> violations;  // [n][m]
  std::vector<ScenarioOutcome> outcomes;
};

class Simulator {
 public:
  Simulator(const Instance& inst, const FirstStage& fs, const ScenarioSet& scenarios, SimulationMode mode)
      : inst_(inst), fs_(fs), scenarios_(scenarios), mode_(mode) {
    const int I = inst.facility_count(), N = inst.shipper_count(), M = inst.service_count();
    if (static_cast<int>(fs.open.size()) != I || static_cast<int>(fs.price.size()) != N ||
        static_cast<int>(fs.service.size()) != N) {
      throw ParameterError("first stage does not match the instance dimensions");
    }
    for (int i = 0; i < I; ++i) {
      if (fs.open[i]) fixed_ += inst.facilities[i].fixed_cost;
    }
    for (int n = 0; n < N; ++n) {
      if (static_cast<int>(fs.service[n].size()) != inst.category_count(n) || static_cast<int>(fs.price[n].size()) != M) {
        throw ParameterError("first stage does not match the instance dimensions");
      }
      for (int k = 0; k < inst.category_count(n); ++k) {
        const int m = fs.service[n][k];
        if (m < 0) continue;
        if (!inst.offers(n, k, m) || fs.price[n][m] < 0) {
          throw ParameterError("category " + std::to_string(k) + " of shipper " + std::to_string(n) +
                               " is served without a priced service");
        }
        Category c;
        c.shipper = n;
        c.category = k;
        c.service = m;
        c.price = inst.price(n, m, fs.price[n][m]);
        c.demand = inst.category_demand(n, k);
        c.members = inst.category_customers(n, k);
        c.margin = c.demand * c.price;
        for (int j : c.members) {
          for (int i = 0; i < I; ++i) c.margin -= inst.cost(i, j, m) * fs.share[i][j];
        }
        c.v_offer = deterministic_utility(inst, n, k, m, fs.price[n][m]);
        c.v_optout = optout_utility(inst, n, k);
        categories_.push_back(std::move(c));
      }
    }
  }

  BlockResult block(std::size_t first, std::size_t last, bool keep) const {
    const int N = inst_.shipper_count(), M = inst_.service_count();
    BlockResult out;
    out.violations.assign(N, std::vector<std::size_t>(M, 0));
    std::map<std::vector<bool>, std::pair<bool, double>> cache;
    std::vector<bool> accept(categories_.size());
    std::vector<std::vector<double>> accepted_demand(N, std::vector<double>(M, 0.0));
    for (std::size_t s = first; s < last; ++s) {
      for (auto& row : accepted_demand) std::fill(row.begin(), row.end(), 0.0);
      for (std::size_t c = 0; c < categories_.size(); ++c) {
        const auto& cat = categories_[c];
        const double u = cat.v_offer + scenarios_.epsilon(s, cat.shipper, cat.category, cat.service);
        const double u0 = cat.v_optout + scenarios_.epsilon(s, cat.shipper, cat.category, ScenarioSet::kOptOut);
        accept[c] = accept_rule(u, u0) == Decision::accept;
        if (accept[c]) accepted_demand[cat.shipper][cat.service] += cat.demand;
      }

      ScenarioOutcome o;
      o.scenario = s;
      if (keep) {
        o.accepted.resize(N);
        o.contribution.resize(N);
        o.violation.assign(N, std::vector<char>(M, 0));
        for (int n = 0; n < N; ++n) {
          o.accepted[n].assign(inst_.category_count(n), -1);
          o.contribution[n].assign(inst_.category_count(n), 0.0);
        }
      }
      double profit = -fixed_;
      if (mode_ == SimulationMode::reduced_consistent) {
        for (std::size_t c = 0; c < categories_.size(); ++c) {
          if (!accept[c]) continue;
          profit += categories_[c].margin;
          if (keep) {
            o.accepted[categories_[c].shipper][categories_[c].category] = categories_[c].service;
            o.contribution[categories_[c].shipper][categories_[c].category] = categories_[c].margin;
          }
        }
      } else {
        auto it = cache.find(accept);
        if (it == cache.end() || keep) {
          std::vector<std::vector<double>> share;
          const auto r = reallocate(accept, keep ? &share : nullptr, keep ? &o : nullptr);
          it = cache.insert_or_assign(accept, r).first;
          if (keep) o.share = std::move(share);
        }
        o.feasible = it->second.first;
        profit += it->second.second;
      }
      for (int n = 0; n < N; ++n) {
        for (int m = 0; m < M; ++m) {
          const int p = fs_.price[n][m];
          if (p < 0) continue;
          const bool missed = accepted_demand[n][m] < inst_.ladder(n, m)[p].min_demand;
          if (missed) ++out.violations[n][m];
          if (keep) o.violation[n][m] = missed ? 1 : 0;
        }
      }
      if (o.feasible) {
        out.moments.add(profit);
      } else {
        ++out.infeasible;
      }
      if (keep) {
        o.profit = profit;
        out.outcomes.push_back(std::move(o));
      }
    }
    return out;
  }

 private:
  // Revenue minus the cheapest assignment of the accepting customers.
  std::pair<bool, double> reallocate(const std::vector<bool>& accept, std::vector<std::vector<double>>* share,
                                     ScenarioOutcome* o) const {
    const int I = inst_.facility_count();
    std::vector<int> facilities;
    for (int i = 0; i < I; ++i) {
      if (fs_.open[i]) facilities.push_back(i);
    }
    TransportProblem tp;
    for (int i : facilities) tp.capacity.push_back(inst_.facilities[i].capacity);
    tp.cost.resize(facilities.size());
    std::vector<std::pair<std::size_t, int>> served;  // (category index, customer)
    double revenue = 0.0;
    for (std::size_t c = 0; c < categories_.size(); ++c) {
      if (!accept[c]) continue;
      const auto& cat = categories_[c];
      revenue += cat.demand * cat.price;
      const double gamma = inst_.service_levels[cat.service].gamma;
      for (int j : cat.members) {
        served.emplace_back(c, j);
        tp.load.push_back(gamma * inst_.customers[j].demand);
        for (std::size_t a = 0; a < facilities.size(); ++a) tp.cost[a].push_back(inst_.cost(facilities[a], j, cat.service));
      }
    }
    if (share) share->assign(I, std::vector<double>(inst_.customer_count(), 0.0));
    if (served.empty()) return {true, 0.0};
    if (facilities.empty()) return {false, 0.0};
    const TransportResult t = solve_transport(tp);
    if (!t.feasible) return {false, 0.0};
    if (share || o) {
      for (std::size_t b = 0; b < served.size(); ++b) {
        const auto& cat = categories_[served[b].first];
        double cost = 0.0;
        for (std::size_t a = 0; a < facilities.size(); ++a) {
          if (share) (*share)[facilities[a]][served[b].second] = t.share[a][b];
          cost += tp.cost[a][b] * t.share[a][b];
        }
        if (o) o->contribution[cat.shipper][cat.category] -= cost;
      }
    }
    if (o) {
      for (std::size_t c = 0; c < categories_.size(); ++c) {
        if (!accept[c]) continue;
        const auto& cat = categories_[c];
        o->accepted[cat.shipper][cat.category] = cat.service;
        o->contribution[cat.shipper][cat.category] += cat.demand * cat.price;
      }
    }
    return {true, revenue - t.cost};
  }

  const Instance& inst_;
  const FirstStage& fs_;
  const ScenarioSet& scenarios_;
  SimulationMode mode_;
  double fixed_ = 0.0;
  std::vector<Category> categories_;
};

}  // namespace

SimulationReport simulate(const Instance& inst, const FirstStage& fs, const ScenarioSet& scenarios,
                          SimulationMode mode, const SimulationOptions& options) {
  if (scenarios.size() == 0) throw ParameterError("simulation needs at least one scenario");
  if (options.workers < 1) throw ParameterError("workers must be at least 1");
  const Simulator sim(inst, fs, scenarios, mode);
  const std::size_t blocks = (scenarios.size() + kBlock - 1) / kBlock;
  std::vector<BlockResult> results(blocks);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t b = next++; b < blocks; b = next++) {
      results[b] = sim.block(b * kBlock, std::min(scenarios.size(), (b + 1) * kBlock), options.keep_outcomes);
    }
  };
  std::vector<std::thread> threads;
  for (int w = 1; w < options.workers; ++w) threads.emplace_back(work);
  work();
  for (auto& t : threads) t.join();

  SimulationReport report;
  report.mode = mode;
  report.scenarios = scenarios.size();
  report.seed = scenarios.seed();
  const int N = inst.shipper_count(), M = inst.service_count();
  std::vector<std::vector<std::size_t>> violations(N, std::vector<std::size_t>(M, 0));
  Moments total;
  for (auto& r : results) {
    total.merge(r.moments);
    report.infeasible += r.infeasible;
    for (int n = 0; n < N; ++n) {
      for (int m = 0; m < M; ++m) violations[n][m] += r.violations[n][m];
    }
    if (options.keep_outcomes) {
      std::move(r.outcomes.begin(), r.outcomes.end(), std::back_inserter(report.outcomes));
    }
  }
  report.mean = total.mean;
  if (total.count > 1) {
    report.std_error = std::sqrt(total.m2 / static_cast<double>(total.count - 1) / static_cast<double>(total.count));
  }
  report.violation_rate.assign(N, std::vector<double>(M, 0.0));
  for (int n = 0; n < N; ++n) {
    for (int m = 0; m < M; ++m) {
      report.violation_rate[n][m] = static_cast<double>(violations[n][m]) / static_cast<double>(scenarios.size());
    }
  }
  return report;
}

std::vector<std::vector<double>> min_demand_violation_rate(const std::vector<ScenarioOutcome>& outcomes) {
  if (outcomes.empty()) throw ParameterError("no outcomes to summarize");
  const auto& shape = outcomes.front().violation;
  std::vector<std::vector<double>> rate(shape.size());
  for (std::size_t n = 0; n < shape.size(); ++n) rate[n].assign(shape[n].size(), 0.0);
  for (const auto& o : outcomes) {
    if (o.violation.size() != shape.size()) throw ParameterError("outcomes have different shapes");
    for (std::size_t n = 0; n < shape.size(); ++n) {
      if (o.violation[n].size() != shape[n].size()) throw ParameterError("outcomes have different shapes");
      for (std::size_t m = 0; m < shape[n].size(); ++m) rate[n][m] += o.violation[n][m] ? 1.0 : 0.0;
    }
  }
  for (auto& row : rate) {
    for (auto& v : row) v /= static_cast<double>(outcomes.size());
  }
  return rate;
}

std::string simulation_csv(const std::vector<SimulationReport>& reports) {
  using detail::format_number;
  std::ostringstream os;
  os << "# biloc simulation csv v1\n";
  os << "mode,metric,shipper,service,value\n";
  const SimulationReport* reduced = nullptr;
  const SimulationReport* realloc = nullptr;
  for (const auto& r : reports) {
    const char* mode = to_string(r.mode);
    os << mode << ",scenarios,,," << r.scenarios << "\n";
    os << mode << ",seed,,," << r.seed << "\n";
    os << mode << ",mean,,," << format_number(r.mean) << "\n";
    os << mode << ",std_error,,," << format_number(r.std_error) << "\n";
    os << mode << ",infeasible,,," << r.infeasible << "\n";
    for (std::size_t n = 0; n < r.violation_rate.size(); ++n) {
      for (std::size_t m = 0; m < r.violation_rate[n].size(); ++m) {
        os << mode << ",violation_rate," << n << "," << m << "," << format_number(r.violation_rate[n][m]) << "\n";
      }
    }
    (r.mode == SimulationMode::reduced_consistent ? reduced : realloc) = &r;
  }
  if (reduced && realloc) os << "both,mode_gap,,," << format_number(realloc->mean - reduced->mean) << "\n";
  return os.str();
}

}  // namespace biloc
