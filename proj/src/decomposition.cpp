#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "search.hpp"

namespace biloc::detail {

namespace {

constexpr std::size_t kPlanLimit = 200000;
constexpr int kMaxFacilities = 20;
constexpr int kSubgradientSteps = 40;

// Offers of one shipper: a service (or none) per category and one price per
// used service, respecting the minimum demand of every chosen price.
struct Plan {
  std::vector<std::array<int, 3>> offers;  // (k, m, p)
  double load = 0.0;
};

bool shipper_plans(const Reduced& d, int n, std::vector<Plan>& out) {
  const int K = d.category_count[n];
  std::vector<int> service(K, -1);
  std::vector<int> price(d.M, -1);
  std::vector<double> demand(d.M, 0.0);
  std::vector<int> used;
  bool overflow = false;

  auto emit = [&] {
    Plan plan;
    for (int k = 0; k < K; ++k) {
      const int m = service[k];
      if (m < 0) continue;
      plan.offers.push_back({k, m, price[m]});
      for (int j : d.members[n][k]) plan.load += d.load[j][m];
    }
    out.push_back(std::move(plan));
    overflow = out.size() > kPlanLimit;
  };
  auto prices = [&](auto&& self, std::size_t u) -> void {
    if (overflow) return;
    if (u == used.size()) {
      emit();
      return;
    }
    const int m = used[u];
    for (int p = 0; p < d.prices(n, m); ++p) {
      if (demand[m] < d.min_demand[n][m][p]) continue;
      price[m] = p;
      self(self, u + 1);
    }
    price[m] = -1;
  };
  auto services = [&](auto&& self, int k) -> void {
    if (overflow) return;
    if (k == K) {
      std::fill(demand.begin(), demand.end(), 0.0);
      used.clear();
      for (int c = 0; c < K; ++c) {
        if (service[c] < 0) continue;
        if (demand[service[c]] == 0.0) used.push_back(service[c]);
        demand[service[c]] += d.category_demand[n][c];
      }
      std::sort(used.begin(), used.end());
      used.erase(std::unique(used.begin(), used.end()), used.end());
      prices(prices, 0);
      return;
    }
    service[k] = -1;
    self(self, k + 1);
    for (int m : d.services[n][k]) {
      service[k] = m;
      self(self, k + 1);
    }
    service[k] = -1;
  };
  services(services, 0);
  return !overflow;
}

class Decomposition {
 public:
  Decomposition(const MilpModel& model, const Reduced& d, const SolveOptions& options, Clock::time_point start)
      : model_(model), d_(d), options_(options), start_(start) {}

  Solution run() {
    Solution out;
    if (d_.I > kMaxFacilities) {
      out.status = SolveStatus::error;
      out.message = "too many facilities for subset enumeration";
      return out;
    }
    plans_.resize(d_.N);
    for (int n = 0; n < d_.N; ++n) {
      if (!shipper_plans(d_, n, plans_[n])) {
        out.status = SolveStatus::error;
        out.message = "too many offer plans for shipper " + std::to_string(n);
        return out;
      }
    }
    out.method = "decomposition";

    best_ = empty_choice(d_);
    incumbent_ = 0.0;
    if (options_.warm_start) {
      if (auto c = warm_start(d_)) {
        const ChoiceValue v = evaluate_choice(d_, *c);
        if (v.feasible && v.objective > incumbent_) {
          best_ = *c;
          best_.share = v.share;
          incumbent_ = v.objective;
        }
      }
    }

    const std::uint32_t subsets = 1u << d_.I;
    std::vector<double> zero(d_.I, 0.0);
    for (std::uint32_t mask = 1; mask < subsets; ++mask) {
      Subset s;
      s.mask = mask;
      s.bound = lagrangian(mask, zero, nullptr, nullptr);
      order_.push_back(s);
    }
    std::stable_sort(order_.begin(), order_.end(), [](const Subset& a, const Subset& b) { return a.bound > b.bound; });
    out.root_bound = order_.empty() ? 0.0 : std::max(0.0, order_.front().bound);
    done_.assign(order_.size(), 0);

    std::vector<std::thread> threads;
    for (int w = 1; w < options_.workers; ++w) threads.emplace_back([this] { work(); });
    work();
    for (auto& t : threads) t.join();

    fill_report(model_, assemble(model_, d_, best_), out);
    out.nodes = nodes_;
    if (stopped_) {
      out.status = SolveStatus::time_limit;
      double b = out.objective;
      for (std::size_t s = 0; s < order_.size(); ++s) {
        if (!done_[s]) b = std::max(b, order_[s].bound);
      }
      out.bound = b;
    } else {
      out.status = SolveStatus::optimal;
      out.bound = out.objective;
    }
    out.gap = (out.bound - out.objective) / std::max(1.0, std::abs(out.objective));
    return out;
  }

 private:
  struct Subset {
    std::uint32_t mask = 0;
    double bound = 0.0;
  };

  double tolerance(double value) const { return 1e-9 * std::max(1.0, std::abs(value)); }

  double current() {
    std::lock_guard lock(mutex_);
    return incumbent_;
  }

  bool out_of_time() const {
    return std::chrono::duration<double>(Clock::now() - start_).count() >= options_.time_limit;
  }

  // Capacity-relaxed bound for the facility subset `mask` with multipliers
  // `lambda`. Fills per-plan values and the capacity use of the best plans.
  double lagrangian(std::uint32_t mask, const std::vector<double>& lambda,
                    std::vector<std::vector<double>>* plan_value, std::vector<double>* usage) const {
    double value = 0.0;
    for (int i = 0; i < d_.I; ++i) {
      if (mask >> i & 1u) value += lambda[i] * d_.capacity[i] - d_.fixed_cost[i];
    }
    // g[n][k][m][p]: offer margin under lambda-priced capacity.
    std::vector<std::vector<std::vector<std::vector<double>>>> g(d_.N);
    for (int n = 0; n < d_.N; ++n) {
      g[n].resize(d_.category_count[n], std::vector<std::vector<double>>(d_.M));
      for (int k = 0; k < d_.category_count[n]; ++k) {
        for (int m : d_.services[n][k]) {
          for (int p = 0; p < d_.prices(n, m); ++p) {
            double v = d_.revenue[n][k][m][p];
            for (int j : d_.members[n][k]) v -= cheapest(mask, lambda, j, m, p).first;
            g[n][k][m].push_back(v);
          }
        }
      }
    }
    if (plan_value) plan_value->assign(d_.N, {});
    if (usage) usage->assign(d_.I, 0.0);
    for (int n = 0; n < d_.N; ++n) {
      double best = -std::numeric_limits<double>::infinity();
      const Plan* arg = nullptr;
      std::vector<double> values;
      values.reserve(plans_[n].size());
      for (const auto& plan : plans_[n]) {
        double v = 0.0;
        for (const auto& [k, m, p] : plan.offers) v += g[n][k][m][p];
        values.push_back(v);
        if (v > best) {
          best = v;
          arg = &plan;
        }
      }
      value += best;
      if (usage && arg) {
        for (const auto& [k, m, p] : arg->offers) {
          for (int j : d_.members[n][k]) (*usage)[cheapest(mask, lambda, j, m, p).second] += d_.load[j][m];
        }
      }
      if (plan_value) (*plan_value)[n] = std::move(values);
    }
    return value;
  }

  std::pair<double, int> cheapest(std::uint32_t mask, const std::vector<double>& lambda, int j, int m, int p) const {
    double best = std::numeric_limits<double>::infinity();
    int arg = -1;
    for (int i = 0; i < d_.I; ++i) {
      if (!(mask >> i & 1u)) continue;
      const double c = d_.cost_at(i, j, m, p) + lambda[i] * d_.load[j][m];
      if (c < best) {
        best = c;
        arg = i;
      }
    }
    return {best, arg};
  }

  void work() {
    for (;;) {
      const std::size_t s = next_.fetch_add(1);
      if (s >= order_.size() || stopped_) return;
      if (order_[s].bound > current() + tolerance(current())) {
        if (!search(order_[s].mask)) return;
      }
      done_[s] = 1;
    }
  }

  // False when the time limit interrupted the subset.
  bool search(std::uint32_t mask) {
    std::vector<double> lambda(d_.I, 0.0), best_lambda = lambda, usage;
    double best = kInfinity;
    double theta = 2.0;
    int stale = 0;
    for (int step = 0; step < kSubgradientSteps; ++step) {
      const double ub = lagrangian(mask, lambda, nullptr, &usage);
      if (ub < best - 1e-12) {
        best = ub;
        best_lambda = lambda;
        stale = 0;
      } else if (++stale >= 5) {
        theta /= 2.0;
        stale = 0;
      }
      const double target = current();
      if (best <= target + tolerance(target)) return true;
      double norm = 0.0;
      std::vector<double> grad(d_.I, 0.0);
      for (int i = 0; i < d_.I; ++i) {
        if (!(mask >> i & 1u)) continue;
        grad[i] = d_.capacity[i] - usage[i];
        if (lambda[i] <= 0.0 && grad[i] > 0.0) grad[i] = 0.0;
        norm += grad[i] * grad[i];
      }
      if (norm <= 0.0) break;
      const double t = theta * (ub - target) / norm;
      for (int i = 0; i < d_.I; ++i) lambda[i] = std::max(0.0, lambda[i] - t * grad[i]);
    }

    std::vector<std::vector<double>> values;
    double base = lagrangian(mask, best_lambda, &values, nullptr);
    for (const auto& v : values) base -= *std::max_element(v.begin(), v.end());
    Tree tree;
    tree.mask = mask;
    tree.base = base;
    tree.capacity = 0.0;
    for (int i = 0; i < d_.I; ++i) {
      if (mask >> i & 1u) tree.capacity += d_.capacity[i];
    }
    tree.order.resize(d_.N);
    tree.values = std::move(values);
    tree.suffix.assign(d_.N + 1, 0.0);
    for (int n = d_.N - 1; n >= 0; --n) {
      auto& o = tree.order[n];
      o.resize(plans_[n].size());
      std::iota(o.begin(), o.end(), 0);
      const auto& v = tree.values[n];
      std::stable_sort(o.begin(), o.end(), [&](int a, int b) { return v[a] > v[b]; });
      tree.suffix[n] = tree.suffix[n + 1] + v[o.front()];
    }
    tree.chosen.assign(d_.N, -1);
    return descend(tree, 0, 0.0, 0.0);
  }

  struct Tree {
    std::uint32_t mask = 0;
    double base = 0.0;
    double capacity = 0.0;
    std::vector<std::vector<int>> order;
    std::vector<std::vector<double>> values;
    std::vector<double> suffix;
    std::vector<int> chosen;
  };

  bool descend(Tree& tree, int n, double value, double load) {
    if ((++nodes_ & 1023) == 0 && out_of_time()) {
      stopped_ = true;
      return false;
    }
    if (stopped_) return false;
    if (n == d_.N) {
      leaf(tree);
      return true;
    }
    for (int q : tree.order[n]) {
      const double v = tree.values[n][q];
      const double bound = tree.base + value + v + tree.suffix[n + 1];
      const double inc = current();
      if (bound <= inc + tolerance(inc)) break;
      const double l = load + plans_[n][q].load;
      if (l > tree.capacity * (1.0 + 1e-12)) continue;
      tree.chosen[n] = q;
      if (!descend(tree, n + 1, value + v, l)) return false;
    }
    tree.chosen[n] = -1;
    return true;
  }

  void leaf(const Tree& tree) {
    Choice c = empty_choice(d_);
    for (int i = 0; i < d_.I; ++i) c.open[i] = tree.mask >> i & 1u ? 1 : 0;
    for (int n = 0; n < d_.N; ++n) {
      for (const auto& [k, m, p] : plans_[n][tree.chosen[n]].offers) {
        c.service[n][k] = m;
        c.price[n][m] = p;
      }
    }
    const ChoiceValue v = evaluate_choice(d_, c);
    if (!v.feasible) return;
    std::lock_guard lock(mutex_);
    if (v.objective > incumbent_ + tolerance(incumbent_)) {
      incumbent_ = v.objective;
      best_ = std::move(c);
      best_.share = v.share;
    }
  }

  const MilpModel& model_;
  const Reduced& d_;
  const SolveOptions& options_;
  Clock::time_point start_;

  std::vector<std::vector<Plan>> plans_;
  std::vector<Subset> order_;
  std::vector<char> done_;
  std::atomic<std::size_t> next_{0};
  std::atomic<bool> stopped_{false};
  std::atomic<long> nodes_{0};

  std::mutex mutex_;
  double incumbent_ = 0.0;
  Choice best_;
};

}  // namespace

Solution decomposition(const MilpModel& model, const Reduced& d, const SolveOptions& options,
                       Clock::time_point start) {
  Decomposition search(model, d, options, start);
  return search.run();
}

}  // namespace biloc::detail
