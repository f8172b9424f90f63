#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <mutex>
#include <queue>
#include <thread>

#include "biloc/error.hpp"
#include "search.hpp"

namespace biloc::detail {

namespace {

constexpr double kIntTol = 1e-6;
constexpr double kRowTol = 1e-7;

struct Open {
  BnBNode node;
  long seq = 0;
};

struct Worse {
  bool operator()(const Open& a, const Open& b) const {
    if (a.node.bound != b.node.bound) return a.node.bound < b.node.bound;
    return a.seq > b.seq;
  }
};

int role_rank(VarRole role) {
  switch (role) {
    case VarRole::price:
      return 0;
    case VarRole::service:
      return 1;
    case VarRole::open:
      return 2;
    default:
      return 3;
  }
}

bool feasible(const MilpModel& model, const std::vector<double>& x) {
  for (int v = 0; v < model.variable_count(); ++v) {
    const auto& var = model.variables()[v];
    if (x[v] < var.lower - kRowTol || x[v] > var.upper + kRowTol) return false;
    if (var.kind == VarKind::binary && std::abs(x[v] - std::round(x[v])) > kIntTol) return false;
  }
  for (const auto& c : model.constraints()) {
    double lhs = 0.0;
    for (const auto& [v, a] : c.terms) lhs += a * x[v];
    const double tol = kRowTol * std::max(1.0, std::abs(c.rhs));
    if ((c.sense == Sense::le && lhs > c.rhs + tol) || (c.sense == Sense::ge && lhs < c.rhs - tol) ||
        (c.sense == Sense::eq && std::abs(lhs - c.rhs) > tol)) {
      return false;
    }
  }
  return true;
}

double objective_of(const MilpModel& model, const std::vector<double>& x) {
  double z = 0.0;
  for (int v = 0; v < model.variable_count(); ++v) z += model.objective_coefficient(v) * x[v];
  return z;
}

class Search {
 public:
  Search(const MilpModel& model, const SolveOptions& options, Clock::time_point start)
      : model_(model), options_(options), start_(start), base_(relaxation(model)) {
    for (int v = 0; v < model.variable_count(); ++v) {
      if (model.variables()[v].kind == VarKind::binary) binaries_.push_back(v);
    }
    std::stable_sort(binaries_.begin(), binaries_.end(), [&](int a, int b) {
      return role_rank(model.variables()[a].role) < role_rank(model.variables()[b].role);
    });
  }

  void offer(const std::vector<double>& x) {
    if (!feasible(model_, x)) return;
    const double z = objective_of(model_, x);
    std::lock_guard lock(mutex_);
    if (!has_incumbent_ || z > incumbent_ + 1e-12) {
      incumbent_ = z;
      best_ = x;
      has_incumbent_ = true;
    }
  }

  Solution run() {
    Solution out;
    out.method = "lp_bnb";
    std::vector<double> zero(model_.variable_count(), 0.0);
    offer(zero);

    LpSolution& root = root_;
    try {
      root = solve_node({});
    } catch (const SolverError& e) {
      out.status = SolveStatus::error;
      out.message = e.what();
      return out;
    }
    nodes_ = 1;
    if (root.status == LpStatus::unbounded) {
      out.status = SolveStatus::error;
      out.message = "relaxation is unbounded";
      return out;
    }
    if (root.status == LpStatus::infeasible) {
      out.status = SolveStatus::infeasible;
      out.message = "relaxation is infeasible";
      return out;
    }
    out.root_bound = root.objective;
    {
      Open first;
      first.node.bound = root.objective;
      pool_.push(std::move(first));
    }

    std::vector<std::thread> threads;
    for (int w = 1; w < options_.workers; ++w) threads.emplace_back([this] { work(); });
    work();
    for (auto& t : threads) t.join();

    if (!error_.empty()) {
      out.status = SolveStatus::error;
      out.message = error_;
    }
    out.nodes = nodes_;
    out.bound_violations = violations_;
    if (!has_incumbent_) {
      if (out.status != SolveStatus::error) out.status = stopped_ ? SolveStatus::time_limit : SolveStatus::infeasible;
      out.bound = stopped_ ? open_bound() : 0.0;
      return out;
    }
    fill_report(model_, best_, out);
    if (out.status == SolveStatus::error) return out;
    if (stopped_) {
      out.status = SolveStatus::time_limit;
      out.bound = std::max(out.objective, open_bound());
    } else {
      out.status = SolveStatus::optimal;
      out.bound = out.objective;
    }
    out.gap = (out.bound - out.objective) / std::max(1.0, std::abs(out.objective));
    return out;
  }

 private:
  LpSolution solve_node(const std::vector<std::pair<int, double>>& fixings) const {
    LpProblem lp = base_;
    for (const auto& [v, value] : fixings) {
      lp.lower[v] = value;
      lp.upper[v] = value;
    }
    return solve_lp(lp);
  }

  double open_bound() const {
    double b = -kInfinity;
    auto copy = pool_;
    while (!copy.empty()) {
      b = std::max(b, copy.top().node.bound);
      copy.pop();
    }
    return b;
  }

  bool pruned(double bound) {
    std::lock_guard lock(mutex_);
    return has_incumbent_ && bound <= incumbent_ + 1e-8 * std::max(1.0, std::abs(incumbent_));
  }

  bool out_of_budget() const {
    if (options_.node_limit > 0 && nodes_.load() >= options_.node_limit) return true;
    return std::chrono::duration<double>(Clock::now() - start_).count() >= options_.time_limit;
  }

  void work() {
    for (;;) {
      Open item;
      {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [&] { return stopped_ || !pool_.empty() || active_ == 0; });
        if (stopped_ || pool_.empty()) {
          cv_.notify_all();
          return;
        }
        item = pool_.top();
        pool_.pop();
        ++active_;
      }
      dive(std::move(item.node));
      {
        std::lock_guard lock(mutex_);
        --active_;
      }
      cv_.notify_all();
    }
  }

  void push(BnBNode node) {
    {
      std::lock_guard lock(mutex_);
      pool_.push({std::move(node), seq_++});
    }
    cv_.notify_one();
  }

  void stop_with(BnBNode node) {
    std::lock_guard lock(mutex_);
    pool_.push({std::move(node), seq_++});
    stopped_ = true;
    cv_.notify_all();
  }

  void dive(BnBNode node) {
    for (;;) {
      if (pruned(node.bound)) return;
      {
        std::lock_guard lock(mutex_);
        if (stopped_) {
          pool_.push({node, seq_++});
          return;
        }
      }
      LpSolution lp;
      if (node.fixings.empty()) {
        lp = root_;
      } else {
        if (out_of_budget()) {
          stop_with(std::move(node));
          return;
        }
        ++nodes_;
        lp = solve_or_fail(node);
      }
      if (failed_ || lp.status != LpStatus::optimal) return;
      if (node.depth > 0 && lp.objective > node.bound + 1e-9 * std::max(1.0, std::abs(node.bound))) ++violations_;
      if (pruned(lp.objective)) return;

      int branch = -1;
      double best_frac = 0.0;
      int best_rank = 4;
      for (int v : binaries_) {
        const double f = std::abs(lp.values[v] - std::round(lp.values[v]));
        if (f <= kIntTol) continue;
        const int rank = role_rank(model_.variables()[v].role);
        if (rank > best_rank) break;
        if (rank < best_rank || f > best_frac) {
          best_rank = rank;
          best_frac = f;
          branch = v;
        }
      }
      if (branch < 0) {
        polish(node, lp);
        return;
      }
      const double x = lp.values[branch];
      const double near = x >= 0.5 ? 1.0 : 0.0;
      BnBNode far = node;
      far.fixings.emplace_back(branch, 1.0 - near);
      far.bound = lp.objective;
      far.depth = node.depth + 1;
      far.branch_variable = branch;
      far.branch_role = model_.variables()[branch].role;
      push(std::move(far));
      node.fixings.emplace_back(branch, near);
      node.bound = lp.objective;
      node.depth += 1;
      node.branch_variable = branch;
      node.branch_role = model_.variables()[branch].role;
    }
  }

  LpSolution solve_or_fail(const BnBNode& node) {
    try {
      return solve_node(node.fixings);
    } catch (const SolverError& e) {
      std::lock_guard lock(mutex_);
      if (error_.empty()) error_ = e.what();
      failed_ = true;
      stopped_ = true;
      cv_.notify_all();
      return {};
    }
  }

  void polish(const BnBNode& node, const LpSolution& lp) {
    std::vector<std::pair<int, double>> fix = node.fixings;
    for (int v : binaries_) fix.emplace_back(v, std::round(lp.values[v]));
    LpSolution snapped;
    try {
      snapped = solve_node(fix);
    } catch (const SolverError&) {
      return;
    }
    if (snapped.status != LpStatus::optimal) return;
    std::vector<double> x = snapped.values;
    for (int v : binaries_) x[v] = std::round(lp.values[v]);
    offer(x);
  }

  const MilpModel& model_;
  const SolveOptions& options_;
  Clock::time_point start_;
  LpProblem base_;
  LpSolution root_;
  std::vector<int> binaries_;

  std::mutex mutex_;
  std::condition_variable cv_;
  std::priority_queue<Open, std::vector<Open>, Worse> pool_;
  long seq_ = 0;
  int active_ = 0;
  bool stopped_ = false;
  std::string error_;
  std::atomic<bool> failed_{false};
  std::atomic<long> nodes_{0};
  std::atomic<long> violations_{0};

  bool has_incumbent_ = false;
  double incumbent_ = 0.0;
  std::vector<double> best_;
};

}  // namespace

Solution branch_and_bound(const MilpModel& model, const SolveOptions& options, const std::vector<double>* warm,
                          Clock::time_point start) {
  if (model.empty()) {
    Solution s;
    s.method = "lp_bnb";
    return s;
  }
  Search search(model, options, start);
  if (warm != nullptr && static_cast<int>(warm->size()) == model.variable_count()) search.offer(*warm);
  return search.run();
}

}  // namespace biloc::detail
