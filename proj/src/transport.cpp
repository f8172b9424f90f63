#include "biloc/transport.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "biloc/error.hpp"

namespace biloc {

namespace {

constexpr double kUnreached = std::numeric_limits<double>::infinity();

class Network {
 public:
  explicit Network(const TransportProblem& p) : p_(p) {
    I_ = static_cast<int>(p.capacity.size());
    J_ = static_cast<int>(p.load.size());
    if (static_cast<int>(p.cost.size()) != I_) throw ParameterError("transport: cost needs one row per facility");
    for (const auto& row : p.cost) {
      if (static_cast<int>(row.size()) != J_) throw ParameterError("transport: cost row size mismatch");
    }
    scale_ = 1.0;
    for (double a : p.load) {
      if (!(a > 0.0)) throw ParameterError("transport: customer load must be > 0");
      scale_ = std::max(scale_, a);
    }
    eps_ = 1e-12 * scale_;
    unit_.assign(I_, std::vector<double>(J_));
    for (int i = 0; i < I_; ++i) {
      for (int j = 0; j < J_; ++j) unit_[i][j] = p.cost[i][j] / p.load[j];
    }
    flow_.assign(I_, std::vector<double>(J_, 0.0));
    used_.assign(I_, 0.0);
    remaining_ = p.load;
  }

  // Nodes: customers [0, J), facilities [J, J + I), sink J + I.
  int sink() const { return J_ + I_; }

  bool residual_to_sink(int i) const { return p_.capacity[i] - used_[i] > eps_; }

  // Label-correcting shortest paths. `sources` start at distance 0.
  void shortest_paths(const std::vector<int>& sources, std::vector<double>& dist, std::vector<int>& pred) const {
    const int nodes = J_ + I_ + 1;
    dist.assign(nodes, kUnreached);
    pred.assign(nodes, -1);
    std::vector<char> queued(nodes, 0);
    std::deque<int> queue;
    for (int s : sources) {
      dist[s] = 0.0;
      queue.push_back(s);
      queued[s] = 1;
    }
    auto relax = [&](int from, int to, double cost) {
      const double nd = dist[from] + cost;
      if (nd < dist[to] - 1e-15 * (1.0 + std::abs(nd))) {
        dist[to] = nd;
        pred[to] = from;
        if (!queued[to]) {
          queued[to] = 1;
          queue.push_back(to);
        }
      }
    };
    long guard = 0;
    const long limit = static_cast<long>(nodes) * nodes * 4 + 16;
    while (!queue.empty()) {
      if (++guard > limit) throw SolverError("transport: label correction did not converge");
      const int u = queue.front();
      queue.pop_front();
      queued[u] = 0;
      if (u < J_) {
        for (int i = 0; i < I_; ++i) relax(u, J_ + i, unit_[i][u]);
      } else if (u < J_ + I_) {
        const int i = u - J_;
        for (int j = 0; j < J_; ++j) {
          if (flow_[i][j] > eps_) relax(u, j, -unit_[i][j]);
        }
        if (residual_to_sink(i)) relax(u, sink(), 0.0);
      } else {
        for (int i = 0; i < I_; ++i) {
          if (used_[i] > eps_) relax(u, J_ + i, 0.0);
        }
      }
    }
  }

  bool run() {
    std::vector<double> dist;
    std::vector<int> pred;
    while (true) {
      std::vector<int> sources;
      for (int j = 0; j < J_; ++j) {
        if (remaining_[j] > eps_) sources.push_back(j);
      }
      if (sources.empty()) return true;
      shortest_paths(sources, dist, pred);
      if (!std::isfinite(dist[sink()])) return false;

      // Walk back to the originating customer and find the bottleneck.
      double amount = kUnreached;
      int v = sink();
      int origin = -1;
      while (v >= 0) {
        const int u = pred[v];
        if (u < 0) {
          origin = v;
          break;
        }
        if (v == sink()) {
          amount = std::min(amount, p_.capacity[u - J_] - used_[u - J_]);
        } else if (v < J_) {
          amount = std::min(amount, flow_[u - J_][v]);  // reverse arc facility -> customer
        }
        v = u;
      }
      amount = std::min(amount, remaining_[origin]);

      v = sink();
      while (pred[v] >= 0) {
        const int u = pred[v];
        if (v == sink()) {
          used_[u - J_] += amount;
        } else if (v < J_) {
          flow_[u - J_][v] -= amount;
          if (flow_[u - J_][v] < eps_) flow_[u - J_][v] = 0.0;
        } else {
          flow_[v - J_][u] += amount;
        }
        v = u;
      }
      remaining_[origin] -= amount;
      if (remaining_[origin] < eps_) remaining_[origin] = 0.0;
    }
  }

  TransportResult result() const {
    TransportResult r;
    r.feasible = true;
    r.share.assign(I_, std::vector<double>(J_, 0.0));
    double cost = 0.0;
    for (int i = 0; i < I_; ++i) {
      for (int j = 0; j < J_; ++j) {
        r.share[i][j] = std::clamp(flow_[i][j] / p_.load[j], 0.0, 1.0);
        cost += p_.cost[i][j] * r.share[i][j];
      }
    }
    r.cost = cost;

    std::vector<int> all(J_ + I_ + 1);
    for (int v = 0; v <= J_ + I_; ++v) all[v] = v;
    std::vector<double> dist;
    std::vector<int> pred;
    shortest_paths(all, dist, pred);
    const double dt = dist[sink()];
    r.capacity_duals.assign(I_, 0.0);
    for (int i = 0; i < I_; ++i) r.capacity_duals[i] = std::max(0.0, dt - dist[J_ + i]);
    r.customer_duals.assign(J_, 0.0);
    for (int j = 0; j < J_; ++j) r.customer_duals[j] = p_.load[j] * (dt - dist[j]);
    return r;
  }

 private:
  const TransportProblem& p_;
  int I_ = 0;
  int J_ = 0;
  double scale_ = 1.0;
  double eps_ = 0.0;
  std::vector<std::vector<double>> unit_;
  std::vector<std::vector<double>> flow_;
  std::vector<double> used_;
  std::vector<double> remaining_;
};

}  // namespace

TransportResult solve_transport(const TransportProblem& problem) {
  Network net(problem);
  if (!net.run()) {
    TransportResult r;
    r.feasible = false;
    return r;
  }
  return net.result();
}

}  // namespace biloc
