#include "biloc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "biloc/bounds.hpp"
#include "biloc/error.hpp"
#include "biloc/transport.hpp"
#include "search.hpp"

namespace biloc {

const char* to_string(SolveMethod method) {
  switch (method) {
    case SolveMethod::automatic:
      return "auto";
    case SolveMethod::lp_bnb:
      return "lp_bnb";
    case SolveMethod::decomposition:
      return "decomposition";
  }
  return "auto";
}

SolveMethod solve_method_from_string(std::string_view text) {
  for (auto m : {SolveMethod::automatic, SolveMethod::lp_bnb, SolveMethod::decomposition}) {
    if (text == to_string(m)) return m;
  }
  throw ParameterError("unknown solve method '" + std::string(text) + "'");
}

namespace detail {

Choice empty_choice(const Reduced& d) {
  Choice c;
  c.open.assign(d.I, 0);
  c.service.resize(d.N);
  for (int n = 0; n < d.N; ++n) c.service[n].assign(d.category_count[n], -1);
  c.price.assign(d.N, std::vector<int>(d.M, -1));
  c.share.assign(d.I, std::vector<double>(d.J, 0.0));
  return c;
}

ChoiceValue evaluate_choice(const Reduced& d, const Choice& c) {
  ChoiceValue out;
  out.share.assign(d.I, std::vector<double>(d.J, 0.0));
  double value = 0.0;
  std::vector<int> facilities;
  for (int i = 0; i < d.I; ++i) {
    if (!c.open[i]) continue;
    facilities.push_back(i);
    value -= d.fixed_cost[i];
  }
  TransportProblem tp;
  for (int i : facilities) tp.capacity.push_back(d.capacity[i]);
  tp.cost.resize(facilities.size());
  std::vector<int> served;
  for (int n = 0; n < d.N; ++n) {
    for (int k = 0; k < d.category_count[n]; ++k) {
      const int m = c.service[n][k];
      if (m < 0) continue;
      const int p = c.price[n][m];
      value += d.revenue[n][k][m][p];
      for (int j : d.members[n][k]) {
        served.push_back(j);
        tp.load.push_back(d.load[j][m]);
        for (std::size_t a = 0; a < facilities.size(); ++a) tp.cost[a].push_back(d.cost_at(facilities[a], j, m, p));
      }
    }
  }
  if (served.empty()) {
    out.feasible = true;
    out.objective = value;
    return out;
  }
  if (facilities.empty()) return out;
  const TransportResult t = solve_transport(tp);
  if (!t.feasible) return out;
  out.feasible = true;
  out.objective = value - t.cost;
  for (std::size_t a = 0; a < facilities.size(); ++a) {
    for (std::size_t b = 0; b < served.size(); ++b) out.share[facilities[a]][served[b]] = t.share[a][b];
  }
  return out;
}

namespace {

bool demand_ok(const Reduced& d, const Choice& c, int n, int m) {
  const int p = c.price[n][m];
  if (p < 0) return true;
  double total = 0.0;
  for (int k = 0; k < d.category_count[n]; ++k) {
    if (c.service[n][k] == m) total += d.category_demand[n][k];
  }
  return total >= d.min_demand[n][m][p];
}

}  // namespace

std::optional<Choice> warm_start(const Reduced& d) {
  auto offers = upper_bound(d).offers;
  if (offers.empty() || d.I == 0) return std::nullopt;
  std::stable_sort(offers.begin(), offers.end(), [](const BestOffer& a, const BestOffer& b) { return a.value > b.value; });

  Choice c = empty_choice(d);
  for (const auto& o : offers) {
    int& p = c.price[o.shipper][o.service];
    if (p >= 0 && p != o.price_level) continue;
    p = o.price_level;
    c.service[o.shipper][o.category] = o.service;
  }
  for (int n = 0; n < d.N; ++n) {
    for (int m = 0; m < d.M; ++m) {
      if (demand_ok(d, c, n, m)) continue;
      for (auto& s : c.service[n]) {
        if (s == m) s = -1;
      }
      c.price[n][m] = -1;
    }
  }

  // Drop the weakest offers until all facilities together can serve the rest.
  std::fill(c.open.begin(), c.open.end(), 1);
  ChoiceValue best = evaluate_choice(d, c);
  for (auto it = offers.rbegin(); !best.feasible && it != offers.rend(); ++it) {
    if (c.service[it->shipper][it->category] < 0) continue;
    c.service[it->shipper][it->category] = -1;
    bool used = false;
    for (int s : c.service[it->shipper]) used = used || s == it->service;
    if (!used) c.price[it->shipper][it->service] = -1;
    if (!demand_ok(d, c, it->shipper, it->service)) continue;
    best = evaluate_choice(d, c);
  }
  if (!best.feasible) return std::nullopt;

  // Close facilities while that pays.
  for (bool improved = true; improved;) {
    improved = false;
    int drop = -1;
    ChoiceValue drop_value;
    for (int i = 0; i < d.I; ++i) {
      if (!c.open[i]) continue;
      c.open[i] = 0;
      ChoiceValue v = evaluate_choice(d, c);
      c.open[i] = 1;
      if (v.feasible && v.objective > (drop < 0 ? best.objective : drop_value.objective) + 1e-9) {
        drop = i;
        drop_value = std::move(v);
      }
    }
    if (drop >= 0) {
      c.open[drop] = 0;
      best = std::move(drop_value);
      improved = true;
    }
  }
  c.share = best.share;
  return c;
}

std::vector<double> assemble(const MilpModel& model, const Reduced& d, const Choice& c) {
  std::vector<double> x(model.variable_count(), 0.0);
  auto y = [&](int n, int m, int p) { return c.price[n][m] == p ? 1.0 : 0.0; };
  auto w = [&](int i, int j, int m) {
    const int n = d.customer_shipper[j];
    return n >= 0 && c.service[n][d.customer_category[j]] == m ? c.share[i][j] : 0.0;
  };
  for (int v = 0; v < model.variable_count(); ++v) {
    const auto& a = model.variables()[v].index;
    switch (model.variables()[v].role) {
      case VarRole::open:
        x[v] = c.open[a[0]] ? 1.0 : 0.0;
        break;
      case VarRole::price:
        x[v] = y(a[0], a[1], a[2]);
        break;
      case VarRole::service:
        x[v] = c.service[a[0]][a[1]] == a[2] ? 1.0 : 0.0;
        break;
      case VarRole::assign:
        x[v] = w(a[0], a[1], a[2]);
        break;
      case VarRole::offer_product:
        x[v] = c.service[a[0]][a[1]] == a[2] ? y(a[0], a[2], a[3]) : 0.0;
        break;
      case VarRole::cost_product:
        x[v] = w(a[0], a[1], a[2]) * y(d.customer_shipper[a[1]], a[2], a[3]);
        break;
      case VarRole::other:
        break;
    }
  }
  return x;
}

void fill_report(const MilpModel& model, const std::vector<double>& x, Solution& out) {
  out.objective = 0.0;
  out.revenue = 0.0;
  out.cost = 0.0;
  out.fixed_cost = 0.0;
  out.values.clear();
  for (int v = 0; v < model.variable_count(); ++v) {
    const double term = model.objective_coefficient(v) * x[v];
    out.objective += term;
    switch (model.variables()[v].role) {
      case VarRole::open:
        out.fixed_cost -= term;
        break;
      case VarRole::offer_product:
        out.revenue += term;
        break;
      case VarRole::cost_product:
        out.cost -= term;
        break;
      default:
        break;
    }
    if (x[v] != 0.0) out.values[model.variables()[v].name] = x[v];
  }
}

}  // namespace detail

Solution solve(const MilpModel& model, const SolveOptions& options) {
  if (options.time_limit <= 0.0) throw ParameterError("time limit must be positive");
  if (options.workers < 1) throw ParameterError("workers must be at least 1");
  if (options.node_limit < 0) throw ParameterError("node limit must be non-negative");
  const auto start = detail::Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(detail::Clock::now() - start).count(); };

  std::optional<detail::Reduced> decoded = detail::decode(model);
  if (decoded) {
    const UpperBound ub = detail::upper_bound(*decoded);
    if (ub.trivial) {
      Solution s;
      s.status = SolveStatus::trivial;
      s.method = to_string(options.method == SolveMethod::automatic ? SolveMethod::decomposition : options.method);
      s.message = "offer bound " + std::to_string(ub.value) + " certifies the empty offer";
      s.root_bound = ub.value;
      s.seconds = elapsed();
      return s;
    }
  }

  Solution s;
  std::string note;
  SolveMethod method = options.method;
  if (method == SolveMethod::automatic) method = decoded ? SolveMethod::decomposition : SolveMethod::lp_bnb;
  if (method == SolveMethod::decomposition && !decoded) {
    method = SolveMethod::lp_bnb;
    note = "model structure not recognized, used lp_bnb";
  }
  if (method == SolveMethod::decomposition) {
    s = detail::decomposition(model, *decoded, options, start);
    if (s.status == SolveStatus::error && s.method.empty()) {
      note = s.message + ", used lp_bnb";
      method = SolveMethod::lp_bnb;
    }
  }
  if (method == SolveMethod::lp_bnb) {
    std::vector<double> warm;
    if (options.warm_start && decoded) {
      if (auto c = detail::warm_start(*decoded)) warm = detail::assemble(model, *decoded, *c);
    }
    s = detail::branch_and_bound(model, options, warm.empty() ? nullptr : &warm, start);
  }
  if (!note.empty()) s.message = s.message.empty() ? note : note + "; " + s.message;
  s.seconds = elapsed();
  return s;
}

LpSolution solve_relaxation(const MilpModel& model) { return solve_lp(relaxation(model)); }

Transportation transportation(const Instance& inst, const RhoTable& rho, const std::vector<bool>& open,
                              const std::vector<Offer>& offers) {
  const int I = inst.facility_count();
  if (static_cast<int>(open.size()) != I) throw ParameterError("open mask size differs from facility count");
  std::vector<int> facilities;
  for (int i = 0; i < I; ++i) {
    if (open[i]) facilities.push_back(i);
  }
  TransportProblem tp;
  for (int i : facilities) tp.capacity.push_back(inst.facilities[i].capacity);
  tp.cost.resize(facilities.size());
  std::vector<int> served;
  for (const auto& o : offers) {
    if (o.shipper < 0 || o.shipper >= inst.shipper_count() || o.category < 0 ||
        o.category >= inst.category_count(o.shipper) || !inst.offers(o.shipper, o.category, o.service)) {
      throw IndexError("offer (" + std::to_string(o.shipper) + ", " + std::to_string(o.category) + ", " +
                       std::to_string(o.service) + ") does not exist");
    }
    const double r = rho.at(o.shipper, o.category, o.service, o.price_level);
    const double gamma = inst.service_levels[o.service].gamma;
    for (int j : inst.category_customers(o.shipper, o.category)) {
      served.push_back(j);
      tp.load.push_back(gamma * inst.customers[j].demand);
      for (std::size_t a = 0; a < facilities.size(); ++a) tp.cost[a].push_back(r * inst.cost(facilities[a], j, o.service));
    }
  }
  Transportation out;
  out.share.assign(I, std::vector<double>(inst.customer_count(), 0.0));
  if (served.empty()) {
    out.feasible = true;
    return out;
  }
  if (facilities.empty()) return out;
  const TransportResult t = solve_transport(tp);
  out.feasible = t.feasible;
  if (!t.feasible) return out;
  out.cost = t.cost;
  for (std::size_t a = 0; a < facilities.size(); ++a) {
    for (std::size_t b = 0; b < served.size(); ++b) out.share[facilities[a]][served[b]] = t.share[a][b];
  }
  return out;
}

}  // namespace biloc
