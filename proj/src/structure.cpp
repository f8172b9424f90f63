#include "structure.hpp"

#include <algorithm>
#include <sstream>

#include "biloc/error.hpp"

namespace biloc::detail {

bool Reduced::offered(int n, int k, int m) const {
  const auto& s = services[n][k];
  return std::binary_search(s.begin(), s.end(), m);
}

std::vector<int> Reduced::shipper_services(int n) const {
  std::vector<int> out;
  for (const auto& s : services[n]) out.insert(out.end(), s.begin(), s.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Reduced reduce(const Instance& inst, const RhoTable& rho) {
  const auto problems = validate(inst);
  if (!problems.empty()) throw BuildError("invalid instance: " + problems.front());

  Reduced d;
  d.I = inst.facility_count();
  d.J = inst.customer_count();
  d.N = inst.shipper_count();
  d.M = inst.service_count();
  for (const auto& f : inst.facilities) {
    d.fixed_cost.push_back(f.fixed_cost);
    d.capacity.push_back(f.capacity);
  }
  d.category_count.resize(d.N);
  d.services.resize(d.N);
  d.category_demand.resize(d.N);
  d.members.resize(d.N);
  d.min_demand.assign(d.N, std::vector<std::vector<double>>(d.M));
  for (int n = 0; n < d.N; ++n) {
    const int K = inst.category_count(n);
    d.category_count[n] = K;
    d.services[n].resize(K);
    d.category_demand[n].resize(K);
    d.members[n].resize(K);
    for (int k = 0; k < K; ++k) {
      auto s = inst.category_services(n, k);
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
      d.services[n][k] = std::move(s);
      d.category_demand[n][k] = inst.category_demand(n, k);
      d.members[n][k] = inst.category_customers(n, k);
    }
    for (int m = 0; m < d.M; ++m) {
      for (const auto& e : inst.ladder(n, m)) d.min_demand[n][m].push_back(e.min_demand);
      d.max_prices = std::max(d.max_prices, d.prices(n, m));
    }
  }
  d.customer_shipper.resize(d.J);
  d.customer_category.resize(d.J);
  d.load.assign(d.J, std::vector<double>(d.M, 0.0));
  for (int j = 0; j < d.J; ++j) {
    const auto& c = inst.customers[j];
    const bool any = !d.services[c.shipper][c.category].empty();
    d.customer_shipper[j] = any ? c.shipper : -1;
    d.customer_category[j] = any ? c.category : -1;
    for (int m : d.services[c.shipper][c.category]) d.load[j][m] = inst.service_levels[m].gamma * c.demand;
  }

  auto rho_at = [&](int n, int k, int m, int p) {
    if (auto v = rho.find(n, k, m, p)) return *v;
    std::ostringstream os;
    os << "missing rho for (n=" << n << ", k=" << k << ", m=" << m << ", p=" << p << ")";
    throw BuildError(os.str());
  };

  d.revenue.resize(d.N);
  for (int n = 0; n < d.N; ++n) {
    d.revenue[n].resize(d.category_count[n]);
    for (int k = 0; k < d.category_count[n]; ++k) {
      d.revenue[n][k].resize(d.M);
      for (int m : d.services[n][k]) {
        for (int p = 0; p < d.prices(n, m); ++p) {
          d.revenue[n][k][m].push_back(rho_at(n, k, m, p) * d.category_demand[n][k] * inst.price(n, m, p));
        }
      }
    }
  }
  d.cost.assign(static_cast<std::size_t>(d.I) * d.J * d.M * d.max_prices, 0.0);
  for (int i = 0; i < d.I; ++i) {
    for (int j = 0; j < d.J; ++j) {
      const int n = d.customer_shipper[j];
      if (n < 0) continue;
      const int k = d.customer_category[j];
      for (int m : d.services[n][k]) {
        for (int p = 0; p < d.prices(n, m); ++p) d.cost_at(i, j, m, p) = rho_at(n, k, m, p) * inst.cost(i, j, m);
      }
    }
  }
  return d;
}

namespace {

Variable binary(std::string name, VarRole role, std::array<int, 4> index) {
  return {std::move(name), VarKind::binary, 0.0, 1.0, role, index};
}

std::string row_name(const char* family, const std::string& suffix) { return std::string(family) + "_" + suffix; }

std::string suffix(std::initializer_list<std::pair<char, int>> parts) {
  std::string s;
  for (const auto& [c, v] : parts) {
    if (!s.empty()) s += '_';
    s += c;
    s += std::to_string(v);
  }
  return s;
}

}  // namespace

MilpModel build_model(const Reduced& d) {
  MilpModel model;
  const int I = d.I, J = d.J, N = d.N;

  std::vector<int> r(I);
  for (int i = 0; i < I; ++i) r[i] = model.add_variable(binary(open_name(i), VarRole::open, {i, -1, -1, -1}), -d.fixed_cost[i]);

  // y[n][m][p]
  std::vector<std::vector<std::vector<int>>> y(N, std::vector<std::vector<int>>(d.M));
  for (int n = 0; n < N; ++n) {
    for (int m : d.shipper_services(n)) {
      for (int p = 0; p < d.prices(n, m); ++p) {
        y[n][m].push_back(model.add_variable(binary(price_name(n, m, p), VarRole::price, {n, m, p, -1})));
      }
    }
  }
  // z[n][k][m]
  std::vector<std::vector<std::vector<int>>> z(N);
  for (int n = 0; n < N; ++n) {
    z[n].assign(d.category_count[n], std::vector<int>(d.M, -1));
    for (int k = 0; k < d.category_count[n]; ++k) {
      for (int m : d.services[n][k]) {
        z[n][k][m] = model.add_variable(binary(service_name(n, k, m), VarRole::service, {n, k, m, -1}));
      }
    }
  }
  // w[i][j][m]
  std::vector<std::vector<std::vector<int>>> w(I, std::vector<std::vector<int>>(J, std::vector<int>(d.M, -1)));
  for (int i = 0; i < I; ++i) {
    for (int j = 0; j < J; ++j) {
      const int n = d.customer_shipper[j];
      if (n < 0) continue;
      for (int m : d.services[n][d.customer_category[j]]) {
        w[i][j][m] = model.add_variable(
            {assign_name(i, j, m), VarKind::continuous, 0.0, 1.0, VarRole::assign, {i, j, m, -1}});
      }
    }
  }
  // pi[n][k][m][p]
  std::vector<std::vector<std::vector<std::vector<int>>>> pi(N);
  for (int n = 0; n < N; ++n) {
    pi[n].resize(d.category_count[n], std::vector<std::vector<int>>(d.M));
    for (int k = 0; k < d.category_count[n]; ++k) {
      for (int m : d.services[n][k]) {
        for (int p = 0; p < d.prices(n, m); ++p) {
          pi[n][k][m].push_back(model.add_variable({offer_product_name(n, k, m, p), VarKind::continuous, 0.0,
                                                    kInfinity, VarRole::offer_product, {n, k, m, p}},
                                                   d.revenue[n][k][m][p]));
        }
      }
    }
  }
  // nu[i][j][m][p]
  std::vector<std::vector<std::vector<std::vector<int>>>> nu(
      I, std::vector<std::vector<std::vector<int>>>(J, std::vector<std::vector<int>>(d.M)));
  for (int i = 0; i < I; ++i) {
    for (int j = 0; j < J; ++j) {
      const int n = d.customer_shipper[j];
      if (n < 0) continue;
      for (int m : d.services[n][d.customer_category[j]]) {
        for (int p = 0; p < d.prices(n, m); ++p) {
          nu[i][j][m].push_back(model.add_variable({cost_product_name(i, j, m, p), VarKind::continuous, 0.0,
                                                    kInfinity, VarRole::cost_product, {i, j, m, p}},
                                                   -d.cost_at(i, j, m, p)));
        }
      }
    }
  }

  auto add = [&model](std::string name, RowFamily family, std::vector<std::pair<int, double>> terms, Sense sense,
                      double rhs) {
    std::erase_if(terms, [](const auto& t) { return t.second == 0.0; });
    if (terms.empty()) return;
    model.add_constraint({std::move(name), std::move(terms), sense, rhs, family});
  };

  for (int n = 0; n < N; ++n) {
    for (int m : d.shipper_services(n)) {
      std::vector<std::pair<int, double>> t;
      for (int v : y[n][m]) t.emplace_back(v, 1.0);
      add(row_name("one_price", suffix({{'n', n}, {'m', m}})), RowFamily::one_price, std::move(t), Sense::le, 1.0);
    }
  }
  for (int n = 0; n < N; ++n) {
    std::vector<std::pair<int, double>> t;
    for (int m : d.shipper_services(n)) {
      for (int v : y[n][m]) t.emplace_back(v, 1.0);
    }
    add(row_name("offer_cap", suffix({{'n', n}})), RowFamily::offer_cap, std::move(t), Sense::le,
        static_cast<double>(d.category_count[n]));
  }
  for (int n = 0; n < N; ++n) {
    for (int k = 0; k < d.category_count[n]; ++k) {
      std::vector<std::pair<int, double>> t;
      for (int m : d.services[n][k]) t.emplace_back(z[n][k][m], 1.0);
      add(row_name("one_service", suffix({{'n', n}, {'k', k}})), RowFamily::one_service, std::move(t), Sense::le,
          1.0);
    }
  }
  for (int n = 0; n < N; ++n) {
    for (int k = 0; k < d.category_count[n]; ++k) {
      for (int m : d.services[n][k]) {
        std::vector<std::pair<int, double>> t{{z[n][k][m], 1.0}};
        for (int v : y[n][m]) t.emplace_back(v, -1.0);
        add(row_name("service_priced", suffix({{'n', n}, {'k', k}, {'m', m}})), RowFamily::service_priced,
            std::move(t), Sense::le, 0.0);
      }
    }
  }
  for (int i = 0; i < I; ++i) {
    std::vector<std::pair<int, double>> t;
    for (int j = 0; j < J; ++j) {
      for (int m = 0; m < d.M; ++m) {
        if (w[i][j][m] >= 0) t.emplace_back(w[i][j][m], d.load[j][m]);
      }
    }
    t.emplace_back(r[i], -d.capacity[i]);
    add(row_name("capacity", suffix({{'i', i}})), RowFamily::capacity, std::move(t), Sense::le, 0.0);
  }
  for (int i = 0; i < I; ++i) {
    for (int j = 0; j < J; ++j) {
      if (d.customer_shipper[j] < 0) continue;
      std::vector<std::pair<int, double>> t;
      for (int m = 0; m < d.M; ++m) {
        if (w[i][j][m] >= 0) t.emplace_back(w[i][j][m], 1.0);
      }
      t.emplace_back(r[i], -1.0);
      add(row_name("open_only", suffix({{'i', i}, {'j', j}})), RowFamily::open_only, std::move(t), Sense::le, 0.0);
    }
  }
  for (int j = 0; j < J; ++j) {
    const int n = d.customer_shipper[j];
    if (n < 0) continue;
    const int k = d.customer_category[j];
    for (int m : d.services[n][k]) {
      std::vector<std::pair<int, double>> t;
      for (int i = 0; i < I; ++i) t.emplace_back(w[i][j][m], 1.0);
      t.emplace_back(z[n][k][m], -1.0);
      add(row_name("assign", suffix({{'j', j}, {'m', m}})), RowFamily::assign, std::move(t), Sense::eq, 0.0);
    }
  }
  for (int n = 0; n < N; ++n) {
    for (int m : d.shipper_services(n)) {
      std::vector<std::pair<int, double>> t;
      for (int k = 0; k < d.category_count[n]; ++k) {
        if (z[n][k][m] >= 0) t.emplace_back(z[n][k][m], d.category_demand[n][k]);
      }
      for (int p = 0; p < d.prices(n, m); ++p) t.emplace_back(y[n][m][p], -d.min_demand[n][m][p]);
      add(row_name("min_demand", suffix({{'n', n}, {'m', m}})), RowFamily::min_demand, std::move(t), Sense::ge, 0.0);
    }
  }
  for (int n = 0; n < N; ++n) {
    for (int k = 0; k < d.category_count[n]; ++k) {
      for (int m : d.services[n][k]) {
        for (int p = 0; p < d.prices(n, m); ++p) {
          const int v = pi[n][k][m][p];
          const std::string s = suffix({{'n', n}, {'k', k}, {'m', m}, {'p', p}});
          add(row_name("pi_le_z", s), RowFamily::pi_le_z, {{v, 1.0}, {z[n][k][m], -1.0}}, Sense::le, 0.0);
          add(row_name("pi_le_y", s), RowFamily::pi_le_y, {{v, 1.0}, {y[n][m][p], -1.0}}, Sense::le, 0.0);
          add(row_name("pi_ge", s), RowFamily::pi_ge, {{v, 1.0}, {z[n][k][m], -1.0}, {y[n][m][p], -1.0}}, Sense::ge,
              -1.0);
        }
      }
    }
  }
  for (int i = 0; i < I; ++i) {
    for (int j = 0; j < J; ++j) {
      const int n = d.customer_shipper[j];
      if (n < 0) continue;
      for (int m : d.services[n][d.customer_category[j]]) {
        for (int p = 0; p < d.prices(n, m); ++p) {
          const int v = nu[i][j][m][p];
          const std::string s = suffix({{'i', i}, {'j', j}, {'m', m}, {'p', p}});
          add(row_name("nu_le_w", s), RowFamily::nu_le_w, {{v, 1.0}, {w[i][j][m], -1.0}}, Sense::le, 0.0);
          add(row_name("nu_le_y", s), RowFamily::nu_le_y, {{v, 1.0}, {y[n][m][p], -1.0}}, Sense::le, 0.0);
          add(row_name("nu_ge", s), RowFamily::nu_ge, {{v, 1.0}, {w[i][j][m], -1.0}, {y[n][m][p], -1.0}}, Sense::ge,
              -1.0);
        }
      }
    }
  }
  return model;
}

namespace {

template <typename T>
void grow(std::vector<T>& v, std::size_t size, const T& fill = T()) {
  if (v.size() < size) v.resize(size, fill);
}

int required_indices(VarRole role) {
  switch (role) {
    case VarRole::open:
      return 1;
    case VarRole::price:
    case VarRole::service:
    case VarRole::assign:
      return 3;
    case VarRole::offer_product:
    case VarRole::cost_product:
      return 4;
    case VarRole::other:
      break;
  }
  return 0;
}

}  // namespace

std::optional<Reduced> decode(const MilpModel& model) {
  if (model.empty()) return std::nullopt;
  const auto& vars = model.variables();
  Reduced d;
  int max_i = -1, max_j = -1, max_n = -1, max_m = -1, max_p = -1;
  std::vector<int> max_k;
  for (const auto& v : vars) {
    const auto& x = v.index;
    const int need = required_indices(v.role);
    if (need == 0) return std::nullopt;
    for (int c = 0; c < need; ++c) {
      if (x[c] < 0) return std::nullopt;
    }
    switch (v.role) {
      case VarRole::open:
        max_i = std::max(max_i, x[0]);
        break;
      case VarRole::price:
        max_n = std::max(max_n, x[0]);
        max_m = std::max(max_m, x[1]);
        max_p = std::max(max_p, x[2]);
        break;
      case VarRole::service:
        max_n = std::max(max_n, x[0]);
        grow(max_k, static_cast<std::size_t>(x[0]) + 1, -1);
        max_k[x[0]] = std::max(max_k[x[0]], x[1]);
        max_m = std::max(max_m, x[2]);
        break;
      case VarRole::assign:
      case VarRole::cost_product:
        max_i = std::max(max_i, x[0]);
        max_j = std::max(max_j, x[1]);
        max_m = std::max(max_m, x[2]);
        break;
      case VarRole::offer_product:
        max_n = std::max(max_n, x[0]);
        max_m = std::max(max_m, x[2]);
        break;
      case VarRole::other:
        return std::nullopt;
    }
  }
  if (max_i < 0) return std::nullopt;
  d.I = max_i + 1;
  d.J = max_j + 1;
  d.N = max_n + 1;
  d.M = max_m + 1;
  d.max_prices = max_p + 1;
  grow(max_k, static_cast<std::size_t>(d.N), -1);

  d.fixed_cost.assign(d.I, 0.0);
  d.capacity.assign(d.I, 0.0);
  d.category_count.assign(d.N, 0);
  d.services.resize(d.N);
  d.category_demand.resize(d.N);
  d.members.resize(d.N);
  d.revenue.resize(d.N);
  d.min_demand.assign(d.N, std::vector<std::vector<double>>(d.M));
  for (int n = 0; n < d.N; ++n) {
    const int K = max_k[n] + 1;
    d.services[n].resize(K);
    d.category_demand[n].assign(K, 0.0);
    d.members[n].resize(K);
    d.revenue[n].assign(K, std::vector<std::vector<double>>(d.M));
  }
  d.customer_shipper.assign(d.J, -1);
  d.customer_category.assign(d.J, -1);
  d.load.assign(d.J, std::vector<double>(d.M, 0.0));
  d.cost.assign(static_cast<std::size_t>(d.I) * d.J * d.M * d.max_prices, 0.0);

  std::vector<int> open_var(d.I, -1);
  std::vector<std::vector<std::vector<int>>> price_var(d.N, std::vector<std::vector<int>>(d.M));
  std::vector<std::vector<std::vector<int>>> service_var(d.N);
  for (int n = 0; n < d.N; ++n) service_var[n].assign(d.services[n].size(), std::vector<int>(d.M, -1));

  for (int v = 0; v < model.variable_count(); ++v) {
    const auto& x = vars[v].index;
    const double obj = model.objective_coefficient(v);
    switch (vars[v].role) {
      case VarRole::open:
        open_var[x[0]] = v;
        d.fixed_cost[x[0]] = -obj;
        break;
      case VarRole::price: {
        auto& slot = price_var[x[0]][x[1]];
        grow(slot, static_cast<std::size_t>(x[2]) + 1, -1);
        slot[x[2]] = v;
        break;
      }
      case VarRole::service:
        service_var[x[0]][x[1]][x[2]] = v;
        d.services[x[0]][x[1]].push_back(x[2]);
        break;
      case VarRole::offer_product: {
        if (x[1] >= static_cast<int>(d.revenue[x[0]].size())) return std::nullopt;
        auto& slot = d.revenue[x[0]][x[1]][x[2]];
        grow(slot, static_cast<std::size_t>(x[3]) + 1, 0.0);
        slot[x[3]] = obj;
        break;
      }
      case VarRole::cost_product:
        if (x[3] < 0 || x[3] >= d.max_prices) return std::nullopt;
        d.cost_at(x[0], x[1], x[2], x[3]) = obj == 0.0 ? 0.0 : -obj;
        break;
      default:
        break;
    }
  }
  for (int n = 0; n < d.N; ++n) {
    for (auto& s : d.services[n]) std::sort(s.begin(), s.end());
    for (int m = 0; m < d.M; ++m) d.min_demand[n][m].assign(price_var[n][m].size(), 0.0);
  }

  for (const auto& c : model.constraints()) {
    switch (c.family) {
      case RowFamily::offer_cap: {
        const int n = vars[c.terms.front().first].index[0];
        if (n < 0 || n >= d.N) return std::nullopt;
        d.category_count[n] = static_cast<int>(c.rhs);
        break;
      }
      case RowFamily::capacity:
        for (const auto& [v, a] : c.terms) {
          const auto& x = vars[v].index;
          if (vars[v].role == VarRole::open) {
            d.capacity[x[0]] = -a;
          } else if (vars[v].role == VarRole::assign) {
            d.load[x[1]][x[2]] = a;
          }
        }
        break;
      case RowFamily::assign:
        for (const auto& [v, a] : c.terms) {
          if (vars[v].role != VarRole::service) continue;
          const auto& x = vars[v].index;
          int j = -1;
          for (const auto& [u, b] : c.terms) {
            if (vars[u].role == VarRole::assign) j = vars[u].index[1];
          }
          if (j < 0) return std::nullopt;
          d.customer_shipper[j] = x[0];
          d.customer_category[j] = x[1];
        }
        break;
      case RowFamily::min_demand:
        for (const auto& [v, a] : c.terms) {
          const auto& x = vars[v].index;
          if (vars[v].role == VarRole::service) {
            d.category_demand[x[0]][x[1]] = a;
          } else if (vars[v].role == VarRole::price) {
            d.min_demand[x[0]][x[1]][x[2]] = a == 0.0 ? 0.0 : -a;
          }
        }
        break;
      default:
        break;
    }
  }
  for (int n = 0; n < d.N; ++n) {
    // Categories without any service never reach a row; keep what the model shows.
    d.category_count[n] = std::max(d.category_count[n], static_cast<int>(d.services[n].size()));
    if (static_cast<int>(d.services[n].size()) < d.category_count[n]) {
      d.services[n].resize(d.category_count[n]);
      d.category_demand[n].resize(d.category_count[n], 0.0);
      d.members[n].resize(d.category_count[n]);
      d.revenue[n].resize(d.category_count[n], std::vector<std::vector<double>>(d.M));
    }
  }
  for (int j = 0; j < d.J; ++j) {
    if (d.customer_shipper[j] >= 0) d.members[d.customer_shipper[j]][d.customer_category[j]].push_back(j);
  }
  for (int n = 0; n < d.N; ++n) {
    for (int k = 0; k < static_cast<int>(d.services[n].size()); ++k) {
      for (int m : d.services[n][k]) {
        auto& rev = d.revenue[n][k][m];
        if (rev.size() != static_cast<std::size_t>(d.prices(n, m))) rev.resize(d.prices(n, m), 0.0);
      }
    }
  }
  MilpModel rebuilt;
  try {
    rebuilt = build_model(d);
  } catch (const Error&) {
    return std::nullopt;
  }
  if (export_lp(rebuilt) != export_lp(model)) return std::nullopt;
  return d;
}

}  // namespace biloc::detail
