#include "biloc/solution.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "biloc/error.hpp"
#include "biloc/milp.hpp"
#include "json_util.hpp"

namespace biloc {

using detail::Json;
using detail::Node;

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal:
      return "optimal";
    case SolveStatus::infeasible:
      return "infeasible";
    case SolveStatus::time_limit:
      return "time_limit";
    case SolveStatus::trivial:
      return "trivial";
    case SolveStatus::error:
      return "error";
  }
  return "error";
}

SolveStatus solve_status_from_string(std::string_view text) {
  for (auto s : {SolveStatus::optimal, SolveStatus::infeasible, SolveStatus::time_limit, SolveStatus::trivial,
                 SolveStatus::error}) {
    if (text == to_string(s)) return s;
  }
  throw ParseError("unknown solve status '" + std::string(text) + "'");
}

double Solution::value(const std::string& name) const {
  auto it = values.find(name);
  return it == values.end() ? 0.0 : it->second;
}

int FirstStage::offered_count() const {
  int count = 0;
  for (const auto& row : service) {
    for (int m : row) count += m >= 0 ? 1 : 0;
  }
  return count;
}

namespace {

constexpr double kIntegrality = 1e-6;

int as_binary(double v, const std::string& name) {
  if (std::abs(v) <= kIntegrality) return 0;
  if (std::abs(v - 1.0) <= kIntegrality) return 1;
  throw FeasibilityError(name + " = " + std::to_string(v) + " is not binary");
}

}  // namespace

FirstStage first_stage(const Instance& inst, const Solution& sol) {
  FirstStage fs;
  const int I = inst.facility_count(), J = inst.customer_count(), N = inst.shipper_count(),
            M = inst.service_count();
  fs.open.assign(I, false);
  for (int i = 0; i < I; ++i) fs.open[i] = as_binary(sol.value(open_name(i)), open_name(i)) == 1;

  fs.price.assign(N, std::vector<int>(M, -1));
  fs.service.resize(N);
  for (int n = 0; n < N; ++n) {
    int offers = 0;
    for (int m = 0; m < M; ++m) {
      const int P = static_cast<int>(inst.ladder(n, m).size());
      for (int p = 0; p < P; ++p) {
        if (as_binary(sol.value(price_name(n, m, p)), price_name(n, m, p)) == 0) continue;
        if (fs.price[n][m] >= 0) {
          throw FeasibilityError("shipper " + std::to_string(n) + " has two prices for service " + std::to_string(m));
        }
        fs.price[n][m] = p;
        ++offers;
      }
    }
    if (offers > inst.category_count(n)) {
      throw FeasibilityError("shipper " + std::to_string(n) + " has more offers than categories");
    }
    fs.service[n].assign(inst.category_count(n), -1);
    for (int k = 0; k < inst.category_count(n); ++k) {
      for (int m : inst.category_services(n, k)) {
        if (as_binary(sol.value(service_name(n, k, m)), service_name(n, k, m)) == 0) continue;
        if (fs.service[n][k] >= 0) {
          throw FeasibilityError("category " + std::to_string(k) + " of shipper " + std::to_string(n) +
                                 " has two services");
        }
        if (fs.price[n][m] < 0) {
          throw FeasibilityError(service_name(n, k, m) + " is set without a price for the service");
        }
        fs.service[n][k] = m;
      }
    }
  }

  fs.share.assign(I, std::vector<double>(J, 0.0));
  for (int j = 0; j < J; ++j) {
    const auto& c = inst.customers[j];
    const int m = fs.service[c.shipper][c.category];
    if (m < 0) continue;
    for (int i = 0; i < I; ++i) fs.share[i][j] = sol.value(assign_name(i, j, m));
  }
  return fs;
}

std::vector<OfferSummary> summarize_offers(const Instance& inst, const RhoTable& rho, const Solution& sol) {
  const FirstStage fs = first_stage(inst, sol);
  std::vector<OfferSummary> out;
  for (int n = 0; n < inst.shipper_count(); ++n) {
    for (int k = 0; k < inst.category_count(n); ++k) {
      const int m = fs.service[n][k];
      if (m < 0) continue;
      const int p = fs.price[n][m];
      out.push_back({n, k, m, p, inst.price(n, m, p), rho.at(n, k, m, p)});
    }
  }
  return out;
}

std::string to_json(const Solution& s) {
  Json doc = Json::object();
  doc["status"] = to_string(s.status);
  doc["objective"] = s.objective;
  doc["bound"] = s.bound;
  doc["gap"] = s.gap;
  doc["nodes"] = s.nodes;
  doc["seconds"] = s.seconds;
  doc["method"] = s.method;
  doc["message"] = s.message;
  doc["revenue"] = s.revenue;
  doc["cost"] = s.cost;
  doc["fixed_cost"] = s.fixed_cost;
  doc["root_bound"] = s.root_bound;
  doc["bound_violations"] = s.bound_violations;
  Json values = Json::object();
  for (const auto& [name, v] : s.values) values[name] = v;
  doc["values"] = std::move(values);
  Json offers = Json::array();
  for (const auto& o : s.offers) {
    offers.push_back({{"shipper", o.shipper},
                      {"category", o.category},
                      {"service", o.service},
                      {"price_level", o.price_level},
                      {"price", o.price},
                      {"rho", o.rho}});
  }
  doc["offers"] = std::move(offers);
  return doc.dump(1) + "\n";
}

Solution solution_from_json(const std::string& text) {
  const Json doc = detail::parse_json_text(text, "solution");
  const Node root(doc, "");
  root.expect_object({"status", "objective", "bound", "gap", "nodes", "seconds", "method", "message", "revenue",
                      "cost", "fixed_cost", "root_bound", "bound_violations", "values", "offers"});
  Solution s;
  try {
    s.status = solve_status_from_string(root.field("status").string());
  } catch (const ParseError& e) {
    root.field("status").fail(e.what());
  }
  s.objective = root.field("objective").number();
  s.bound = root.field("bound").number();
  s.gap = root.field("gap").number();
  s.nodes = root.field("nodes").integer();
  s.seconds = root.field("seconds").number();
  s.method = root.field("method").string();
  if (root.has("message")) s.message = root.field("message").string();
  s.revenue = root.field("revenue").number();
  s.cost = root.field("cost").number();
  s.fixed_cost = root.field("fixed_cost").number();
  if (root.has("root_bound")) s.root_bound = root.field("root_bound").number();
  if (root.has("bound_violations")) s.bound_violations = root.field("bound_violations").integer();
  const Node values = root.field("values");
  if (!values.json().is_object()) values.fail("expected an object");
  for (const auto& item : values.json().items()) {
    s.values[item.key()] = values.field(item.key()).number();
  }
  if (root.has("offers")) {
    const Node offers = root.field("offers");
    for (std::size_t i = 0; i < offers.array_size(); ++i) {
      const Node o = offers.at(i);
      o.expect_object({"shipper", "category", "service", "price_level", "price", "rho"});
      s.offers.push_back({o.field("shipper").integer(), o.field("category").integer(), o.field("service").integer(),
                          o.field("price_level").integer(), o.field("price").number(), o.field("rho").number()});
    }
  }
  return s;
}

void save(const Solution& solution, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << to_json(solution);
  if (!out) throw Error("failed writing " + path.string());
}

Solution load_solution(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return solution_from_json(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace biloc
