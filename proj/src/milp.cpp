#include "biloc/milp.hpp"

#include "biloc/error.hpp"
#include "structure.hpp"

namespace biloc {

const char* to_string(VarRole role) {
  switch (role) {
    case VarRole::open:
      return "open";
    case VarRole::price:
      return "price";
    case VarRole::service:
      return "service";
    case VarRole::assign:
      return "assign";
    case VarRole::offer_product:
      return "offer_product";
    case VarRole::cost_product:
      return "cost_product";
    case VarRole::other:
      return "other";
  }
  return "other";
}

const char* to_string(RowFamily family) {
  switch (family) {
    case RowFamily::one_price:
      return "one_price";
    case RowFamily::offer_cap:
      return "offer_cap";
    case RowFamily::one_service:
      return "one_service";
    case RowFamily::service_priced:
      return "service_priced";
    case RowFamily::capacity:
      return "capacity";
    case RowFamily::open_only:
      return "open_only";
    case RowFamily::assign:
      return "assign";
    case RowFamily::min_demand:
      return "min_demand";
    case RowFamily::pi_le_z:
      return "pi_le_z";
    case RowFamily::pi_le_y:
      return "pi_le_y";
    case RowFamily::pi_ge:
      return "pi_ge";
    case RowFamily::nu_le_w:
      return "nu_le_w";
    case RowFamily::nu_le_y:
      return "nu_le_y";
    case RowFamily::nu_ge:
      return "nu_ge";
    case RowFamily::other:
      return "other";
  }
  return "other";
}

int MilpModel::add_variable(Variable v, double objective) {
  if (v.name.empty()) throw BuildError("variable without a name");
  const int id = variable_count();
  if (!by_name_.emplace(v.name, id).second) throw BuildError("duplicate variable '" + v.name + "'");
  variables_.push_back(std::move(v));
  objective_.push_back(objective);
  return id;
}

void MilpModel::add_constraint(Constraint c) {
  for (const auto& [v, a] : c.terms) {
    if (v < 0 || v >= variable_count()) throw BuildError("constraint '" + c.name + "' references a missing variable");
  }
  constraints_.push_back(std::move(c));
}

void MilpModel::set_bounds(int v, double lower, double upper) {
  auto& var = variables_.at(v);
  var.lower = lower;
  var.upper = upper;
}

int MilpModel::find(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? -1 : it->second;
}

ModelCounts counts(const MilpModel& model) {
  ModelCounts c;
  for (const auto& v : model.variables()) {
    switch (v.role) {
      case VarRole::open:
        ++c.open;
        break;
      case VarRole::price:
        ++c.price;
        break;
      case VarRole::service:
        ++c.service;
        break;
      case VarRole::assign:
        ++c.assign;
        break;
      case VarRole::offer_product:
        ++c.offer_product;
        break;
      case VarRole::cost_product:
        ++c.cost_product;
        break;
      case VarRole::other:
        break;
    }
  }
  c.rows = model.constraints().size();
  return c;
}

ModelCounts expected_counts(const Instance& inst) {
  ModelCounts c;
  c.open = inst.facilities.size();
  for (int n = 0; n < inst.shipper_count(); ++n) {
    for (int m : inst.shipper_services(n)) c.price += inst.ladder(n, m).size();
    for (int k = 0; k < inst.category_count(n); ++k) {
      for (int m : inst.category_services(n, k)) {
        c.service += 1;
        c.offer_product += inst.ladder(n, m).size();
      }
    }
  }
  for (int j = 0; j < inst.customer_count(); ++j) {
    const int n = inst.customers[j].shipper;
    for (int m : inst.customer_services(j)) {
      c.assign += inst.facilities.size();
      c.cost_product += inst.facilities.size() * inst.ladder(n, m).size();
    }
  }
  c.rows = 0;
  return c;
}

namespace {

std::string join(char head, std::initializer_list<std::pair<char, int>> parts) {
  std::string s(1, head);
  for (const auto& [c, v] : parts) {
    s += '_';
    s += c;
    s += std::to_string(v);
  }
  return s;
}

}  // namespace

std::string open_name(int i) { return join('r', {{'i', i}}); }
std::string price_name(int n, int m, int p) { return join('y', {{'n', n}, {'m', m}, {'p', p}}); }
std::string service_name(int n, int k, int m) { return join('z', {{'n', n}, {'k', k}, {'m', m}}); }
std::string assign_name(int i, int j, int m) { return join('w', {{'i', i}, {'j', j}, {'m', m}}); }
std::string offer_product_name(int n, int k, int m, int p) {
  return "pi" + join('_', {{'n', n}, {'k', k}, {'m', m}, {'p', p}}).substr(1);
}
std::string cost_product_name(int i, int j, int m, int p) {
  return "nu" + join('_', {{'i', i}, {'j', j}, {'m', m}, {'p', p}}).substr(1);
}

MilpModel build(const Instance& instance, const RhoTable& rho) {
  return detail::build_model(detail::reduce(instance, rho));
}

LpProblem relaxation(const MilpModel& model) {
  LpProblem lp;
  lp.maximize = true;
  for (int v = 0; v < model.variable_count(); ++v) {
    const auto& var = model.variables()[v];
    lp.add_column(model.objective_coefficient(v), var.lower, var.upper);
  }
  for (const auto& c : model.constraints()) lp.add_row(c.terms, c.sense, c.rhs);
  return lp;
}

}  // namespace biloc
