#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "biloc/choice.hpp"
#include "biloc/instance.hpp"
#include "biloc/simplex.hpp"

namespace biloc {

enum class VarKind { binary, continuous };

// Semantic tag of a model column.
enum class VarRole {
  open,           // r_i
  price,          // y_n^{mp}
  service,        // z_nk^m
  assign,         // w_ij^m
  offer_product,  // pi_nk^{mp} = y_n^{mp} z_nk^m
  cost_product,   // nu_ij^{mp} = w_ij^m y_{n_j}^{mp}
  other,
};

// Constraint family of a model row.
enum class RowFamily {
  one_price,       // sum_p y_n^{mp} <= 1
  offer_cap,       // sum_m sum_p y_n^{mp} <= |K_n|
  one_service,     // sum_m z_nk^m <= 1
  service_priced,  // z_nk^m <= sum_p y_n^{mp}
  capacity,        // sum_j sum_m gamma^m d_j w_ij^m <= u_i r_i
  open_only,       // sum_m w_ij^m <= r_i
  assign,          // sum_i w_ij^m = z_{n_j k_j}^m
  min_demand,      // sum_k d_k z_nk^m >= sum_p l_n^{mp} y_n^{mp}
  pi_le_z,
  pi_le_y,
  pi_ge,
  nu_le_w,
  nu_le_y,
  nu_ge,
  other,
};

const char* to_string(VarRole role);
const char* to_string(RowFamily family);

struct Variable {
  std::string name;
  VarKind kind = VarKind::continuous;
  double lower = 0.0;
  double upper = kInfinity;
  VarRole role = VarRole::other;
  // Role-specific indices, unused slots are -1:
  // open (i), price (n, m, p), service (n, k, m), assign (i, j, m),
  // offer_product (n, k, m, p), cost_product (i, j, m, p).
  std::array<int, 4> index{-1, -1, -1, -1};
};

struct Constraint {
  std::string name;
  std::vector<std::pair<int, double>> terms;  // (variable, coefficient)
  Sense sense = Sense::le;
  double rhs = 0.0;
  RowFamily family = RowFamily::other;
};

// Solver-agnostic linear model, always a maximization.
class MilpModel {
 public:
  int add_variable(Variable v, double objective = 0.0);
  void add_constraint(Constraint c);

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<double>& objective() const { return objective_; }
  double objective_coefficient(int v) const { return objective_[v]; }
  void set_objective(int v, double coefficient) { objective_.at(v) = coefficient; }
  void set_bounds(int v, double lower, double upper);

  int variable_count() const { return static_cast<int>(variables_.size()); }
  int constraint_count() const { return static_cast<int>(constraints_.size()); }
  // -1 when absent.
  int find(const std::string& name) const;

  bool empty() const { return variables_.empty(); }

 private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  std::vector<double> objective_;
  std::unordered_map<std::string, int> by_name_;
};

struct ModelCounts {
  std::size_t open = 0;
  std::size_t price = 0;
  std::size_t service = 0;
  std::size_t assign = 0;
  std::size_t offer_product = 0;
  std::size_t cost_product = 0;
  std::size_t rows = 0;

  bool operator==(const ModelCounts&) const = default;
};

ModelCounts counts(const MilpModel& model);
// Counts implied by the instance alone.
ModelCounts expected_counts(const Instance& instance);

// Canonical variable names.
std::string open_name(int i);
std::string price_name(int n, int m, int p);
std::string service_name(int n, int k, int m);
std::string assign_name(int i, int j, int m);
std::string offer_product_name(int n, int k, int m, int p);
std::string cost_product_name(int i, int j, int m, int p);

// Single-level model with expected revenue rho d_k q on pi and expected
// assignment cost rho c on nu. Throws BuildError naming the first (n, k, m, p)
// without a rho entry.
MilpModel build(const Instance& instance, const RhoTable& rho);

// Continuous relaxation with the model's own bounds.
LpProblem relaxation(const MilpModel& model);

// CPLEX-style LP text: Maximize / Subject To / Bounds / Binaries / End.
std::string export_lp(const MilpModel& model);
// Inverse of export_lp. Throws ParseError with a line number on malformed
// input and on a file that declares no variables.
MilpModel parse_lp(const std::string& text);

}  // namespace biloc
