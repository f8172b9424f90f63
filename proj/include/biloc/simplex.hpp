#pragma once

#include <limits>
#include <utility>
#include <vector>

namespace biloc {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense { le, ge, eq };

enum class LpStatus { optimal, infeasible, unbounded };

const char* to_string(LpStatus status);

struct LpRow {
  std::vector<std::pair<int, double>> terms;  // (column, coefficient)
  Sense sense = Sense::le;
  double rhs = 0.0;
};

// Linear program over bounded columns. Every column needs at least one finite
// bound; rows are stored sparse and densified by the solver.
struct LpProblem {
  bool maximize = true;
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<LpRow> rows;

  int add_column(double cost, double lo, double hi);
  void add_row(std::vector<std::pair<int, double>> terms, Sense sense, double rhs);
  int column_count() const { return static_cast<int>(objective.size()); }
  int row_count() const { return static_cast<int>(rows.size()); }
};

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  double objective = 0.0;
  std::vector<double> values;
  // Sensitivity of the objective to each row's right-hand side.
  std::vector<double> duals;
  // Objective-sense reduced costs of the structural columns.
  std::vector<double> reduced_costs;
  int iterations = 0;
  bool bland = false;       // Bland's rule was active when the solve ended
  double max_residual = 0;  // worst row or bound violation of `values`
};

struct LpOptions {
  bool bland = false;           // start directly with Bland's rule
  int degenerate_switch = 50;   // consecutive degenerate pivots before switching to Bland
  long max_iterations = 0;      // 0 picks a limit from the problem size
  double feasibility_tol = 1e-7;
};

// Bounded-variable primal simplex on a dense tableau with a two-phase start.
// Dantzig pricing falls back to Bland's rule after a run of degenerate pivots;
// a solve whose final residual exceeds the feasibility tolerance is repeated
// with Bland's rule from scratch and throws SolverError if that also fails.
LpSolution solve_lp(const LpProblem& problem, const LpOptions& options = {});

}  // namespace biloc
