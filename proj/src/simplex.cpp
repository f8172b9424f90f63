#include "biloc/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "biloc/error.hpp"

namespace biloc {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal:
      return "optimal";
    case LpStatus::infeasible:
      return "infeasible";
    case LpStatus::unbounded:
      return "unbounded";
  }
  return "unknown";
}

int LpProblem::add_column(double cost, double lo, double hi) {
  objective.push_back(cost);
  lower.push_back(lo);
  upper.push_back(hi);
  return column_count() - 1;
}

void LpProblem::add_row(std::vector<std::pair<int, double>> terms, Sense sense, double rhs) {
  rows.push_back({std::move(terms), sense, rhs});
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;

enum class At { lower, upper, zero, basic };

class Tableau {
 public:
  Tableau(const LpProblem& lp, const LpOptions& opt, bool bland) : lp_(lp), opt_(opt), bland_(bland) {
    n_ = lp.column_count();
    m_ = lp.row_count();
    if (static_cast<int>(lp.lower.size()) != n_ || static_cast<int>(lp.upper.size()) != n_) {
      throw SolverError("lp: bound vectors do not match the column count");
    }
    for (int j = 0; j < n_; ++j) {
      if (!(lp.lower[j] <= lp.upper[j])) throw SolverError("lp: column " + std::to_string(j) + " has lower > upper");
    }
    limit_ = opt.max_iterations > 0 ? opt.max_iterations : 20L * (n_ + 2L * m_) + 1000;
  }

  LpSolution run() {
    setup();
    LpSolution sol;
    if (artificials_ > 0) {
      std::vector<double> phase1(cols_, 0.0);
      for (int j = n_ + m_; j < cols_; ++j) phase1[j] = -1.0;
      if (!optimize(phase1)) throw SolverError("lp: phase one reported unbounded");
      double infeasibility = 0.0;
      for (int j = n_ + m_; j < cols_; ++j) infeasibility += value(j);
      if (infeasibility > opt_.feasibility_tol * (1.0 + rhs_scale_)) {
        sol.status = LpStatus::infeasible;
        finish(sol);
        return sol;
      }
      for (int j = n_ + m_; j < cols_; ++j) {
        lo_[j] = 0.0;
        hi_[j] = 0.0;
        if (state_[j] != At::basic) {
          state_[j] = At::lower;
          x_[j] = 0.0;
        }
      }
      for (int i = 0; i < m_; ++i) {
        if (basis_[i] >= n_ + m_) beta_[i] = 0.0;
      }
    }
    std::vector<double> cost(cols_, 0.0);
    const double sign = lp_.maximize ? 1.0 : -1.0;
    for (int j = 0; j < n_; ++j) cost[j] = sign * lp_.objective[j];
    sol.status = optimize(cost) ? LpStatus::optimal : LpStatus::unbounded;
    finish(sol);
    if (sol.status == LpStatus::optimal) {
      sol.duals.assign(m_, 0.0);
      for (int i = 0; i < m_; ++i) sol.duals[i] = -sign * d_[n_ + i];
      sol.reduced_costs.assign(n_, 0.0);
      for (int j = 0; j < n_; ++j) sol.reduced_costs[j] = sign * d_[j];
    }
    return sol;
  }

 private:
  double& at(int i, int j) { return t_[static_cast<std::size_t>(i) * cols_ + j]; }

  double value(int j) const {
    if (state_[j] != At::basic) return x_[j];
    return beta_[row_of_[j]];
  }

  void setup() {
    double scale = 0.0;
    for (const auto& r : lp_.rows) scale = std::max(scale, std::abs(r.rhs));
    rhs_scale_ = scale;

    // Nonbasic starting values of the structural columns.
    std::vector<double> start(n_);
    std::vector<At> start_state(n_);
    for (int j = 0; j < n_; ++j) {
      if (std::isfinite(lp_.lower[j])) {
        start[j] = lp_.lower[j];
        start_state[j] = At::lower;
      } else if (std::isfinite(lp_.upper[j])) {
        start[j] = lp_.upper[j];
        start_state[j] = At::upper;
      } else {
        start[j] = 0.0;
        start_state[j] = At::zero;
      }
    }

    std::vector<double> residual(m_);
    std::vector<int> art_sign(m_, 0);
    artificials_ = 0;
    for (int i = 0; i < m_; ++i) {
      double r = lp_.rows[i].rhs;
      for (const auto& [j, a] : lp_.rows[i].terms) {
        if (j < 0 || j >= n_) throw SolverError("lp: row " + std::to_string(i) + " references a missing column");
        r -= a * start[j];
      }
      residual[i] = r;
      const Sense s = lp_.rows[i].sense;
      const bool logical_ok = (s == Sense::le && r >= 0.0) || (s == Sense::ge && r <= 0.0) || (s == Sense::eq && r == 0.0);
      if (!logical_ok) {
        art_sign[i] = r > 0.0 ? 1 : -1;
        ++artificials_;
      }
    }

    cols_ = n_ + m_ + artificials_;
    t_.assign(static_cast<std::size_t>(m_) * cols_, 0.0);
    lo_.assign(cols_, 0.0);
    hi_.assign(cols_, 0.0);
    x_.assign(cols_, 0.0);
    state_.assign(cols_, At::lower);
    row_of_.assign(cols_, -1);
    basis_.assign(m_, -1);
    beta_.assign(m_, 0.0);

    for (int j = 0; j < n_; ++j) {
      lo_[j] = lp_.lower[j];
      hi_[j] = lp_.upper[j];
      x_[j] = start[j];
      state_[j] = start_state[j];
    }
    int next_art = n_ + m_;
    for (int i = 0; i < m_; ++i) {
      const int logical = n_ + i;
      switch (lp_.rows[i].sense) {
        case Sense::le:
          lo_[logical] = 0.0;
          hi_[logical] = kInfinity;
          break;
        case Sense::ge:
          lo_[logical] = -kInfinity;
          hi_[logical] = 0.0;
          break;
        case Sense::eq:
          lo_[logical] = 0.0;
          hi_[logical] = 0.0;
          break;
      }
      // Row i scaled by the inverse of its basic column's coefficient.
      const double scale_row = art_sign[i] != 0 ? static_cast<double>(art_sign[i]) : 1.0;
      for (const auto& [j, a] : lp_.rows[i].terms) at(i, j) += a * scale_row;
      at(i, logical) = scale_row;
      if (art_sign[i] != 0) {
        const int art = next_art++;
        lo_[art] = 0.0;
        hi_[art] = kInfinity;
        at(i, art) = 1.0;
        basis_[i] = art;
        beta_[i] = std::abs(residual[i]);
        state_[logical] = lp_.rows[i].sense == Sense::ge ? At::upper : At::lower;
        x_[logical] = 0.0;
      } else {
        basis_[i] = logical;
        beta_[i] = residual[i];
      }
      state_[basis_[i]] = At::basic;
      row_of_[basis_[i]] = i;
    }
  }

  // Maximizes cost . x from the current basis. Returns false when unbounded.
  bool optimize(const std::vector<double>& cost) {
    d_.assign(cols_, 0.0);
    for (int j = 0; j < cols_; ++j) d_[j] = cost[j];
    for (int i = 0; i < m_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      const double* row = &t_[static_cast<std::size_t>(i) * cols_];
      for (int j = 0; j < cols_; ++j) d_[j] -= cb * row[j];
    }
    for (int i = 0; i < m_; ++i) d_[basis_[i]] = 0.0;

    int degenerate_run = 0;
    while (true) {
      if (++iterations_ > limit_) {
        throw SolverError("lp: iteration limit of " + std::to_string(limit_) + " reached");
      }
      const int q = choose_entering();
      if (q < 0) return true;
      const double dir = can_increase(q) && d_[q] > kCostTol ? 1.0 : -1.0;

      double step = hi_[q] - lo_[q];
      int leave = -1;
      double leave_alpha = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double alpha = -dir * at(i, q);
        if (std::abs(alpha) <= kPivotTol) continue;
        const int b = basis_[i];
        double limit;
        if (alpha > 0.0) {
          if (!std::isfinite(hi_[b])) continue;
          limit = (hi_[b] - beta_[i]) / alpha;
        } else {
          if (!std::isfinite(lo_[b])) continue;
          limit = (lo_[b] - beta_[i]) / alpha;
        }
        if (limit < 0.0) limit = 0.0;
        bool take = limit < step - 1e-12;
        if (!take && leave >= 0 && limit <= step + 1e-12) {
          take = bland_ ? b < basis_[leave] : std::abs(alpha) > std::abs(leave_alpha);
        }
        if (take) {
          step = limit;
          leave = i;
          leave_alpha = alpha;
        }
      }
      if (!std::isfinite(step)) return false;

      if (step <= 1e-12) {
        if (++degenerate_run >= opt_.degenerate_switch) bland_ = true;
      } else {
        degenerate_run = 0;
      }

      for (int i = 0; i < m_; ++i) {
        const double alpha = -dir * at(i, q);
        if (alpha != 0.0) beta_[i] += alpha * step;
      }
      if (leave < 0) {
        // Bound flip.
        state_[q] = dir > 0.0 ? At::upper : At::lower;
        x_[q] = dir > 0.0 ? hi_[q] : lo_[q];
        continue;
      }
      const double entering_value = x_[q] + dir * step;
      const int out = basis_[leave];
      const bool hit_upper = leave_alpha > 0.0;
      state_[out] = hit_upper ? At::upper : At::lower;
      x_[out] = hit_upper ? hi_[out] : lo_[out];
      row_of_[out] = -1;
      pivot(leave, q);
      basis_[leave] = q;
      state_[q] = At::basic;
      row_of_[q] = leave;
      beta_[leave] = entering_value;
    }
  }

  bool can_increase(int j) const { return state_[j] != At::upper && x_[j] < hi_[j]; }
  bool can_decrease(int j) const { return state_[j] != At::lower && x_[j] > lo_[j]; }

  int choose_entering() const {
    int best = -1;
    double best_score = 0.0;
    for (int j = 0; j < cols_; ++j) {
      if (state_[j] == At::basic) continue;
      const double dj = d_[j];
      const bool eligible = (dj > kCostTol && can_increase(j)) || (dj < -kCostTol && can_decrease(j));
      if (!eligible) continue;
      if (bland_) return j;
      if (std::abs(dj) > best_score) {
        best_score = std::abs(dj);
        best = j;
      }
    }
    return best;
  }

  void pivot(int r, int q) {
    double* prow = &t_[static_cast<std::size_t>(r) * cols_];
    const double inv = 1.0 / prow[q];
    for (int j = 0; j < cols_; ++j) prow[j] *= inv;
    prow[q] = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = &t_[static_cast<std::size_t>(i) * cols_];
      const double f = row[q];
      if (f == 0.0) continue;
      for (int j = 0; j < cols_; ++j) row[j] -= f * prow[j];
      row[q] = 0.0;
    }
    const double f = d_[q];
    if (f != 0.0) {
      for (int j = 0; j < cols_; ++j) d_[j] -= f * prow[j];
      d_[q] = 0.0;
    }
  }

  void finish(LpSolution& sol) {
    sol.iterations = static_cast<int>(iterations_);
    sol.bland = bland_;
    sol.values.assign(n_, 0.0);
    for (int j = 0; j < n_; ++j) {
      double v = value(j);
      // Snap round-off at the bounds.
      if (std::abs(v - lo_[j]) <= 1e-11) v = lo_[j];
      if (std::abs(v - hi_[j]) <= 1e-11) v = hi_[j];
      sol.values[j] = v;
    }
    double obj = 0.0;
    for (int j = 0; j < n_; ++j) obj += lp_.objective[j] * sol.values[j];
    sol.objective = obj;
    sol.max_residual = residual(sol.values);
  }

 public:
  double residual(const std::vector<double>& v) const {
    double worst = 0.0;
    for (int j = 0; j < n_; ++j) {
      worst = std::max(worst, lp_.lower[j] - v[j]);
      worst = std::max(worst, v[j] - lp_.upper[j]);
    }
    for (const auto& row : lp_.rows) {
      double lhs = 0.0;
      for (const auto& [j, a] : row.terms) lhs += a * v[j];
      const double scale = 1.0 + std::abs(row.rhs);
      double viol = 0.0;
      if (row.sense != Sense::ge) viol = std::max(viol, lhs - row.rhs);
      if (row.sense != Sense::le) viol = std::max(viol, row.rhs - lhs);
      worst = std::max(worst, viol / scale);
    }
    return worst;
  }

 private:
  const LpProblem& lp_;
  const LpOptions& opt_;
  bool bland_;
  int n_ = 0;
  int m_ = 0;
  int cols_ = 0;
  int artificials_ = 0;
  long iterations_ = 0;
  long limit_ = 0;
  double rhs_scale_ = 0.0;
  std::vector<double> t_;
  std::vector<double> d_;
  std::vector<double> lo_, hi_, x_, beta_;
  std::vector<At> state_;
  std::vector<int> basis_, row_of_;
};

}  // namespace

LpSolution solve_lp(const LpProblem& problem, const LpOptions& options) {
  LpSolution sol;
  bool retry = options.bland;
  if (!options.bland) {
    try {
      Tableau tab(problem, options, false);
      sol = tab.run();
      if (sol.status != LpStatus::optimal || sol.max_residual <= options.feasibility_tol) return sol;
    } catch (const SolverError&) {
    }
    retry = true;
  }
  if (retry) {
    Tableau tab(problem, options, true);
    sol = tab.run();
    if (sol.status == LpStatus::optimal && sol.max_residual > options.feasibility_tol) {
      throw SolverError("lp: residual " + std::to_string(sol.max_residual) + " exceeds tolerance after Bland restart");
    }
  }
  return sol;
}

}  // namespace biloc
