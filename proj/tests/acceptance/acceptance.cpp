// Acceptance checks, one PASS/FAIL line per criterion.
//
//   biloc_acceptance            run every criterion
//   biloc_acceptance 1 4        run criteria 1 and 4
//
// Exit status is 0 only when every selected criterion passes.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "biloc/bench.hpp"
#include "biloc/bounds.hpp"
#include "biloc/choice.hpp"
#include "biloc/generator.hpp"
#include "biloc/milp.hpp"
#include "biloc/oracle.hpp"
#include "biloc/solver.hpp"
#include "tiny_family.hpp"

namespace fs = std::filesystem;

namespace {

// Tolerances and budgets.
constexpr int kTinyCount = 200;
constexpr double kAgreeRel = 1e-6;
constexpr double kC1Seconds = 300.0;

constexpr double kAlphaTarget = -0.45289;
constexpr double kAlphaTol = 1e-4;
constexpr std::array<double, 11> kReferenceGrid = {-0.45289, -0.4076,  -0.36231, -0.31702, -0.27173, -0.22644,
                                            -0.18115, -0.13587, -0.09058, -0.04529, 0.0};
constexpr double kFiveDecimals = 5e-6;

constexpr std::size_t kScenarioCount = 200000;
constexpr double kSigmas = 3.0;
constexpr double kC3Seconds = 120.0;

// Largest grid alpha on the desk instance that is certified trivial, with
// every smaller grid alpha also certified.
constexpr double kGoldenAlphaStar = -0.27173219298897966;
constexpr double kGoldenTol = 1e-12;

constexpr double kBetaUniformRel = 0.05;
constexpr double kFlatRangeRel = 0.05;
constexpr double kMonotoneTol = 1e-7;
constexpr double kC5Seconds = 1800.0;

constexpr int kProductModels = 50;
constexpr double kProductTol = 1e-9;

constexpr double kDeskSeconds = 600.0;

using Clock = std::chrono::steady_clock;
constexpr double kInf = std::numeric_limits<double>::infinity();

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

bool agree(double a, double b) { return std::abs(a - b) <= kAgreeRel * std::max(1.0, std::abs(b)); }

struct Result {
  bool pass = false;
  std::string detail;
};

void report(int id, const std::string& name, const Result& r) {
  std::printf("%s C%d %s: %s\n", r.pass ? "PASS" : "FAIL", id, name.c_str(), r.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

// Objectives from the external solver, keyed by file path.
std::map<std::string, std::pair<std::string, double>> external_solve(const std::vector<std::string>& files) {
  std::map<std::string, std::pair<std::string, double>> out;
  std::string cmd = std::string(BILOC_PYTHON) + " " + BILOC_HIGHS_SCRIPT + " --time-limit 60";
  for (const auto& f : files) cmd += " " + f;
  cmd += " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return out;
  char line[4096];
  while (std::fgets(line, sizeof line, pipe)) {
    std::istringstream is(line);
    std::string path, status, value;
    if (!(is >> path >> status >> value)) continue;
    out[path] = {status, std::strtod(value.c_str(), nullptr)};
  }
  pclose(pipe);
  return out;
}

Result oracle_equivalence() {
  const auto start = Clock::now();
  const fs::path dir = fs::temp_directory_path() / "biloc_acceptance_c1";
  fs::create_directories(dir);
  std::vector<std::string> files;
  std::vector<double> oracle(kTinyCount), automatic(kTinyCount), bnb(kTinyCount);
  int mismatches = 0, nontrivial = 0;
  double worst = 0.0;
  std::string first_problem;
  for (int s = 0; s < kTinyCount; ++s) {
    const biloc::Instance inst = biloc::testing::tiny_instance(static_cast<std::uint64_t>(s) + 1);
    const biloc::RhoTable rho = biloc::rho_table_closed_form(inst);
    const biloc::MilpModel model = biloc::build(inst, rho);
    oracle[s] = biloc::enumerate_oracle(inst, rho).objective;
    automatic[s] = biloc::solve(model).objective;
    biloc::SolveOptions o;
    o.method = biloc::SolveMethod::lp_bnb;
    bnb[s] = biloc::solve(model, o).objective;
    nontrivial += oracle[s] > 0.0 ? 1 : 0;
    const std::string path = (dir / ("tiny_" + std::to_string(s + 1) + ".lp")).string();
    std::ofstream(path) << biloc::export_lp(model);
    files.push_back(path);
  }
  const auto external = external_solve(files);
  for (int s = 0; s < kTinyCount; ++s) {
    auto it = external.find(files[s]);
    const bool have = it != external.end() && it->second.first == "optimal";
    const double ext = have ? it->second.second : std::nan("");
    for (double v : {automatic[s], bnb[s], ext}) {
      if (std::isfinite(v)) worst = std::max(worst, std::abs(v - oracle[s]) / std::max(1.0, std::abs(oracle[s])));
    }
    if (!have || !agree(automatic[s], oracle[s]) || !agree(bnb[s], oracle[s]) || !agree(ext, oracle[s])) {
      ++mismatches;
      if (first_problem.empty()) {
        first_problem = fmt(" first mismatch seed %d: oracle %.10g solve %.10g lp_bnb %.10g external %s %.10g", s + 1,
                            oracle[s], automatic[s], bnb[s], have ? "optimal" : "missing", ext);
      }
    }
  }
  const double seconds = since(start);
  Result r;
  r.pass = mismatches == 0 && seconds <= kC1Seconds;
  r.detail = fmt("%d/%d instances agree (%d with positive optimum), max relative difference %.2e, %.1f s (limit %.0f s)",
                 kTinyCount - mismatches, kTinyCount, nontrivial, worst, seconds, kC1Seconds) +
             first_problem;
  return r;
}

Result alpha_replication() {
  const double alpha = biloc::alpha_for_target_rho(0.005, 15.0, 4.5, 3.0, 1.0);
  const auto grid = biloc::alpha_sweep_values(alpha, 11);
  bool grid_ok = grid.size() == kReferenceGrid.size();
  double worst = 0.0;
  for (std::size_t i = 0; grid_ok && i < grid.size(); ++i) {
    const double rounded = std::round(grid[i] * 1e5) / 1e5;
    worst = std::max(worst, std::abs(rounded - kReferenceGrid[i]));
    grid_ok = grid_ok && std::abs(rounded - kReferenceGrid[i]) <= kFiveDecimals;
  }
  Result r;
  r.pass = std::abs(alpha - kAlphaTarget) <= kAlphaTol && grid_ok;
  r.detail = fmt("alpha %.8f (target %.5f +- %.0e), grid of %zu rounded to 5 decimals off by at most %.1e", alpha,
                 kAlphaTarget, kAlphaTol, grid.size(), worst);
  return r;
}

Result saa_consistency() {
  const auto start = Clock::now();
  // First seed of the tiny family with a positive optimum.
  biloc::Instance inst;
  biloc::Solution sol;
  std::uint64_t seed = 1;
  for (;; ++seed) {
    inst = biloc::testing::tiny_instance(seed);
    sol = biloc::solve(biloc::build(inst, biloc::rho_table_closed_form(inst)));
    if (sol.objective > 1.0) break;
  }
  const auto scenarios = biloc::scenarios_for(inst, kScenarioCount, 20240607);
  const auto sim = biloc::simulate(inst, biloc::first_stage(inst, sol), scenarios,
                                   biloc::SimulationMode::reduced_consistent);
  const double deviation = std::abs(sim.mean - sol.objective);
  const bool mean_ok = sim.infeasible == 0 && deviation <= kSigmas * sim.std_error;

  const auto closed = biloc::rho_table_closed_form(inst);
  const auto saa = biloc::rho_table_saa(inst, scenarios);
  int entries = 0, outside = 0;
  double worst = 0.0;
  for (const auto& [key, rho] : closed.entries()) {
    const double s = saa.at(key[0], key[1], key[2], key[3]);
    const double sigma = std::sqrt(rho * (1.0 - rho) / static_cast<double>(kScenarioCount));
    const double z = sigma > 0.0 ? std::abs(s - rho) / sigma : (s == rho ? 0.0 : kInf);
    worst = std::max(worst, z);
    ++entries;
    if (std::abs(s - rho) > kSigmas * sigma) ++outside;
  }
  const double seconds = since(start);
  Result r;
  r.pass = mean_ok && outside == 0 && seconds <= kC3Seconds;
  r.detail = fmt("tiny seed %llu: objective %.6f, simulated mean %.6f, |diff| %.4f = %.2f SE; rho_saa within 3 sigma "
                 "on %d/%d entries (worst %.2f sigma); %.1f s",
                 static_cast<unsigned long long>(seed), sol.objective, sim.mean, deviation,
                 sim.std_error > 0 ? deviation / sim.std_error : 0.0, entries - outside, entries, worst, seconds);
  return r;
}

double solve_objective(const biloc::Instance& inst, biloc::Solution* out = nullptr) {
  biloc::SolveOptions o;
  o.workers = 1;
  const auto sol = biloc::solve(biloc::build(inst, biloc::rho_table_closed_form(inst)), o);
  if (sol.status != biloc::SolveStatus::optimal && sol.status != biloc::SolveStatus::trivial) {
    std::fprintf(stderr, "solve ended with status %s\n", biloc::to_string(sol.status));
  }
  if (out) *out = sol;
  return sol.objective;
}

// Offer bound recomputed from the raw instance data.
double independent_offer_bound(const biloc::Instance& inst) {
  double total = 0.0;
  for (int n = 0; n < inst.shipper_count(); ++n) {
    for (int k = 0; k < inst.category_count(n); ++k) {
      double best = 0.0;
      for (int m : inst.category_services(n, k)) {
        double serve = 0.0;
        double demand = 0.0;
        for (int j = 0; j < inst.customer_count(); ++j) {
          if (inst.customers[j].shipper != n || inst.customers[j].category != k) continue;
          demand += inst.customers[j].demand;
          double cheapest = kInf;
          for (int i = 0; i < inst.facility_count(); ++i) cheapest = std::min(cheapest, inst.cost(i, j, m));
          serve += cheapest;
        }
        for (const auto& e : inst.ladder(n, m)) {
          const double gap = inst.choice.alpha * e.price + inst.choice.L[n][k][m] - inst.choice.L_optout[n][k];
          const double rho = 1.0 / (1.0 + std::exp(-gap / inst.choice.beta));
          best = std::max(best, rho * (demand * e.price - serve));
        }
      }
      total += best;
    }
  }
  double cheapest_fixed = kInf;
  for (const auto& f : inst.facilities) cheapest_fixed = std::min(cheapest_fixed, f.fixed_cost);
  return total - cheapest_fixed;
}

struct AlphaSweep {
  std::vector<double> alpha;
  std::vector<biloc::Solution> solutions;
  std::vector<double> bounds;
  std::vector<double> independent_bounds;
};

AlphaSweep desk_alpha_sweep(double beta) {
  biloc::SweepSpec spec = biloc::default_sweep(biloc::SweepKind::alpha);
  AlphaSweep out;
  out.alpha = spec.values;
  biloc::Instance inst = biloc::generate(spec.generator);
  inst.choice.beta = beta;
  for (double a : out.alpha) {
    inst.choice.alpha = a;
    biloc::Solution s;
    solve_objective(inst, &s);
    out.solutions.push_back(s);
    out.bounds.push_back(biloc::profit_upper_bound(inst, biloc::rho_table_closed_form(inst)));
    out.independent_bounds.push_back(independent_offer_bound(inst));
  }
  return out;
}

Result trivial_certification() {
  const auto sweep = desk_alpha_sweep(1.0);
  std::size_t certified = 0;
  while (certified < sweep.alpha.size()) {
    const auto& s = sweep.solutions[certified];
    const bool ok = s.status == biloc::SolveStatus::trivial && s.objective == 0.0 && s.nodes == 0 &&
                    sweep.bounds[certified] <= biloc::kTrivialThreshold &&
                    sweep.independent_bounds[certified] <= biloc::kTrivialThreshold;
    if (!ok) break;
    ++certified;
  }
  Result r;
  if (certified == 0) {
    r.detail = "no grid point is certified trivial";
    return r;
  }
  const double alpha_star = sweep.alpha[certified - 1];
  std::size_t zero = certified;
  while (zero < sweep.alpha.size() && sweep.solutions[zero].objective == 0.0) ++zero;
  double bound_gap = 0.0;
  for (std::size_t i = 0; i < sweep.alpha.size(); ++i) {
    bound_gap = std::max(bound_gap, std::abs(sweep.bounds[i] - sweep.independent_bounds[i]) /
                                        std::max(1.0, std::abs(sweep.independent_bounds[i])));
  }
  r.pass = std::abs(alpha_star - kGoldenAlphaStar) <= kGoldenTol && bound_gap <= kAgreeRel;
  r.detail = fmt("alpha* = %.5f (golden %.5f): %zu grid points certified by the offer bound with 0 nodes; "
                 "objective is 0 up to alpha = %.5f; library and recomputed bounds differ by at most %.1e",
                 alpha_star, kGoldenAlphaStar, certified, sweep.alpha[zero - 1], bound_gap);
  return r;
}

bool nondecreasing(const std::vector<double>& v, std::size_t* where) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] < v[i - 1] - kMonotoneTol * std::max(1.0, std::abs(v[i - 1]))) {
      *where = i;
      return false;
    }
  }
  return true;
}

Result monotonicity() {
  const auto start = Clock::now();
  std::vector<std::string> parts;
  bool all = true;
  auto sub = [&](bool ok, const std::string& text) {
    all = all && ok;
    parts.push_back(std::string(ok ? "pass " : "FAIL ") + text);
    std::printf("  C5 %s %s\n", ok ? "pass" : "FAIL", text.c_str());
    std::fflush(stdout);
  };

  {
    const auto sweep = desk_alpha_sweep(1.0);
    std::vector<double> obj;
    for (const auto& s : sweep.solutions) obj.push_back(s.objective);
    std::size_t at = 0;
    const bool ok = nondecreasing(obj, &at);
    sub(ok, ok ? fmt("alpha sweep nondecreasing over %zu points (%.4f to %.4f)", obj.size(), obj.front(), obj.back())
               : fmt("alpha sweep drops at alpha = %.5f", sweep.alpha[at]));
  }
  {
    biloc::Instance inst = biloc::generate(biloc::GeneratorParams{});
    inst.choice.alpha = -0.1;
    inst.choice.beta = 8.0;
    const double at8 = solve_objective(inst);
    biloc::SolveOptions o;
    const double uniform = biloc::solve(biloc::build(inst, biloc::rho_table_constant(inst, 0.5)), o).objective;
    const double rel = std::abs(at8 - uniform) / std::max(1.0, std::abs(uniform));
    sub(rel <= kBetaUniformRel, fmt("beta = 8 objective %.4f vs rho = 0.5 objective %.4f: relative difference %.4f "
                                    "(limit %.2f)",
                                    at8, uniform, rel, kBetaUniformRel));
  }
  {
    const auto sweep = desk_alpha_sweep(32.0);
    double lo = kInf, hi = -kInf, sum = 0.0;
    for (const auto& s : sweep.solutions) {
      lo = std::min(lo, s.objective);
      hi = std::max(hi, s.objective);
      sum += s.objective;
    }
    const double mean = sum / static_cast<double>(sweep.solutions.size());
    const double rel = mean != 0.0 ? (hi - lo) / std::abs(mean) : kInf;
    sub(rel <= kFlatRangeRel, fmt("beta = 32 alpha sweep range %.4f over mean %.4f = %.4f (limit %.2f)", hi - lo,
                                  mean, rel, kFlatRangeRel));
  }
  {
    const biloc::SweepSpec spec = biloc::default_sweep(biloc::SweepKind::ratio);
    const biloc::Instance base = biloc::generate(spec.generator);
    std::vector<double> obj;
    for (double ratio : spec.values) obj.push_back(solve_objective(biloc::scale_to_ratio(base, ratio)));
    std::size_t at = 0;
    const bool ok = nondecreasing(obj, &at);
    sub(ok, ok ? fmt("ratio sweep nondecreasing over %zu ratios (%.4f to %.4f)", obj.size(), obj.front(), obj.back())
               : fmt("ratio sweep drops at ratio = %.2f", spec.values[at]));
  }
  const double seconds = since(start);
  const bool in_time = seconds <= kC5Seconds;
  Result r;
  r.pass = all && in_time;
  int failed = 0;
  for (const auto& p : parts) failed += p.rfind("FAIL", 0) == 0 ? 1 : 0;
  r.detail = fmt("%d of %zu properties hold, %.1f s (limit %.0f s)", static_cast<int>(parts.size()) - failed,
                 parts.size(), seconds, kC5Seconds);
  return r;
}

Result linearization() {
  int checked = 0, integral = 0;
  double worst = 0.0;
  std::string problem;
  for (int s = 0; s < kProductModels; ++s) {
    const biloc::Instance inst = biloc::testing::tiny_instance(1000 + static_cast<std::uint64_t>(s));
    const biloc::MilpModel model = biloc::build(inst, biloc::rho_table_closed_form(inst));
    for (auto method : {biloc::SolveMethod::lp_bnb, biloc::SolveMethod::automatic}) {
      biloc::SolveOptions o;
      o.method = method;
      const auto sol = biloc::solve(model, o);
      ++checked;
      if (sol.status != biloc::SolveStatus::optimal && sol.status != biloc::SolveStatus::trivial) {
        if (problem.empty()) problem = fmt(" model %d ended %s", s, biloc::to_string(sol.status));
        continue;
      }
      ++integral;
      for (const auto& v : model.variables()) {
        const auto& x = v.index;
        double residual = 0.0;
        if (v.role == biloc::VarRole::offer_product) {
          residual = sol.value(v.name) - sol.value(biloc::price_name(x[0], x[2], x[3])) *
                                             sol.value(biloc::service_name(x[0], x[1], x[2]));
        } else if (v.role == biloc::VarRole::cost_product) {
          const auto& c = inst.customers[x[1]];
          residual = sol.value(v.name) - sol.value(biloc::assign_name(x[0], x[1], x[2])) *
                                             sol.value(biloc::price_name(c.shipper, x[2], x[3]));
        } else {
          continue;
        }
        worst = std::max(worst, std::abs(residual));
        if (std::abs(residual) > kProductTol && problem.empty()) {
          problem = fmt(" model %d %s residual %.3e", s, v.name.c_str(), residual);
        }
      }
    }
  }
  Result r;
  r.pass = integral == checked && worst <= kProductTol;
  r.detail = fmt("%d/%d solves integral over %d models, worst |pi - yz| or |nu - wy| = %.2e (limit %.0e)", integral,
                 checked, kProductModels, worst, kProductTol) +
             problem;
  return r;
}

Result desk_tractability() {
  biloc::GeneratorParams p;
  p.facilities = 4;
  p.customers = 48;
  p.shippers = 2;
  p.categories = 3;
  p.services = 3;
  p.prices = 5;
  p.ratio = 2.0;
  p.alpha = -0.1;
  p.beta = 1.0;
  const biloc::Instance inst = biloc::generate(p);
  const auto model = biloc::build(inst, biloc::rho_table_closed_form(inst));
  biloc::SolveOptions o;
  o.workers = 1;
  o.time_limit = kDeskSeconds;
  const auto start = Clock::now();
  const auto sol = biloc::solve(model, o);
  const double seconds = since(start);
  const double check = biloc::evaluate(inst, biloc::rho_table_closed_form(inst), sol);
  Result r;
  r.pass = sol.status == biloc::SolveStatus::optimal && seconds <= kDeskSeconds &&
           std::abs(check - sol.objective) <= kAgreeRel * std::max(1.0, std::abs(sol.objective));
  r.detail = fmt("status %s, objective %.6f (re-evaluated %.6f), %ld nodes, %.1f s single worker (limit %.0f s)",
                 biloc::to_string(sol.status), sol.objective, check, sol.nodes, seconds, kDeskSeconds);
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"oracle equivalence", oracle_equivalence},   {"alpha grid replication", alpha_replication},
      {"SAA consistency", saa_consistency},          {"trivial certification", trivial_certification},
      {"monotonicity suite", monotonicity},          {"linearization exactness", linearization},
      {"desk-scale tractability", desk_tractability},
  };
  std::vector<int> selected;
  for (int a = 1; a < argc; ++a) {
    const int id = std::atoi(argv[a]);
    if (id < 1 || id > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "unknown criterion '%s'\n", argv[a]);
      return 2;
    }
    selected.push_back(id);
  }
  if (selected.empty()) {
    for (int id = 1; id <= static_cast<int>(criteria.size()); ++id) selected.push_back(id);
  }
  bool all = true;
  for (int id : selected) {
    Result r;
    try {
      r = criteria[id - 1].second();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    report(id, criteria[id - 1].first, r);
    all = all && r.pass;
  }
  return all ? 0 : 1;
}
