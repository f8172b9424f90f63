#include "biloc/bench.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "biloc/choice.hpp"
#include "biloc/error.hpp"
#include "biloc/milp.hpp"
#include "format.hpp"
#include "json_util.hpp"

namespace biloc {

using detail::format_number;
using detail::Json;
using detail::Node;

const char* to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::alpha:
      return "alpha";
    case SweepKind::beta:
      return "beta";
    case SweepKind::ratio:
      return "ratio";
    case SweepKind::size:
      return "size";
  }
  return "alpha";
}

SweepKind sweep_kind_from_string(std::string_view text) {
  for (auto k : {SweepKind::alpha, SweepKind::beta, SweepKind::ratio, SweepKind::size}) {
    if (text == to_string(k)) return k;
  }
  throw ParameterError("unknown sweep kind '" + std::string(text) + "'");
}

std::vector<double> default_alpha_grid(const GeneratorParams& p) {
  const double first = alpha_for_target_rho(0.005, price_levels(p).front(), p.service_preference, p.optout_utility, p.beta);
  return alpha_sweep_values(first, 11);
}

std::vector<double> default_beta_grid() {
  std::vector<double> out;
  for (int l = -5; l <= 3; ++l) out.push_back(std::ldexp(1.0, l));
  return out;
}

std::vector<double> default_ratio_grid() {
  std::vector<double> out;
  for (int r = 1; r <= 10; ++r) out.push_back(0.5 * r);
  return out;
}

std::vector<SizePoint> default_size_grid(bool full_scale) {
  if (full_scale) {
    return {{4, 80, 3}, {4, 80, 4}, {4, 80, 5}, {5, 80, 5}, {6, 80, 5}, {5, 100, 5},
            {5, 120, 5}, {4, 140, 5}, {5, 140, 5}, {6, 140, 5}, {7, 140, 5}};
  }
  return {{2, 12, 3}, {3, 12, 3}, {4, 12, 3}, {4, 24, 3}, {4, 48, 3}, {4, 48, 4}, {4, 48, 5}};
}

SweepSpec default_sweep(SweepKind kind) {
  SweepSpec s;
  s.kind = kind;
  switch (kind) {
    case SweepKind::alpha:
      s.values = default_alpha_grid(s.generator);
      break;
    case SweepKind::beta:
      s.values = default_beta_grid();
      break;
    case SweepKind::ratio:
      s.values = default_ratio_grid();
      break;
    case SweepKind::size:
      s.generator.ratio = 1.0;
      s.sizes = default_size_grid();
      break;
  }
  return s;
}

void check(const SweepSpec& s) {
  if (s.kind == SweepKind::size ? s.sizes.empty() : s.values.empty()) throw ParameterError("sweep grid is empty");
  if (s.replications < 1) throw ParameterError("replications must be at least 1");
  if (s.workers < 1) throw ParameterError("workers must be at least 1");
  if (!(s.solver.time_limit > 0.0)) throw ParameterError("solver time limit must be positive");
  for (double v : s.values) {
    if (!std::isfinite(v)) throw ParameterError("sweep values must be finite");
    if ((s.kind == SweepKind::beta || s.kind == SweepKind::ratio) && !(v > 0.0)) {
      throw ParameterError(std::string(to_string(s.kind)) + " values must be positive");
    }
  }
  for (const auto& p : s.sizes) {
    if (p.facilities < 1 || p.customers < 1 || p.prices < 1) throw ParameterError("size points must be positive");
  }
  if (!s.instance) {
    GeneratorParams g = s.generator;
    check(g);
  }
}

namespace {

void read_generator(const Node& n, GeneratorParams& g) {
  n.expect_object({"facilities", "customers", "shippers", "categories", "services", "prices", "ratio", "price_min",
                   "price_max", "seed", "demand_min", "demand_max", "haul_rate", "fixed_cost_scale", "min_demand",
                   "gamma", "alpha", "beta", "service_preference", "optout_utility"});
  auto integer = [&](const char* key, int& out) {
    if (n.has(key)) out = n.field(key).integer();
  };
  auto number = [&](const char* key, double& out) {
    if (n.has(key)) out = n.field(key).number();
  };
  integer("facilities", g.facilities);
  integer("customers", g.customers);
  integer("shippers", g.shippers);
  integer("categories", g.categories);
  integer("services", g.services);
  integer("prices", g.prices);
  number("ratio", g.ratio);
  number("price_min", g.price_min);
  number("price_max", g.price_max);
  if (n.has("seed")) g.seed = n.field("seed").uint64();
  integer("demand_min", g.demand_min);
  integer("demand_max", g.demand_max);
  number("haul_rate", g.haul_rate);
  number("fixed_cost_scale", g.fixed_cost_scale);
  number("min_demand", g.min_demand);
  number("gamma", g.gamma);
  number("alpha", g.alpha);
  number("beta", g.beta);
  number("service_preference", g.service_preference);
  number("optout_utility", g.optout_utility);
}

}  // namespace

SweepSpec sweep_spec_from_json(const std::string& text, std::optional<SweepKind> kind) {
  const Json doc = detail::parse_json_text(text, "sweep config");
  const Node root(doc, "");
  root.expect_object({"kind", "values", "sizes", "generator", "instance", "replications", "solver", "workers",
                      "full_scale"});
  SweepKind k = SweepKind::alpha;
  if (root.has("kind")) {
    try {
      k = sweep_kind_from_string(root.field("kind").string());
    } catch (const ParameterError& e) {
      root.field("kind").fail(e.what());
    }
  } else if (!kind) {
    root.fail("missing 'kind' (or pass it on the command line)");
  }
  if (kind) k = *kind;

  SweepSpec s;
  s.kind = k;
  if (k == SweepKind::size) s.generator.ratio = 1.0;
  if (root.has("generator")) read_generator(root.field("generator"), s.generator);
  if (root.has("instance")) s.instance = root.field("instance").string();
  if (root.has("replications")) s.replications = root.field("replications").integer();
  if (root.has("workers")) s.workers = root.field("workers").integer();
  if (root.has("solver")) {
    const Node sv = root.field("solver");
    sv.expect_object({"method", "time_limit", "node_limit", "warm_start"});
    if (sv.has("method")) {
      try {
        s.solver.method = solve_method_from_string(sv.field("method").string());
      } catch (const ParameterError& e) {
        sv.field("method").fail(e.what());
      }
    }
    if (sv.has("time_limit")) s.solver.time_limit = sv.field("time_limit").number();
    if (sv.has("node_limit")) s.solver.node_limit = sv.field("node_limit").integer();
    if (sv.has("warm_start")) s.solver.warm_start = sv.field("warm_start").boolean();
  }
  if (root.has("values")) {
    const Node v = root.field("values");
    for (std::size_t i = 0; i < v.array_size(); ++i) s.values.push_back(v.at(i).number());
  }
  if (root.has("sizes")) {
    const Node v = root.field("sizes");
    for (std::size_t i = 0; i < v.array_size(); ++i) {
      const Node p = v.at(i);
      p.expect_object({"facilities", "customers", "prices"});
      s.sizes.push_back({p.field("facilities").integer(), p.field("customers").integer(), p.field("prices").integer()});
    }
  }
  const bool full = root.has("full_scale") && root.field("full_scale").boolean();
  if (k == SweepKind::size && s.sizes.empty()) s.sizes = default_size_grid(full);
  if (k != SweepKind::size && s.values.empty() && !root.has("values")) {
    s.values = k == SweepKind::alpha ? default_alpha_grid(s.generator)
               : k == SweepKind::beta ? default_beta_grid()
                                      : default_ratio_grid();
  }
  check(s);
  return s;
}

SweepSpec load_sweep_spec(const std::filesystem::path& path, std::optional<SweepKind> kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return sweep_spec_from_json(ss.str(), kind);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

namespace {

std::string point_label(const SweepSpec& s, std::size_t point) {
  if (s.kind == SweepKind::size) {
    const auto& p = s.sizes[point];
    return std::to_string(p.facilities) + "x" + std::to_string(p.customers) + "x" + std::to_string(p.prices);
  }
  return format_number(s.values[point]);
}

std::size_t point_count(const SweepSpec& s) { return s.kind == SweepKind::size ? s.sizes.size() : s.values.size(); }

}  // namespace

Instance sweep_instance(const SweepSpec& s, std::size_t point, int replication) {
  if (point >= point_count(s)) throw IndexError("sweep point " + std::to_string(point) + " out of range");
  Instance inst;
  if (s.instance) {
    inst = load_instance(*s.instance);
  } else {
    GeneratorParams g = s.generator;
    g.seed += static_cast<std::uint64_t>(replication);
    if (s.kind == SweepKind::size) {
      g.facilities = s.sizes[point].facilities;
      g.customers = s.sizes[point].customers;
      g.prices = s.sizes[point].prices;
    }
    inst = generate(g);
  }
  switch (s.kind) {
    case SweepKind::alpha:
      inst.choice.alpha = s.values[point];
      break;
    case SweepKind::beta:
      inst.choice.beta = s.values[point];
      break;
    case SweepKind::ratio:
      inst = scale_to_ratio(inst, s.values[point]);
      break;
    case SweepKind::size:
      break;
  }
  return inst;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  check(spec);
  const std::size_t points = point_count(spec);
  const std::size_t tasks = points * static_cast<std::size_t>(spec.replications);
  std::vector<SweepRow> rows(tasks);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t t = next++; t < tasks; t = next++) {
      const std::size_t point = t / spec.replications;
      const int rep = static_cast<int>(t % spec.replications);
      SweepRow& row = rows[t];
      row.kind = to_string(spec.kind);
      row.point = point_label(spec, point);
      row.replication = rep;
      row.seed = spec.generator.seed + static_cast<std::uint64_t>(rep);
      try {
        const Instance inst = sweep_instance(spec, point, rep);
        if (spec.instance) row.seed = inst.meta.seed;
        SolveOptions options = spec.solver;
        options.workers = 1;
        const Solution sol = solve(build(inst, rho_table_closed_form(inst)), options);
        row.status = to_string(sol.status);
        row.objective = sol.objective;
        row.revenue = sol.revenue;
        row.cost = sol.cost;
        row.fixed_cost = sol.fixed_cost;
        row.nodes = sol.nodes;
        row.seconds = sol.seconds;
        row.trivial = sol.status == SolveStatus::trivial;
        row.gap = sol.status == SolveStatus::time_limit ? sol.gap : 0.0;
        row.message = sol.message;
      } catch (const std::exception& e) {
        row.status = to_string(SolveStatus::error);
        row.message = e.what();
      }
    }
  };
  std::vector<std::thread> threads;
  for (int w = 1; w < spec.workers; ++w) threads.emplace_back(work);
  work();
  for (auto& t : threads) t.join();
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "# biloc sweep csv v1\n";
  os << "kind,point,replication,seed,status,objective,revenue,cost,fixed_cost,nodes,seconds,trivial,gap\n";
  for (const auto& r : rows) {
    os << r.kind << ',' << r.point << ',' << r.replication << ',' << r.seed << ',' << r.status << ','
       << format_number(r.objective) << ',' << format_number(r.revenue) << ',' << format_number(r.cost) << ','
       << format_number(r.fixed_cost) << ',' << r.nodes << ',' << format_number(r.seconds) << ','
       << (r.trivial ? 1 : 0) << ',' << format_number(r.gap) << '\n';
  }
  return os.str();
}

}  // namespace biloc
