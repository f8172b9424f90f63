#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "biloc/bench.hpp"
#include "biloc/choice.hpp"
#include "biloc/error.hpp"
#include "biloc/generator.hpp"
#include "biloc/milp.hpp"
#include "biloc/oracle.hpp"
#include "biloc/solver.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw biloc::Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw biloc::Error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw biloc::Error("failed writing " + path);
}

biloc::RhoTable make_rho(const biloc::Instance& inst, const std::string& kind, std::size_t scenarios,
                         std::uint64_t seed) {
  if (kind == "closed") return biloc::rho_table_closed_form(inst);
  if (kind == "saa") return biloc::rho_table_saa(inst, biloc::scenarios_for(inst, scenarios, seed));
  throw biloc::ParameterError("--rho must be closed or saa");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Facility location and pricing with logit-demand shippers"};
  app.require_subcommand(1);

  biloc::GeneratorParams gen;
  std::string gen_out = "-";
  auto* gen_cmd = app.add_subcommand("gen", "Generate a seeded instance");
  gen_cmd->add_option("--facilities", gen.facilities);
  gen_cmd->add_option("--customers", gen.customers);
  gen_cmd->add_option("--shippers", gen.shippers);
  gen_cmd->add_option("--categories", gen.categories);
  gen_cmd->add_option("--services", gen.services);
  gen_cmd->add_option("--prices", gen.prices);
  gen_cmd->add_option("--ratio", gen.ratio);
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--alpha", gen.alpha);
  gen_cmd->add_option("--beta", gen.beta);
  gen_cmd->add_option("--min-demand", gen.min_demand);
  gen_cmd->add_option("--gamma", gen.gamma);
  gen_cmd->add_option("-o,--out", gen_out, "Output path, - for stdout");

  std::string rho_instance, rho_out = "-";
  std::size_t rho_saa = 0;
  std::uint64_t rho_seed = 1;
  auto* rho_cmd = app.add_subcommand("rho", "Print acceptance probabilities as CSV");
  rho_cmd->add_option("instance", rho_instance)->required();
  rho_cmd->add_option("--saa", rho_saa, "Scenario count for the SAA column (0 omits it)");
  rho_cmd->add_option("--seed", rho_seed);
  rho_cmd->add_option("-o,--out", rho_out);

  std::string build_instance, build_rho = "closed", build_out = "-";
  std::size_t build_scenarios = 100000;
  std::uint64_t build_seed = 1;
  auto* build_cmd = app.add_subcommand("build", "Write the single-level model as an LP file");
  build_cmd->add_option("instance", build_instance)->required();
  build_cmd->add_option("--rho", build_rho)->check(CLI::IsMember({"closed", "saa"}));
  build_cmd->add_option("--scenarios", build_scenarios, "Scenario count for --rho saa");
  build_cmd->add_option("--seed", build_seed);
  build_cmd->add_option("-o,--out", build_out);

  std::string solve_model, solve_out = "-", solve_method = "auto";
  biloc::SolveOptions solve_options;
  auto* solve_cmd = app.add_subcommand("solve", "Solve an LP file to optimality");
  solve_cmd->add_option("model", solve_model)->required();
  solve_cmd->add_option("--time-limit", solve_options.time_limit);
  solve_cmd->add_option("--workers", solve_options.workers);
  solve_cmd->add_option("--node-limit", solve_options.node_limit);
  solve_cmd->add_option("--method", solve_method)->check(CLI::IsMember({"auto", "lp_bnb", "decomposition"}));
  solve_cmd->add_flag("!--no-warm-start", solve_options.warm_start);
  solve_cmd->add_option("-o,--out", solve_out);

  std::string sim_instance, sim_solution, sim_mode = "both", sim_out = "-";
  std::size_t sim_scenarios = 200000;
  std::uint64_t sim_seed = 1;
  int sim_workers = 1;
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate a solution's first stage over scenarios");
  sim_cmd->add_option("instance", sim_instance)->required();
  sim_cmd->add_option("solution", sim_solution)->required();
  sim_cmd->add_option("--scenarios", sim_scenarios);
  sim_cmd->add_option("--mode", sim_mode)->check(CLI::IsMember({"reduced", "reallocation", "both"}));
  sim_cmd->add_option("--seed", sim_seed);
  sim_cmd->add_option("--workers", sim_workers);
  sim_cmd->add_option("-o,--out", sim_out);

  std::string sweep_kind, sweep_config, sweep_out = "-";
  int sweep_workers = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep and write CSV");
  sweep_cmd->add_option("--kind", sweep_kind)->check(CLI::IsMember({"alpha", "beta", "ratio", "size"}));
  sweep_cmd->add_option("--config", sweep_config, "JSON sweep config");
  sweep_cmd->add_option("--workers", sweep_workers, "Points solved in parallel");
  sweep_cmd->add_option("-o,--out", sweep_out);

  std::string fixture_out = "-";
  auto* fixture_cmd = app.add_subcommand("fixture", "Solve the two-shipper example in three rho regimes");
  fixture_cmd->add_option("-o,--out", fixture_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_cmd) {
      write_output(gen_out, biloc::to_json(biloc::generate(gen)));
    } else if (*rho_cmd) {
      const auto inst = biloc::load_instance(rho_instance);
      const auto closed = biloc::rho_table_closed_form(inst);
      if (rho_saa > 0) {
        const auto saa = biloc::rho_table_saa(inst, biloc::scenarios_for(inst, rho_saa, rho_seed));
        write_output(rho_out, biloc::rho_csv(inst, closed, &saa));
      } else {
        write_output(rho_out, biloc::rho_csv(inst, closed, nullptr));
      }
    } else if (*build_cmd) {
      const auto inst = biloc::load_instance(build_instance);
      const auto model = biloc::build(inst, make_rho(inst, build_rho, build_scenarios, build_seed));
      write_output(build_out, biloc::export_lp(model));
    } else if (*solve_cmd) {
      solve_options.method = biloc::solve_method_from_string(solve_method);
      const auto model = biloc::parse_lp(read_file(solve_model));
      const auto sol = biloc::solve(model, solve_options);
      write_output(solve_out, biloc::to_json(sol));
      std::fprintf(stderr, "%s objective %.10g bound %.10g nodes %ld %.3fs\n", biloc::to_string(sol.status),
                   sol.objective, sol.bound, sol.nodes, sol.seconds);
      if (sol.status == biloc::SolveStatus::error) return 3;
    } else if (*sim_cmd) {
      const auto inst = biloc::load_instance(sim_instance);
      const auto sol = biloc::load_solution(sim_solution);
      const auto fs = biloc::first_stage(inst, sol);
      const auto scenarios = biloc::scenarios_for(inst, sim_scenarios, sim_seed);
      biloc::SimulationOptions options;
      options.workers = sim_workers;
      std::vector<biloc::SimulationReport> reports;
      if (sim_mode != "reallocation") {
        reports.push_back(biloc::simulate(inst, fs, scenarios, biloc::SimulationMode::reduced_consistent, options));
      }
      if (sim_mode != "reduced") {
        reports.push_back(biloc::simulate(inst, fs, scenarios, biloc::SimulationMode::reallocation, options));
      }
      write_output(sim_out, biloc::simulation_csv(reports));
    } else if (*sweep_cmd) {
      std::optional<biloc::SweepKind> kind;
      if (!sweep_kind.empty()) kind = biloc::sweep_kind_from_string(sweep_kind);
      biloc::SweepSpec spec;
      if (!sweep_config.empty()) {
        spec = biloc::load_sweep_spec(sweep_config, kind);
      } else if (kind) {
        spec = biloc::default_sweep(*kind);
      } else {
        throw biloc::ParameterError("sweep needs --kind or --config");
      }
      if (sweep_workers > 0) spec.workers = sweep_workers;
      const auto rows = biloc::run_sweep(spec);
      write_output(sweep_out, biloc::sweep_csv(rows));
      for (const auto& r : rows) {
        if (!r.message.empty() && r.status == "error") {
          std::fprintf(stderr, "point %s replication %d: %s\n", r.point.c_str(), r.replication, r.message.c_str());
        }
      }
    } else if (*fixture_cmd) {
      const auto report = biloc::run_fixture_example();
      write_output(fixture_out, biloc::sweep_csv(report.rows));
      std::fprintf(stderr, "min demand gate %s, capacity gate %s, perfect information dominates %s\n",
                   report.min_demand_gate ? "holds" : "FAILS", report.capacity_gate ? "holds" : "FAILS",
                   report.perfect_information_dominates ? "yes" : "NO");
    }
  } catch (const biloc::ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
