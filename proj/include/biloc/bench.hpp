#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "biloc/choice.hpp"
#include "biloc/generator.hpp"
#include "biloc/instance.hpp"
#include "biloc/solver.hpp"

namespace biloc {

enum class SweepKind { alpha, beta, ratio, size };

const char* to_string(SweepKind kind);
SweepKind sweep_kind_from_string(std::string_view text);

struct SizePoint {
  int facilities = 4;
  int customers = 48;
  int prices = 5;

  bool operator==(const SizePoint&) const = default;
};

struct SweepSpec {
  SweepKind kind = SweepKind::alpha;
  std::vector<double> values;    // alpha, beta or ratio grid
  std::vector<SizePoint> sizes;  // size grid
  GeneratorParams generator;
  std::optional<std::filesystem::path> instance;  // fixed instance instead of the generator
  int replications = 1;
  SolveOptions solver;
  int workers = 1;  // points solved in parallel
};

// Grids used when a spec leaves them empty.
std::vector<double> default_alpha_grid(const GeneratorParams& params);
std::vector<double> default_beta_grid();
std::vector<double> default_ratio_grid();
std::vector<SizePoint> default_size_grid(bool full_scale = false);

// Default spec for a kind: desk-scale generator parameters and the default grid.
SweepSpec default_sweep(SweepKind kind);

// Throws ParameterError when a grid is empty or replications < 1.
void check(const SweepSpec& spec);

// Reads a JSON sweep config; `kind` overrides the config's own kind.
SweepSpec sweep_spec_from_json(const std::string& text, std::optional<SweepKind> kind = std::nullopt);
SweepSpec load_sweep_spec(const std::filesystem::path& path, std::optional<SweepKind> kind = std::nullopt);

struct SweepRow {
  std::string kind;
  std::string point;
  int replication = 0;
  std::uint64_t seed = 0;
  std::string status;
  double objective = 0.0;
  double revenue = 0.0;
  double cost = 0.0;
  double fixed_cost = 0.0;
  long nodes = 0;
  double seconds = 0.0;
  bool trivial = false;
  double gap = 0.0;
  std::string message;  // not written to the CSV
};

// The instance solved at one point of the grid.
Instance sweep_instance(const SweepSpec& spec, std::size_t point, int replication);

// One row per (point, replication), in grid order. A failed solve yields a
// row with status error and the sweep continues.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

std::string sweep_csv(const std::vector<SweepRow>& rows);

// The small two-shipper example: three rho regimes solved exactly.
struct FixtureReport {
  std::vector<SweepRow> rows;  // fixture, perfect information (l = 0), uniform 0.5, fixture with l = 0
  bool min_demand_gate = false;      // shipper 1 cannot take the low price of service 1
  bool capacity_gate = false;        // service 1 for shipper 0 overloads facility A
  bool perfect_information_dominates = false;
};

Instance fixture_instance();
// Acceptance probabilities of the example, per service and price level.
RhoTable fixture_rho(const Instance& instance);
FixtureReport run_fixture_example();

}  // namespace biloc
