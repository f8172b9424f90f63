#include <sstream>

#include "biloc/bench.hpp"
#include "biloc/choice.hpp"
#include "biloc/error.hpp"
#include "biloc/solver.hpp"
#include "doctest.h"

using namespace biloc;

namespace {

// CSV with the wall-clock column blanked.
std::string without_seconds(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  int seconds_col = -1;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (seconds_col < 0) {
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (cells[c] == "seconds") seconds_col = static_cast<int>(c);
      }
    } else if (seconds_col < static_cast<int>(cells.size())) {
      cells[seconds_col].clear();
    }
    for (const auto& c : cells) out << c << ',';
    out << '\n';
  }
  return out.str();
}

}  // namespace

TEST_CASE("sweep kinds") {
  for (auto k : {SweepKind::alpha, SweepKind::beta, SweepKind::ratio, SweepKind::size}) {
    CHECK(sweep_kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS_AS(sweep_kind_from_string("gamma"), ParameterError);
}

TEST_CASE("default grids") {
  const auto beta = default_beta_grid();
  REQUIRE(beta.size() == 9);
  CHECK(beta.front() == 1.0 / 32);
  CHECK(beta.back() == 8.0);
  const auto ratio = default_ratio_grid();
  REQUIRE(ratio.size() == 10);
  CHECK(ratio.front() == 0.5);
  CHECK(ratio.back() == 5.0);
  const auto alpha = default_alpha_grid(GeneratorParams{});
  REQUIRE(alpha.size() == 11);
  CHECK(alpha.back() == 0.0);
  CHECK(logit_acceptance(alpha.front() * 15.0 + 4.5, 3.0, 1.0) == doctest::Approx(0.005));
  CHECK(default_size_grid().front() == SizePoint{2, 12, 3});
  CHECK(default_size_grid(true).size() > default_size_grid().size());
}

TEST_CASE("spec validation and json config") {
  SweepSpec spec = default_sweep(SweepKind::ratio);
  spec.replications = 0;
  CHECK_THROWS_AS(check(spec), ParameterError);
  spec = default_sweep(SweepKind::ratio);
  spec.values.clear();
  CHECK_THROWS_AS(check(spec), ParameterError);

  const SweepSpec parsed = sweep_spec_from_json(
      R"({"kind": "beta", "values": [0.5, 2], "replications": 2, "generator": {"customers": 12},
          "solver": {"method": "lp_bnb", "time_limit": 30}})");
  CHECK(parsed.kind == SweepKind::beta);
  CHECK(parsed.values == std::vector<double>{0.5, 2.0});
  CHECK(parsed.replications == 2);
  CHECK(parsed.generator.customers == 12);
  CHECK(parsed.solver.method == SolveMethod::lp_bnb);
  CHECK(sweep_spec_from_json(R"({"kind": "beta"})", SweepKind::alpha).kind == SweepKind::alpha);
  CHECK_THROWS_AS(sweep_spec_from_json(R"({"kind": "beta", "colour": 1})"), ParseError);
}

TEST_CASE("sweep points vary only the swept parameter") {
  SweepSpec spec = default_sweep(SweepKind::beta);
  const Instance a = sweep_instance(spec, 0, 0);
  const Instance b = sweep_instance(spec, 3, 0);
  CHECK(a.choice.beta == spec.values[0]);
  CHECK(b.choice.beta == spec.values[3]);
  CHECK(a.facilities == b.facilities);
  spec.replications = 2;
  CHECK_FALSE(sweep_instance(spec, 0, 1).facilities == a.facilities);
}

TEST_CASE("sweep csv is deterministic across worker counts") {
  SweepSpec spec = default_sweep(SweepKind::ratio);
  spec.generator.customers = 12;
  spec.generator.prices = 3;
  spec.values = {0.5, 1.0, 2.0, 4.0};
  spec.replications = 2;
  spec.workers = 1;
  const std::string one = sweep_csv(run_sweep(spec));
  spec.workers = 3;
  const std::string three = sweep_csv(run_sweep(spec));
  CHECK(without_seconds(one) == without_seconds(three));
  CHECK(one.rfind("# biloc sweep csv v1\nkind,point,replication,seed,status,objective,revenue,cost,fixed_cost,nodes,"
                  "seconds,trivial,gap\n",
                  0) == 0);
  std::size_t lines = 0;
  for (char c : one) lines += c == '\n' ? 1 : 0;
  CHECK(lines == 2 + 8);
}

TEST_CASE("fixture example") {
  const FixtureReport report = run_fixture_example();
  REQUIRE(report.rows.size() == 4);
  CHECK(report.rows[0].objective == doctest::Approx(125.3));
  CHECK(report.rows[1].objective == doctest::Approx(272.0));
  CHECK(report.rows[2].objective == doctest::Approx(0.0));
  CHECK(report.rows[3].objective == doctest::Approx(125.3));
  CHECK(report.min_demand_gate);
  CHECK(report.capacity_gate);
  CHECK(report.perfect_information_dominates);
}

TEST_CASE("trivial rows report zero and reruns are identical") {
  SweepSpec spec = default_sweep(SweepKind::alpha);
  spec.generator.customers = 12;
  spec.generator.prices = 3;
  spec.values = {-0.45, -0.3, -0.1, 0.0};
  spec.workers = 2;
  const auto rows = run_sweep(spec);
  REQUIRE(rows.size() == 4);
  CHECK(rows.front().trivial);
  for (const auto& r : rows) {
    if (r.trivial) CHECK(r.objective == 0.0);
  }
  CHECK(without_seconds(sweep_csv(rows)) == without_seconds(sweep_csv(run_sweep(spec))));
}
