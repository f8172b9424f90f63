#include "biloc/bench.hpp"
#include "biloc/error.hpp"
#include "biloc/generator.hpp"
#include "biloc/milp.hpp"
#include "doctest.h"
#include "single_lane.hpp"
#include "tiny_family.hpp"

using namespace biloc;

namespace {

// Variable counts only; expected_counts does not predict rows.
ModelCounts columns(const MilpModel& model) {
  ModelCounts c = counts(model);
  c.rows = 0;
  return c;
}

}  // namespace

TEST_CASE("desk-scale model sizes") {
  const Instance inst = generate(GeneratorParams{});
  const MilpModel model = build(inst, rho_table_closed_form(inst));
  const ModelCounts c = columns(model);
  CHECK(c == expected_counts(inst));
  CHECK(counts(model).rows == static_cast<std::size_t>(model.constraint_count()));
  CHECK(c.open == 4);
  CHECK(c.price == 2 * 3 * 5);
  CHECK(c.service == 2 * 3 * 3);
  CHECK(c.assign == 4 * 48 * 3);
  CHECK(c.offer_product == 2 * 3 * 3 * 5);
  CHECK(c.cost_product == 2880);
}

TEST_CASE("counts follow the instance on the tiny family") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Instance inst = testing::tiny_instance(seed);
    const MilpModel model = build(inst, rho_table_closed_form(inst));
    CHECK(columns(model) == expected_counts(inst));
    for (const auto& v : model.variables()) {
      if (v.role == VarRole::assign || v.role == VarRole::offer_product || v.role == VarRole::cost_product) {
        CHECK(v.kind == VarKind::continuous);
      } else {
        CHECK(v.kind == VarKind::binary);
      }
    }
  }
}

TEST_CASE("objective coefficients") {
  const Instance inst = fixture_instance();
  const RhoTable rho = fixture_rho(inst);
  const MilpModel model = build(inst, rho);
  const int pi = model.find(offer_product_name(0, 0, 1, 1));
  REQUIRE(pi >= 0);
  CHECK(model.objective_coefficient(pi) == doctest::Approx(0.55 * 150.0 * 7.0));
  const int nu = model.find(cost_product_name(1, 2, 0, 1));
  REQUIRE(nu >= 0);
  CHECK(model.objective_coefficient(nu) == doctest::Approx(-0.6 * 2.5 * 20.0));
  const int r = model.find(open_name(0));
  CHECK(model.objective_coefficient(r) == doctest::Approx(-250.0));
  // y only exists for the services the shipper offers.
  CHECK(model.find(price_name(0, 2, 0)) == -1);
}

TEST_CASE("missing rho entry is a build error") {
  const Instance inst = fixture_instance();
  RhoTable rho = fixture_rho(inst);
  RhoTable partial;
  for (const auto& [k, v] : rho.entries()) {
    if (k != RhoTable::Key{1, 0, 1, 1}) partial.set(k[0], k[1], k[2], k[3], v);
  }
  CHECK_THROWS_AS(build(inst, partial), BuildError);
}

TEST_CASE("lp text round trip") {
  for (std::uint64_t seed : {1, 2, 3, 9}) {
    const Instance inst = testing::tiny_instance(seed);
    const MilpModel model = build(inst, rho_table_closed_form(inst));
    const std::string text = export_lp(model);
    const MilpModel back = parse_lp(text);
    CHECK(export_lp(back) == text);
    CHECK(back.variable_count() == model.variable_count());
    CHECK(back.constraint_count() == model.constraint_count());
    for (int v = 0; v < model.variable_count(); ++v) {
      const int w = back.find(model.variables()[v].name);
      REQUIRE(w >= 0);
      CHECK(back.objective_coefficient(w) == model.objective_coefficient(v));
      CHECK(back.variables()[w].kind == model.variables()[v].kind);
    }
  }
  const std::string text = export_lp(build(fixture_instance(), fixture_rho(fixture_instance())));
  CHECK(text.find("\nMaximize\n") != std::string::npos);
  CHECK(text.find("Subject To") != std::string::npos);
  CHECK(text.find("Binaries") != std::string::npos);
}

TEST_CASE("lp parse errors carry a line number") {
  CHECK_THROWS_AS(parse_lp(""), ParseError);
  CHECK_THROWS_AS(parse_lp("Maximize\n obj: 3 x\nSubject To\n c1: x <=\nEnd\n"), ParseError);
  try {
    parse_lp("Maximize\n obj: 3 x + \nSubject To\n c1: x ?? 4\nEnd\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line") != std::string::npos);
  }
}

TEST_CASE("hand-written lp file parses") {
  const MilpModel m = parse_lp(
      "\\ comment\nMaximize\n obj: 2 a + 3 b\nSubject To\n c1: a + b <= 1\nBounds\n 0 <= a <= 1\nBinaries\n b\nEnd\n");
  CHECK(m.variable_count() == 2);
  CHECK(m.constraint_count() == 1);
  CHECK(m.variables()[m.find("b")].kind == VarKind::binary);
}

TEST_CASE("single lane model") {
  const Instance inst = testing::single_lane();
  const MilpModel model = build(inst, rho_table_constant(inst, 1.0));
  const ModelCounts c = columns(model);
  CHECK(c.open == 1);
  CHECK(c.price == 1);
  CHECK(c.service == 1);
  CHECK(c.assign == 1);
  CHECK(c.offer_product == 1);
  CHECK(c.cost_product == 1);
}

TEST_CASE("every variable is used") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Instance inst = testing::tiny_instance(seed);
    const MilpModel model = build(inst, rho_table_closed_form(inst));
    std::vector<bool> used(model.variable_count(), false);
    for (const auto& row : model.constraints()) {
      for (auto [v, a] : row.terms) used[v] = used[v] || a != 0.0;
    }
    for (int v = 0; v < model.variable_count(); ++v) {
      CHECK((used[v] || model.objective_coefficient(v) != 0.0));
    }
  }
}

TEST_CASE("empty model exports a header and does not parse back") {
  const std::string text = export_lp(MilpModel{});
  CHECK(text.find("Maximize") != std::string::npos);
  CHECK(text.find("End") != std::string::npos);
  CHECK_THROWS_AS(parse_lp(text), ParseError);
}
