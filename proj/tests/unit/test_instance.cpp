#include <cmath>
#include <filesystem>
#include <fstream>

#include "biloc/bench.hpp"
#include "biloc/error.hpp"
#include "biloc/generator.hpp"
#include "biloc/instance.hpp"
#include "doctest.h"

using namespace biloc;

TEST_CASE("fixture instance is valid and indexes categories") {
  const Instance inst = fixture_instance();
  CHECK(validate(inst).empty());
  CHECK(inst.category_demand(0, 0) == doctest::Approx(150.0));
  CHECK(inst.category_demand(1, 0) == doctest::Approx(40.0));
  CHECK(inst.category_customers(1, 0) == std::vector<int>{2, 3});
  CHECK(inst.shipper_services(0) == std::vector<int>{0, 1});
  CHECK(inst.price(1, 1, 0) == doctest::Approx(6.3));
  CHECK(inst.ladder(1, 1)[0].min_demand == doctest::Approx(50.0));
  CHECK(inst.total_capacity() == doctest::Approx(200.0));
  CHECK(inst.total_demand() == doctest::Approx(190.0));
}

TEST_CASE("index errors name the offending element") {
  const Instance inst = fixture_instance();
  CHECK_THROWS_AS(inst.category_services(2, 0), IndexError);
  CHECK_THROWS_AS(inst.category_services(0, 3), IndexError);
  CHECK_THROWS_AS(inst.price(0, 0, 5), IndexError);
}

TEST_CASE("validate reports broken invariants") {
  Instance inst = fixture_instance();
  inst.customers[0].demand = -1.0;
  CHECK_FALSE(validate(inst).empty());

  inst = fixture_instance();
  inst.price_ladders[0].entries = {{7.0, 0.0}, {6.0, 0.0}};
  CHECK_FALSE(validate(inst).empty());
}

TEST_CASE("json round trip is exact") {
  const Instance inst = generate(GeneratorParams{});
  const Instance back = instance_from_json(to_json(inst));
  CHECK(back == inst);

  const auto path = std::filesystem::temp_directory_path() / "biloc_test_instance.json";
  save(inst, path);
  CHECK(load_instance(path) == inst);
  std::filesystem::remove(path);
}

TEST_CASE("json parsing is strict") {
  CHECK_THROWS_AS(instance_from_json("{"), ParseError);
  std::string text = to_json(fixture_instance());
  text.insert(text.find('{') + 1, "\"surprise\": 1,");
  CHECK_THROWS_AS(instance_from_json(text), ParseError);
}

TEST_CASE("scaling to a capacity ratio") {
  const Instance inst = generate(GeneratorParams{});
  for (double ratio : {0.5, 1.0, 3.5}) {
    const Instance scaled = scale_to_ratio(inst, ratio);
    CHECK(scaled.capacity_ratio() == doctest::Approx(ratio).epsilon(1e-12));
    CHECK(scaled.customers == inst.customers);
  }
  CHECK_THROWS_AS(scale_to_ratio(inst, 0.0), ParameterError);
}

TEST_CASE("scaling identities") {
  const Instance inst = generate(GeneratorParams{});
  CHECK(scale_to_ratio(inst, inst.capacity_ratio()).facilities.size() == inst.facilities.size());
  const Instance same = scale_to_ratio(inst, inst.capacity_ratio());
  for (int i = 0; i < inst.facility_count(); ++i) {
    CHECK(same.facilities[i].capacity == doctest::Approx(inst.facilities[i].capacity).epsilon(1e-14));
  }
  const Instance one = scale_to_ratio(inst, 1.0);
  const Instance half = scale_to_ratio(one, 0.5);
  for (int i = 0; i < inst.facility_count(); ++i) {
    CHECK(half.facilities[i].capacity == doctest::Approx(one.facilities[i].capacity / 2).epsilon(1e-14));
    CHECK(half.facilities[i].fixed_cost == one.facilities[i].fixed_cost);
  }
  const Instance back = scale_to_ratio(scale_to_ratio(inst, 5.0), inst.capacity_ratio());
  for (int i = 0; i < inst.facility_count(); ++i) {
    CHECK(std::abs(back.facilities[i].capacity - inst.facilities[i].capacity) <=
          1e-12 * inst.facilities[i].capacity);
  }
}

TEST_CASE("single injected faults give single violations") {
  Instance inst = fixture_instance();
  inst.cost(1, 2, 0) = -1.0;
  const auto v = validate(inst);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("1") != std::string::npos);
  CHECK(v[0].find("2") != std::string::npos);

  inst = fixture_instance();
  inst.customers[3].category = 4;
  CHECK(validate(inst).size() == 1);
}

TEST_CASE("file errors") {
  const auto path = std::filesystem::temp_directory_path() / "biloc_test_truncated.json";
  const std::string text = to_json(fixture_instance());
  std::ofstream(path) << text.substr(0, text.size() / 2);
  CHECK_THROWS_AS(load_instance(path), ParseError);
  std::filesystem::remove(path);

  std::string extra = text;
  extra.insert(extra.find('{') + 1, "\"colour\": 1,");
  try {
    instance_from_json(extra);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("colour") != std::string::npos);
  }
}
