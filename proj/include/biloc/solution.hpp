#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "biloc/choice.hpp"
#include "biloc/instance.hpp"

namespace biloc {

enum class SolveStatus { optimal, infeasible, time_limit, trivial, error };

const char* to_string(SolveStatus status);
// Throws ParseError on an unknown name.
SolveStatus solve_status_from_string(std::string_view text);

// Offer accepted by one customer category in a solution.
struct OfferSummary {
  int shipper = 0;
  int category = 0;
  int service = 0;
  int price_level = 0;
  double price = 0.0;
  double rho = 0.0;

  bool operator==(const OfferSummary&) const = default;
};

struct Solution {
  SolveStatus status = SolveStatus::optimal;
  double objective = 0.0;
  double bound = 0.0;  // best proven upper bound
  double gap = 0.0;    // (bound - objective) / max(1, |objective|)
  long nodes = 0;
  double seconds = 0.0;
  std::string method;
  std::string message;

  double revenue = 0.0;     // expected revenue
  double cost = 0.0;        // expected assignment cost
  double fixed_cost = 0.0;  // fixed cost of open facilities

  double root_bound = 0.0;
  long bound_violations = 0;  // children whose relaxation exceeded the parent's

  // Values keyed by variable name; absent names are zero.
  std::map<std::string, double> values;
  std::vector<OfferSummary> offers;

  double value(const std::string& name) const;
};

// First-stage decisions read from a solution's r, y, z and w values.
struct FirstStage {
  std::vector<bool> open;                 // [i]
  std::vector<std::vector<int>> price;    // [n][m] -> price level or -1
  std::vector<std::vector<int>> service;  // [n][k] -> service or -1
  std::vector<std::vector<double>> share; // [i][j] share of j on its offered service

  int offered_count() const;
};

// Throws FeasibilityError when r, y or z are fractional or break the
// one-price, offer-cap, one-service or service-priced rules.
FirstStage first_stage(const Instance& instance, const Solution& solution);

// Offer summary of every category served by `solution`.
std::vector<OfferSummary> summarize_offers(const Instance& instance, const RhoTable& rho, const Solution& solution);

std::string to_json(const Solution& solution);
Solution solution_from_json(const std::string& text);
void save(const Solution& solution, const std::filesystem::path& path);
Solution load_solution(const std::filesystem::path& path);

}  // namespace biloc
