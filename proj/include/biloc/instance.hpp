#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace biloc {

struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

struct Facility {
  double capacity = 0.0;    // u_i
  double fixed_cost = 0.0;  // f_i
  Point location;

  bool operator==(const Facility&) const = default;
};

struct Customer {
  int shipper = 0;
  int category = 0;  // index into the shipper's categories
  double demand = 0.0;
  Point location;

  bool operator==(const Customer&) const = default;
};

struct ServiceLevel {
  double gamma = 1.0;            // capacity usage scale
  double cost_multiplier = 1.0;  // c_ij^m = cost_multiplier * base c_ij

  bool operator==(const ServiceLevel&) const = default;
};

struct PriceEntry {
  double price = 0.0;
  double min_demand = 0.0;

  bool operator==(const PriceEntry&) const = default;
};

// Prices available to one shipper for one service level, strictly increasing.
struct PriceLadder {
  int shipper = 0;
  int service = 0;
  std::vector<PriceEntry> entries;

  bool operator==(const PriceLadder&) const = default;
};

// Services offered to each customer category of a shipper (the sets M_nk).
struct Shipper {
  std::vector<std::vector<int>> category_services;

  int category_count() const { return static_cast<int>(category_services.size()); }
  bool operator==(const Shipper&) const = default;
};

// Logit demand model shared by every shipper.
//
// Utility of an offer (m, p) to category k of shipper n is
//   alpha * q_n^{mp} + L[n][k][m] + eps
// and of the opt-out alternative L_optout[n][k] + eps0, with eps, eps0 i.i.d.
// Gumbel(0, beta). `deterministic` drops the noise (the beta -> 0 limit).
struct ChoiceModel {
  double alpha = -0.1;
  double beta = 1.0;
  std::vector<std::vector<std::vector<double>>> L;  // [n][k][m]
  std::vector<std::vector<double>> L_optout;        // [n][k]
  bool deterministic = false;

  bool operator==(const ChoiceModel&) const = default;
};

struct InstanceMeta {
  std::uint64_t seed = 0;

  bool operator==(const InstanceMeta&) const = default;
};

// Problem data: facilities, customers grouped by shipper and category, service
// levels, price ladders, assignment costs c_ij^m and the demand model.
//
// Instances are plain values; nothing is cached, so derived quantities such as
// category demand are always consistent with the customer list.
struct Instance {
  std::vector<Facility> facilities;
  std::vector<Customer> customers;
  std::vector<Shipper> shippers;
  std::vector<ServiceLevel> service_levels;
  std::vector<PriceLadder> price_ladders;
  std::vector<double> costs;  // dense [i][j][m]
  ChoiceModel choice;
  InstanceMeta meta;

  bool operator==(const Instance&) const = default;

  int facility_count() const { return static_cast<int>(facilities.size()); }
  int customer_count() const { return static_cast<int>(customers.size()); }
  int shipper_count() const { return static_cast<int>(shippers.size()); }
  int service_count() const { return static_cast<int>(service_levels.size()); }
  int category_count(int n) const;

  double cost(int i, int j, int m) const;
  double& cost(int i, int j, int m);

  // d_k: summed demand of the customers in category k of shipper n.
  double category_demand(int n, int k) const;
  std::vector<int> category_customers(int n, int k) const;

  // M_nk, M_n and M_j.
  const std::vector<int>& category_services(int n, int k) const;
  std::vector<int> shipper_services(int n) const;
  const std::vector<int>& customer_services(int j) const;
  bool offers(int n, int k, int m) const;

  // P_n^m; empty when the shipper has no ladder for the service.
  const std::vector<PriceEntry>& ladder(int n, int m) const;
  double price(int n, int m, int p) const;

  double total_capacity() const;
  double total_demand() const;
  double capacity_ratio() const { return total_capacity() / total_demand(); }
};

// Multiplies every capacity by a common factor so that total capacity over
// total demand equals `ratio`.
Instance scale_to_ratio(const Instance& instance, double ratio);

// Empty iff every structural invariant holds. Each entry names the offending
// element.
std::vector<std::string> validate(const Instance& instance);

// JSON persistence with a strict schema (unknown fields are rejected).
std::string to_json(const Instance& instance);
Instance instance_from_json(const std::string& text);
void save(const Instance& instance, const std::filesystem::path& path);
Instance load_instance(const std::filesystem::path& path);

}  // namespace biloc
