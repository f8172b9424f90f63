#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "biloc/instance.hpp"

namespace biloc {

// alpha * q_n^{mp} + L_nk^m. Throws IndexError for an unavailable (m, p).
double deterministic_utility(const Instance& instance, int n, int k, int m, int p);
// L_nk^0.
double optout_utility(const Instance& instance, int n, int k);

// Probability that offer utility plus Gumbel(0, beta) noise beats the opt-out
// utility plus independent Gumbel(0, beta) noise. The noise difference is
// logistic with scale beta.
double logit_acceptance(double v_offer, double v_optout, double beta);

// rho_nk^{mp} in closed form. With choice.deterministic set the result is the
// indicator of v_offer > v_optout.
double rho_closed_form(const Instance& instance, int n, int k, int m, int p);

enum class Decision { accept, reject };

// Follower response to a single offer against the opt-out. Exact ties reject.
Decision accept_rule(double u_offer, double u_optout);

// Price sensitivity that makes an offer at `price` with preference
// `preference` accepted with probability `rho` against an opt-out utility.
double alpha_for_target_rho(double rho, double price, double preference, double optout_utility, double beta);

// `count` equally spaced values from alpha_first to 0 inclusive.
std::vector<double> alpha_sweep_values(double alpha_first, int count = 11);

// Gumbel draws eps_{nks}^m addressed by (s, n, k, m) and generated on demand
// from a counter-based hash, so no scenario is ever stored.
class ScenarioSet {
 public:
  static constexpr int kOptOut = -1;

  ScenarioSet(std::size_t count, std::uint64_t seed, double beta, bool deterministic = false);

  std::size_t size() const { return count_; }
  std::uint64_t seed() const { return seed_; }
  double beta() const { return beta_; }
  bool deterministic() const { return deterministic_; }

  // m == kOptOut addresses the opt-out noise.
  double epsilon(std::size_t s, int n, int k, int m) const;

  // Pins one draw to a given value (what-if analysis and tests).
  void pin(std::size_t s, int n, int k, int m, double value);

 private:
  std::size_t count_;
  std::uint64_t seed_;
  double beta_;
  bool deterministic_;
  std::map<std::array<std::int64_t, 4>, double> pinned_;
};

// Scenario set matching the instance's choice model (beta, deterministic flag).
ScenarioSet scenarios_for(const Instance& instance, std::size_t count, std::uint64_t seed);

// |S_nk^m| / |S|: share of scenarios whose follower accepts the offer.
double rho_saa(const Instance& instance, int n, int k, int m, int p, const ScenarioSet& scenarios);

// rho for every (n, k, m, p) with m in M_nk and p in P_n^m.
class RhoTable {
 public:
  using Key = std::array<int, 4>;  // n, k, m, p

  void set(int n, int k, int m, int p, double value);
  std::optional<double> find(int n, int k, int m, int p) const;
  // Throws IndexError naming the missing entry.
  double at(int n, int k, int m, int p) const;
  bool empty() const { return values_.empty(); }
  std::size_t size() const { return values_.size(); }
  const std::map<Key, double>& entries() const { return values_; }

 private:
  std::map<Key, double> values_;
};

RhoTable rho_table_closed_form(const Instance& instance);
RhoTable rho_table_saa(const Instance& instance, const ScenarioSet& scenarios);
RhoTable rho_table_constant(const Instance& instance, double value);

// CSV with one row per (n, k, m, p); the saa column is omitted when `saa` is null.
std::string rho_csv(const Instance& instance, const RhoTable& closed, const RhoTable* saa);

}  // namespace biloc
