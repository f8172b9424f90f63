#include "biloc/choice.hpp"

#include <cmath>
#include <sstream>

#include "biloc/error.hpp"
#include "format.hpp"

namespace biloc {

double deterministic_utility(const Instance& inst, int n, int k, int m, int p) {
  if (!inst.offers(n, k, m)) {
    throw IndexError("service " + std::to_string(m) + " is not offered to category " + std::to_string(k) +
                     " of shipper " + std::to_string(n));
  }
  return inst.choice.alpha * inst.price(n, m, p) + inst.choice.L.at(n).at(k).at(m);
}

double optout_utility(const Instance& inst, int n, int k) {
  if (k < 0 || k >= inst.category_count(n)) throw IndexError("category out of range");
  return inst.choice.L_optout.at(n).at(k);
}

double logit_acceptance(double v_offer, double v_optout, double beta) {
  if (!(beta > 0.0)) throw ParameterError("beta must be > 0");
  const double x = (v_offer - v_optout) / beta;
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double rho_closed_form(const Instance& inst, int n, int k, int m, int p) {
  const double v = deterministic_utility(inst, n, k, m, p);
  const double v0 = optout_utility(inst, n, k);
  if (inst.choice.deterministic) return accept_rule(v, v0) == Decision::accept ? 1.0 : 0.0;
  return logit_acceptance(v, v0, inst.choice.beta);
}

Decision accept_rule(double u_offer, double u_optout) {
  return u_offer - u_optout > 0.0 ? Decision::accept : Decision::reject;
}

double alpha_for_target_rho(double rho, double price, double preference, double optout_utility, double beta) {
  if (!(rho > 0.0 && rho < 1.0)) throw ParameterError("target rho must lie in (0, 1)");
  if (price == 0.0) throw ParameterError("price must be non-zero");
  if (!(beta > 0.0)) throw ParameterError("beta must be > 0");
  // rho = 1 / (1 + exp((v0 - alpha q - L) / beta))  =>  alpha q = v0 - L - beta ln(1/rho - 1)
  return (optout_utility - preference - beta * std::log(1.0 / rho - 1.0)) / price;
}

std::vector<double> alpha_sweep_values(double alpha_first, int count) {
  if (!(alpha_first < 0.0)) throw ParameterError("first alpha must be negative");
  if (count < 2) throw ParameterError("sweep needs at least two values");
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = alpha_first * static_cast<double>(count - 1 - i) / (count - 1);
  return out;
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

ScenarioSet::ScenarioSet(std::size_t count, std::uint64_t seed, double beta, bool deterministic)
    : count_(count), seed_(seed), beta_(beta), deterministic_(deterministic) {
  if (!(beta > 0.0)) throw ParameterError("scenario beta must be > 0");
}

double ScenarioSet::epsilon(std::size_t s, int n, int k, int m) const {
  if (!pinned_.empty()) {
    auto it = pinned_.find({static_cast<std::int64_t>(s), n, k, m});
    if (it != pinned_.end()) return it->second;
  }
  if (deterministic_) return 0.0;
  std::uint64_t h = splitmix(seed_);
  h = splitmix(h ^ static_cast<std::uint64_t>(s));
  h = splitmix(h ^ (static_cast<std::uint64_t>(static_cast<std::uint32_t>(n)) << 32 |
                    static_cast<std::uint32_t>(k)));
  h = splitmix(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(m) + 1));
  const double u = (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
  return -beta_ * std::log(-std::log(u));
}

void ScenarioSet::pin(std::size_t s, int n, int k, int m, double value) {
  if (s >= count_) throw IndexError("scenario index out of range");
  pinned_[{static_cast<std::int64_t>(s), n, k, m}] = value;
}

ScenarioSet scenarios_for(const Instance& inst, std::size_t count, std::uint64_t seed) {
  return ScenarioSet(count, seed, inst.choice.beta, inst.choice.deterministic);
}

double rho_saa(const Instance& inst, int n, int k, int m, int p, const ScenarioSet& scenarios) {
  if (scenarios.size() == 0) throw ParameterError("rho_saa needs at least one scenario");
  const double v = deterministic_utility(inst, n, k, m, p);
  const double v0 = optout_utility(inst, n, k);
  std::size_t accepted = 0;
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    const double u = v + scenarios.epsilon(s, n, k, m);
    const double u0 = v0 + scenarios.epsilon(s, n, k, ScenarioSet::kOptOut);
    if (accept_rule(u, u0) == Decision::accept) ++accepted;
  }
  return static_cast<double>(accepted) / static_cast<double>(scenarios.size());
}

void RhoTable::set(int n, int k, int m, int p, double value) {
  if (!(value >= 0.0 && value <= 1.0)) throw ParameterError("rho must lie in [0, 1]");
  values_[{n, k, m, p}] = value;
}

std::optional<double> RhoTable::find(int n, int k, int m, int p) const {
  auto it = values_.find({n, k, m, p});
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

double RhoTable::at(int n, int k, int m, int p) const {
  if (auto v = find(n, k, m, p)) return *v;
  std::ostringstream os;
  os << "missing rho entry (n=" << n << ", k=" << k << ", m=" << m << ", p=" << p << ")";
  throw IndexError(os.str());
}

namespace {

template <typename F>
RhoTable fill(const Instance& inst, F&& value) {
  RhoTable table;
  for (int n = 0; n < inst.shipper_count(); ++n) {
    for (int k = 0; k < inst.category_count(n); ++k) {
      for (int m : inst.category_services(n, k)) {
        const int P = static_cast<int>(inst.ladder(n, m).size());
        for (int p = 0; p < P; ++p) table.set(n, k, m, p, value(n, k, m, p));
      }
    }
  }
  return table;
}

}  // namespace

RhoTable rho_table_closed_form(const Instance& inst) {
  return fill(inst, [&](int n, int k, int m, int p) { return rho_closed_form(inst, n, k, m, p); });
}

RhoTable rho_table_saa(const Instance& inst, const ScenarioSet& scenarios) {
  return fill(inst, [&](int n, int k, int m, int p) { return rho_saa(inst, n, k, m, p, scenarios); });
}

RhoTable rho_table_constant(const Instance& inst, double value) {
  return fill(inst, [value](int, int, int, int) { return value; });
}

std::string rho_csv(const Instance& inst, const RhoTable& closed, const RhoTable* saa) {
  std::ostringstream os;
  os << "shipper,category,service,price_level,price,rho_closed";
  if (saa) os << ",rho_saa";
  os << '\n';
  for (const auto& [key, value] : closed.entries()) {
    const auto [n, k, m, p] = key;
    os << n << ',' << k << ',' << m << ',' << p << ',' << detail::format_number(inst.price(n, m, p)) << ','
       << detail::format_number(value);
    if (saa) os << ',' << detail::format_number(saa->at(n, k, m, p));
    os << '\n';
  }
  return os.str();
}

}  // namespace biloc
