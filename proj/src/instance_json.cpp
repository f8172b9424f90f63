#include <fstream>
#include <sstream>

#include "biloc/error.hpp"
#include "biloc/instance.hpp"
#include "json_util.hpp"

namespace biloc {

using detail::Json;
using detail::Node;

std::string to_json(const Instance& inst) {
  Json doc = Json::object();

  Json facilities = Json::array();
  for (const auto& f : inst.facilities) {
    facilities.push_back({{"capacity", f.capacity}, {"fixed_cost", f.fixed_cost}, {"x", f.location.x}, {"y", f.location.y}});
  }
  doc["facilities"] = std::move(facilities);

  Json customers = Json::array();
  for (const auto& c : inst.customers) {
    customers.push_back({{"shipper", c.shipper},
                         {"category", c.category},
                         {"demand", c.demand},
                         {"x", c.location.x},
                         {"y", c.location.y}});
  }
  doc["customers"] = std::move(customers);

  Json shippers = Json::array();
  for (const auto& s : inst.shippers) {
    Json cats = Json::array();
    for (const auto& services : s.category_services) cats.push_back({{"services", services}});
    shippers.push_back({{"categories", std::move(cats)}});
  }
  doc["shippers"] = std::move(shippers);

  Json services = Json::array();
  for (const auto& s : inst.service_levels) {
    services.push_back({{"gamma", s.gamma}, {"cost_multiplier", s.cost_multiplier}});
  }
  doc["service_levels"] = std::move(services);

  Json ladders = Json::array();
  for (const auto& l : inst.price_ladders) {
    Json entries = Json::array();
    for (const auto& e : l.entries) entries.push_back({{"price", e.price}, {"min_demand", e.min_demand}});
    ladders.push_back({{"shipper", l.shipper}, {"service", l.service}, {"entries", std::move(entries)}});
  }
  doc["price_ladders"] = std::move(ladders);

  Json costs = Json::array();
  const int M = inst.service_count();
  for (int i = 0; i < inst.facility_count(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < inst.customer_count(); ++j) {
      Json cell = Json::array();
      for (int m = 0; m < M; ++m) cell.push_back(inst.costs.at((static_cast<std::size_t>(i) * inst.customers.size() + j) * M + m));
      row.push_back(std::move(cell));
    }
    costs.push_back(std::move(row));
  }
  doc["costs"] = std::move(costs);

  doc["choice_model"] = {{"alpha", inst.choice.alpha},
                         {"beta", inst.choice.beta},
                         {"L", inst.choice.L},
                         {"L_optout", inst.choice.L_optout},
                         {"deterministic", inst.choice.deterministic}};
  doc["meta"] = {{"seed", inst.meta.seed}};
  return doc.dump(1) + "\n";
}

namespace {

Point read_point(const Node& n) { return {n.field("x").number(), n.field("y").number()}; }

std::vector<double> read_numbers(const Node& n) {
  std::vector<double> out(n.array_size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = n.at(i).number();
  return out;
}

}  // namespace

Instance instance_from_json(const std::string& text) {
  const Json doc = detail::parse_json_text(text, "instance");
  const Node root(doc, "");
  root.expect_object({"facilities", "customers", "shippers", "service_levels", "price_ladders", "costs",
                      "choice_model", "meta"});
  Instance inst;

  const Node fac = root.field("facilities");
  for (std::size_t i = 0; i < fac.array_size(); ++i) {
    const Node f = fac.at(i);
    f.expect_object({"capacity", "fixed_cost", "x", "y"});
    inst.facilities.push_back({f.field("capacity").number(), f.field("fixed_cost").number(), read_point(f)});
  }

  const Node cus = root.field("customers");
  for (std::size_t j = 0; j < cus.array_size(); ++j) {
    const Node c = cus.at(j);
    c.expect_object({"shipper", "category", "demand", "x", "y"});
    inst.customers.push_back(
        {c.field("shipper").integer(), c.field("category").integer(), c.field("demand").number(), read_point(c)});
  }

  const Node shp = root.field("shippers");
  for (std::size_t n = 0; n < shp.array_size(); ++n) {
    const Node s = shp.at(n);
    s.expect_object({"categories"});
    Shipper shipper;
    const Node cats = s.field("categories");
    for (std::size_t k = 0; k < cats.array_size(); ++k) {
      const Node cat = cats.at(k);
      cat.expect_object({"services"});
      const Node sv = cat.field("services");
      std::vector<int> services(sv.array_size());
      for (std::size_t q = 0; q < services.size(); ++q) services[q] = sv.at(q).integer();
      shipper.category_services.push_back(std::move(services));
    }
    inst.shippers.push_back(std::move(shipper));
  }

  const Node svc = root.field("service_levels");
  for (std::size_t m = 0; m < svc.array_size(); ++m) {
    const Node s = svc.at(m);
    s.expect_object({"gamma", "cost_multiplier"});
    inst.service_levels.push_back({s.field("gamma").number(), s.field("cost_multiplier").number()});
  }

  const Node lad = root.field("price_ladders");
  for (std::size_t l = 0; l < lad.array_size(); ++l) {
    const Node node = lad.at(l);
    node.expect_object({"shipper", "service", "entries"});
    PriceLadder ladder{node.field("shipper").integer(), node.field("service").integer(), {}};
    const Node entries = node.field("entries");
    for (std::size_t p = 0; p < entries.array_size(); ++p) {
      const Node e = entries.at(p);
      e.expect_object({"price", "min_demand"});
      ladder.entries.push_back({e.field("price").number(), e.field("min_demand").number()});
    }
    inst.price_ladders.push_back(std::move(ladder));
  }

  const Node costs = root.field("costs");
  const std::size_t I = inst.facilities.size();
  const std::size_t J = inst.customers.size();
  const std::size_t M = inst.service_levels.size();
  if (costs.array_size() != I) costs.fail("expected one row per facility");
  inst.costs.reserve(I * J * M);
  for (std::size_t i = 0; i < I; ++i) {
    const Node row = costs.at(i);
    if (row.array_size() != J) row.fail("expected one entry per customer");
    for (std::size_t j = 0; j < J; ++j) {
      const Node cell = row.at(j);
      if (cell.array_size() != M) cell.fail("expected one cost per service level");
      for (std::size_t m = 0; m < M; ++m) inst.costs.push_back(cell.at(m).number());
    }
  }

  const Node ch = root.field("choice_model");
  ch.expect_object({"alpha", "beta", "L", "L_optout", "deterministic"});
  inst.choice.alpha = ch.field("alpha").number();
  inst.choice.beta = ch.field("beta").number();
  inst.choice.deterministic = ch.field("deterministic").boolean();
  const Node L = ch.field("L");
  for (std::size_t n = 0; n < L.array_size(); ++n) {
    const Node per_shipper = L.at(n);
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < per_shipper.array_size(); ++k) rows.push_back(read_numbers(per_shipper.at(k)));
    inst.choice.L.push_back(std::move(rows));
  }
  const Node L0 = ch.field("L_optout");
  for (std::size_t n = 0; n < L0.array_size(); ++n) inst.choice.L_optout.push_back(read_numbers(L0.at(n)));

  const Node meta = root.field("meta");
  meta.expect_object({"seed"});
  inst.meta.seed = meta.field("seed").uint64();
  return inst;
}

void save(const Instance& instance, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << to_json(instance);
  if (!out) throw Error("failed writing " + path.string());
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return instance_from_json(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace biloc
