#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "biloc/bench.hpp"
#include "biloc/bounds.hpp"
#include "biloc/choice.hpp"
#include "biloc/error.hpp"
#include "biloc/generator.hpp"
#include "biloc/milp.hpp"
#include "biloc/oracle.hpp"
#include "biloc/solver.hpp"

namespace py = pybind11;

namespace {

biloc::GeneratorParams params_from_kwargs(const py::kwargs& kw) {
  biloc::GeneratorParams p;
  for (const auto& [key, value] : kw) {
    const auto name = key.cast<std::string>();
    if (name == "facilities") p.facilities = value.cast<int>();
    else if (name == "customers") p.customers = value.cast<int>();
    else if (name == "shippers") p.shippers = value.cast<int>();
    else if (name == "categories") p.categories = value.cast<int>();
    else if (name == "services") p.services = value.cast<int>();
    else if (name == "prices") p.prices = value.cast<int>();
    else if (name == "ratio") p.ratio = value.cast<double>();
    else if (name == "seed") p.seed = value.cast<std::uint64_t>();
    else if (name == "alpha") p.alpha = value.cast<double>();
    else if (name == "beta") p.beta = value.cast<double>();
    else if (name == "min_demand") p.min_demand = value.cast<double>();
    else if (name == "gamma") p.gamma = value.cast<double>();
    else throw py::key_error("unknown generator parameter '" + name + "'");
  }
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Facility location and pricing with logit-demand shippers";

  py::register_exception<biloc::Error>(m, "Error", PyExc_RuntimeError);

  py::class_<biloc::Instance>(m, "Instance")
      .def_property_readonly("facility_count", &biloc::Instance::facility_count)
      .def_property_readonly("customer_count", &biloc::Instance::customer_count)
      .def_property_readonly("shipper_count", &biloc::Instance::shipper_count)
      .def_property_readonly("service_count", &biloc::Instance::service_count)
      .def_property_readonly("capacity_ratio", &biloc::Instance::capacity_ratio)
      .def_property("alpha", [](const biloc::Instance& i) { return i.choice.alpha; },
                    [](biloc::Instance& i, double v) { i.choice.alpha = v; })
      .def_property("beta", [](const biloc::Instance& i) { return i.choice.beta; },
                    [](biloc::Instance& i, double v) { i.choice.beta = v; })
      .def("to_json", [](const biloc::Instance& i) { return biloc::to_json(i); })
      .def_static("from_json", &biloc::instance_from_json)
      .def("scaled", &biloc::scale_to_ratio, py::arg("ratio"));

  m.def("generate", [](const py::kwargs& kw) { return biloc::generate(params_from_kwargs(kw)); });
  m.def("load_instance", [](const std::string& path) { return biloc::load_instance(path); });
  m.def("fixture_instance", &biloc::fixture_instance);

  py::class_<biloc::RhoTable>(m, "RhoTable")
      .def("at", &biloc::RhoTable::at)
      .def("__len__", &biloc::RhoTable::size)
      .def("to_dict", [](const biloc::RhoTable& r) {
        std::map<std::tuple<int, int, int, int>, double> out;
        for (const auto& [k, v] : r.entries()) out[{k[0], k[1], k[2], k[3]}] = v;
        return out;
      });
  m.def("rho_closed_form", &biloc::rho_table_closed_form);
  m.def("rho_constant", &biloc::rho_table_constant);
  m.def("rho_saa", [](const biloc::Instance& inst, std::size_t scenarios, std::uint64_t seed) {
    return biloc::rho_table_saa(inst, biloc::scenarios_for(inst, scenarios, seed));
  });
  m.def("fixture_rho", &biloc::fixture_rho);
  m.def("logit_acceptance", &biloc::logit_acceptance);
  m.def("alpha_for_target_rho", &biloc::alpha_for_target_rho, py::arg("rho"), py::arg("price"),
        py::arg("preference"), py::arg("optout_utility"), py::arg("beta"));
  m.def("alpha_sweep_values", &biloc::alpha_sweep_values, py::arg("alpha_first"), py::arg("count") = 11);

  py::class_<biloc::MilpModel>(m, "Model")
      .def_property_readonly("variable_count", &biloc::MilpModel::variable_count)
      .def_property_readonly("constraint_count", &biloc::MilpModel::constraint_count)
      .def("to_lp", [](const biloc::MilpModel& model) { return biloc::export_lp(model); })
      .def_static("from_lp", &biloc::parse_lp);
  m.def("build", &biloc::build);

  py::class_<biloc::Solution>(m, "Solution")
      .def_property_readonly("status", [](const biloc::Solution& s) { return std::string(biloc::to_string(s.status)); })
      .def_readonly("objective", &biloc::Solution::objective)
      .def_readonly("bound", &biloc::Solution::bound)
      .def_readonly("nodes", &biloc::Solution::nodes)
      .def_readonly("seconds", &biloc::Solution::seconds)
      .def_readonly("method", &biloc::Solution::method)
      .def_readonly("revenue", &biloc::Solution::revenue)
      .def_readonly("cost", &biloc::Solution::cost)
      .def_readonly("fixed_cost", &biloc::Solution::fixed_cost)
      .def_readonly("values", &biloc::Solution::values)
      .def("to_json", [](const biloc::Solution& s) { return biloc::to_json(s); })
      .def_static("from_json", &biloc::solution_from_json);

  m.def(
      "solve",
      [](const biloc::MilpModel& model, const std::string& method, double time_limit, int workers) {
        biloc::SolveOptions options;
        options.method = biloc::solve_method_from_string(method);
        options.time_limit = time_limit;
        options.workers = workers;
        py::gil_scoped_release release;
        return biloc::solve(model, options);
      },
      py::arg("model"), py::arg("method") = "auto", py::arg("time_limit") = 600.0, py::arg("workers") = 1);
  m.def("enumerate_oracle", &biloc::enumerate_oracle, py::arg("instance"), py::arg("rho"),
        py::arg("max_binaries") = 22);
  m.def("profit_upper_bound", &biloc::profit_upper_bound);
  m.def("evaluate", &biloc::evaluate);

  m.def(
      "simulate",
      [](const biloc::Instance& inst, const biloc::Solution& sol, std::size_t scenarios, std::uint64_t seed,
         const std::string& mode) {
        const auto fs = biloc::first_stage(inst, sol);
        const auto set = biloc::scenarios_for(inst, scenarios, seed);
        const auto r = biloc::simulate(inst, fs, set, biloc::simulation_mode_from_string(mode));
        py::dict out;
        out["mean"] = r.mean;
        out["std_error"] = r.std_error;
        out["infeasible"] = r.infeasible;
        out["violation_rate"] = r.violation_rate;
        return out;
      },
      py::arg("instance"), py::arg("solution"), py::arg("scenarios"), py::arg("seed") = 1,
      py::arg("mode") = "reduced");

  m.def(
      "run_sweep",
      [](const std::string& config) {
        const auto spec = biloc::sweep_spec_from_json(config);
        py::gil_scoped_release release;
        return biloc::sweep_csv(biloc::run_sweep(spec));
      },
      py::arg("config_json"));
  m.def("run_fixture_example", [] { return biloc::sweep_csv(biloc::run_fixture_example().rows); });
}
