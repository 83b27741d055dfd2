// Thin Python surface over the core library. Structured values cross as JSON
// text; the package __init__ decodes them.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "jambeam/error.hpp"
#include "jambeam/gateway.hpp"
#include "jambeam/mechanics.hpp"
#include "jambeam/planner.hpp"
#include "jambeam/scenario.hpp"

namespace py = pybind11;
using namespace jambeam;
using nlohmann::json;

namespace {

RobotSpec spec_or_default(const std::string& text) {
  return text.empty() ? RobotSpec{} : spec_from_json(json::parse(text), "spec");
}

json rows_json(const std::vector<DeflectionRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"pressure_pa", r.pressure_pa},
                   {"jammed", r.jammed},
                   {"tip_deflection_m", r.tip_deflection ? json(*r.tip_deflection) : json(nullptr)},
                   {"buckled", r.buckled},
                   {"buckle_x_m", r.buckle_x ? json(*r.buckle_x) : json(nullptr)}});
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetObject(error.ptr(), py::make_tuple(e.what(), to_string(e.kind()), e.path()).ptr());
    } catch (const json::exception& e) {
      PyErr_SetObject(error.ptr(), py::make_tuple(e.what(), "schema", "$").ptr());
    }
  });

  m.def("characteristic_moments", [](double p, double r) {
    const auto cm = characteristic_moments(p, r);
    return py::make_tuple(cm.wrinkle, cm.collapse);
  }, py::arg("pressure_pa"), py::arg("radius_m") = 0.043);

  m.def("critical_moment", [](double p, double r, double c, bool jammed, double kappa_jam) {
    BeamSection s;
    s.radius = r;
    s.jammed = jammed;
    s.kappa_jam = kappa_jam;
    return critical_moment({p, r, c, 0.1}, s);
  }, py::arg("pressure_pa"), py::arg("radius_m") = 0.043, py::arg("coefficient") = 0.68, py::arg("jammed") = false,
        py::arg("kappa_jam") = 2.0);

  m.def("run_scenario", [](const std::string& text) {
    const auto sc = load_scenario_text(text);
    return trace_ndjson(run(sc.spec, sc.script));
  }, py::arg("document"));

  m.def("deflection_experiment", [](const std::vector<double>& pressures, double load_n, bool jammed,
                                     const std::string& spec) {
    return rows_json(deflection_experiment(spec_or_default(spec), pressures, load_n, jammed)).dump();
  }, py::arg("pressures_pa"), py::arg("load_n"), py::arg("jammed"), py::arg("spec") = "");

  m.def("plan", [](const std::string& goal, const std::string& spec) {
    const RobotSpec s = spec_or_default(spec);
    const JointPlan p = fit_joint_angles(goal_from_json(json::parse(goal)), s);
    return plan_json({p, compile_actions(p, s)}).dump();
  }, py::arg("goal"), py::arg("spec") = "");

  py::class_<SessionManager>(m, "SessionManager")
      .def(py::init<>())
      .def("create", [](SessionManager& self, const std::string& spec) { return self.create(spec_or_default(spec)); },
           py::arg("spec") = "")
      .def("state", [](const SessionManager& self, const std::string& id) { return state_json(self.state(id)).dump(); })
      .def("apply", [](SessionManager& self, const std::string& id, const std::string& action) {
        return state_json(self.apply(id, action_from_json(json::parse(action), "action"))).dump();
      })
      .def("plan", [](const SessionManager& self, const std::string& id, const std::string& goal) {
        return plan_json(self.plan(id, goal_from_json(json::parse(goal)))).dump();
      });
}
