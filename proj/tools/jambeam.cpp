#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "jambeam/engine.hpp"
#include "jambeam/error.hpp"
#include "jambeam/gateway.hpp"
#include "jambeam/planner.hpp"
#include "jambeam/scenario.hpp"
#ifdef JAMBEAM_WITH_SERVER
#include "jambeam/server.hpp"
#endif

namespace {

using namespace jambeam;

struct Range {
  double first = 0.5;
  double last = 2.0;
  double step = 0.25;
};

Range parse_range(const std::string& text) {
  Range r;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &r.first, &r.last, &r.step, &tail) != 3) {
    throw Error(ErrorKind::InvalidArgument, "expected first:last:step, got '" + text + "'", "--pressures");
  }
  return r;
}

double unit_scale(const std::string& unit) {
  if (unit == "psi") return kPascalPerPsi;
  if (unit == "kpa") return 1000.0;
  if (unit == "pa") return 1.0;
  throw Error(ErrorKind::InvalidArgument, "unknown unit '" + unit + "'", "--pressure-unit");
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

int simulate(const std::string& scenario_path, const std::string& trace_out, const std::string& shapes_out,
             const std::string& events_out) {
  const Scenario scenario = load_scenario_file(scenario_path);
  const Trace trace = run(scenario.spec, scenario.script);
  emit(trace_out, trace_ndjson(trace));
  if (!shapes_out.empty()) {
    std::filesystem::create_directories(shapes_out);
    int n = 0;
    for (const Snapshot* s : trace.snapshots()) {
      char name[32];
      std::snprintf(name, sizeof name, "shape_%04d.csv", n++);
      write_file((std::filesystem::path(shapes_out) / name).string(), polyline_csv(s->shape));
    }
  }
  if (!events_out.empty()) {
    write_file(events_out, std::string(kPneumaticRecordHeader) + "\n" + pneumatic_event_records(trace));
  }
  const Snapshot& last = trace.final_snapshot();
  std::fprintf(stderr, "%zu actions, %.3f s simulated, tip at (%.4f, %.4f)\n", scenario.script.size(),
               trace.end_time(), last.shape.back().x, last.shape.back().y);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jamming-pouch inflated beam robot simulator"};
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "Run a scenario and print its trace as NDJSON");
  std::string scenario_path, trace_out, shapes_out, events_out;
  sim->add_option("scenario", scenario_path, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  sim->add_option("--trace", trace_out, "Write the NDJSON trace here instead of stdout");
  sim->add_option("--shapes", shapes_out, "Directory for one shape CSV per snapshot");
  sim->add_option("--events", events_out, "Pneumatic event records (CSV)");

  auto* exp = app.add_subcommand("experiment", "Run a bench experiment");
  exp->require_subcommand(1);
  auto* defl = exp->add_subcommand("deflection", "Tip deflection of a clamped cantilever over a pressure sweep");
  bool jammed = false;
  bool both = false;
  std::string pressures = "0.5:2.0:0.25";
  std::string unit = "psi";
  double load_g = 150.0;
  double length = 0.6;
  int pouches = 4;
  std::string csv_out;
  std::string spec_path;
  defl->add_flag("--jammed", jammed, "All pouches jammed (default: all compliant)");
  defl->add_flag("--both", both, "Emit compliant and jammed rows");
  defl->add_option("--pressures", pressures, "first:last:step")->capture_default_str();
  defl->add_option("--pressure-unit", unit, "psi, kpa or pa")->capture_default_str()->check(CLI::IsMember({"psi", "kpa", "pa"}));
  defl->add_option("--load-g", load_g, "Tip mass in grams")->capture_default_str();
  defl->add_option("--length", length, "Beam length in metres")->capture_default_str();
  defl->add_option("--pouches", pouches, "Pouch count along the beam")->capture_default_str();
  defl->add_option("--spec", spec_path, "Scenario file whose spec supplies the model parameters");
  defl->add_option("--csv", csv_out, "Write CSV here instead of stdout");

  auto* plan = app.add_subcommand("plan", "Fit joint angles to a goal polyline and compile a script");
  std::string goal_path, script_out, plan_spec;
  double tolerance = 0.01;
  plan->add_option("goal", goal_path, "Goal polyline CSV (x_m,y_m)")->required()->check(CLI::ExistingFile);
  plan->add_option("--script-out", script_out, "Write a runnable scenario JSON here");
  plan->add_option("--spec", plan_spec, "Scenario file whose spec describes the robot");
  plan->add_option("--tolerance", tolerance, "Residual tolerance in metres")->capture_default_str();

  auto* serve = app.add_subcommand("serve", "Start the HTTP/WebSocket gateway");
  std::string bind = "127.0.0.1:8080";
  serve->add_option("--bind", bind, "address:port")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*sim) return simulate(scenario_path, trace_out, shapes_out, events_out);

    if (*defl) {
      RobotSpec spec = spec_path.empty() ? RobotSpec{} : load_scenario_file(spec_path).spec;
      spec.length = length;
      spec.num_pouches = pouches;
      spec.everted_length.reset();
      spec.validate();
      const Range r = parse_range(pressures);
      const double scale = unit_scale(unit);
      const auto sweep = pressure_sweep(r.first * scale, r.last * scale, r.step * scale);
      const double load = load_g / 1000.0 * kGravity;
      std::string out;
      if (both || !jammed) out = deflection_csv(deflection_experiment(spec, sweep, load, false));
      if (both || jammed) {
        std::string rows = deflection_csv(deflection_experiment(spec, sweep, load, true));
        if (!out.empty()) rows.erase(0, rows.find('\n') + 1);
        out += rows;
      }
      emit(csv_out, out);
      return 0;
    }

    if (*plan) {
      const RobotSpec spec = plan_spec.empty() ? RobotSpec{} : load_scenario_file(plan_spec).spec;
      GoalShape goal{polyline_from_csv(read_file(goal_path)), tolerance};
      const JointPlan jp = fit_joint_angles(goal, spec);
      const ActionScript script = compile_actions(jp, spec);
      nlohmann::json summary = plan_json({jp, script});
      summary["within_tolerance"] = jp.within_tolerance(goal);
      std::cout << summary.dump(2) << "\n";
      if (!script_out.empty()) write_file(script_out, to_json(Scenario{spec, script}).dump(2) + "\n");
      return 0;
    }

    if (*serve) {
#ifdef JAMBEAM_WITH_SERVER
      const auto colon = bind.rfind(':');
      if (colon == std::string::npos) throw Error(ErrorKind::InvalidArgument, "expected address:port", "--bind");
      const std::string address = bind.substr(0, colon);
      const int port = std::stoi(bind.substr(colon + 1));
      SessionManager manager;
      GatewayServer server(manager, address, static_cast<std::uint16_t>(port));
      std::fprintf(stderr, "listening on %s:%u\n", address.c_str(), server.port());
      server.run();
      return 0;
#else
      std::fprintf(stderr, "built without the gateway server\n");
      return 2;
#endif
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error [%s] %s%s%s\n", std::string(to_string(e.kind())).c_str(), e.path().c_str(),
                 e.path().empty() ? "" : ": ", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
