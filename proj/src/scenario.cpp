#include "jambeam/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "jambeam/error.hpp"

namespace jambeam {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void schema_error(const std::string& path, const std::string& message) {
  throw Error(ErrorKind::Schema, message, path);
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) schema_error(path, "expected an object");
}

void reject_unknown(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  const std::set<std::string> names(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!names.count(key)) schema_error(path + "." + key, "unknown field '" + key + "'");
  }
}

double get_number(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) schema_error(path + "." + key, std::string("missing field '") + key + "'");
  const json& v = j.at(key);
  if (!v.is_number()) schema_error(path + "." + key, "expected a number");
  return v.get<double>();
}

double get_non_negative(const json& j, const std::string& path, const char* key) {
  const double v = get_number(j, path, key);
  if (v < 0.0) schema_error(path + "." + key, std::string(key) + " must be non-negative");
  return v;
}

void read_optional(const json& j, const std::string& path, const char* key, double& out) {
  if (j.contains(key)) out = get_number(j, path, key);
}

int get_index(const json& v, const std::string& path) {
  if (!v.is_number_integer()) schema_error(path, "expected an integer");
  const auto i = v.get<long long>();
  if (i < 0) schema_error(path, "index must be non-negative");
  if (i > 1'000'000) schema_error(path, "index out of range");
  return static_cast<int>(i);
}

int get_pouch(const json& j, const std::string& path) {
  if (!j.contains("pouch")) schema_error(path + ".pouch", "missing field 'pouch'");
  return get_index(j.at("pouch"), path + ".pouch");
}

std::string get_string(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) schema_error(path + "." + key, std::string("missing field '") + key + "'");
  const json& v = j.at(key);
  if (!v.is_string()) schema_error(path + "." + key, "expected a string");
  return v.get<std::string>();
}

Side get_side(const json& j, const std::string& path) {
  const std::string s = get_string(j, path, "side");
  if (s == "left") return Side::Left;
  if (s == "right") return Side::Right;
  schema_error(path + ".side", "side must be 'left' or 'right'");
}

ValveRole get_valve(const json& j, const std::string& path) {
  const std::string s = get_string(j, path, "valve");
  if (s == "inner") return ValveRole::Inner;
  if (s == "outer") return ValveRole::Outer;
  schema_error(path + ".valve", "valve must be 'inner' or 'outer'");
}

std::vector<int> get_index_list(const json& j, const std::string& path, const char* key) {
  std::vector<int> out;
  if (!j.contains(key)) return out;
  const json& v = j.at(key);
  if (!v.is_array()) schema_error(path + "." + key, "expected an array");
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(get_index(v[i], path + "." + key + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<std::pair<int, std::string>> referenced_pouches(const Action& action) {
  return std::visit(overloaded{
                        [](const HoldMagnet& a) { return std::vector<std::pair<int, std::string>>{{a.pouch, "pouch"}}; },
                        [](const JamPouch& a) { return std::vector<std::pair<int, std::string>>{{a.pouch, "pouch"}}; },
                        [](const UnjamPouch& a) { return std::vector<std::pair<int, std::string>>{{a.pouch, "pouch"}}; },
                        [](const SetPouches& a) {
                          std::vector<std::pair<int, std::string>> out;
                          for (std::size_t i = 0; i < a.jam.size(); ++i) out.emplace_back(a.jam[i], "jam[" + std::to_string(i) + "]");
                          for (std::size_t i = 0; i < a.unjam.size(); ++i) out.emplace_back(a.unjam[i], "unjam[" + std::to_string(i) + "]");
                          return out;
                        },
                        [](const auto&) { return std::vector<std::pair<int, std::string>>{}; },
                    },
                    action);
}

std::string_view to_string(Ball ball) {
  switch (ball) {
    case Ball::Loose: return "loose";
    case Ball::SealedTowardA: return "sealed_toward_a";
    case Ball::SealedTowardB: return "sealed_toward_b";
  }
  return "unknown";
}

json points_json(const Polyline& line) {
  json out = json::array();
  for (const auto& p : line) out.push_back({p.x, p.y});
  return out;
}

}  // namespace

RobotSpec spec_from_json(const json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown(j, path,
                 {"radius_m", "length_m", "num_pouches", "pressure_pa", "everted_length_m", "cable_offset_m",
                  "mechanics", "carriage", "pneumatics"});
  RobotSpec spec;
  read_optional(j, path, "radius_m", spec.radius);
  read_optional(j, path, "length_m", spec.length);
  if (j.contains("num_pouches")) spec.num_pouches = get_index(j.at("num_pouches"), path + ".num_pouches");
  read_optional(j, path, "pressure_pa", spec.pressure);
  if (j.contains("everted_length_m")) spec.everted_length = get_number(j, path, "everted_length_m");
  if (j.contains("cable_offset_m")) spec.cable_offset = get_number(j, path, "cable_offset_m");

  if (j.contains("mechanics")) {
    const json& m = j.at("mechanics");
    const std::string mp = path + ".mechanics";
    expect_object(m, mp);
    reject_unknown(m, mp,
                   {"critical_coefficient", "kappa_jam", "kappa_ei", "membrane_stiffness_n_per_m", "wrinkle_floor",
                    "include_self_weight", "weight_per_length_n_per_m", "cable_tension_n"});
    read_optional(m, mp, "critical_coefficient", spec.mechanics.critical_coefficient);
    read_optional(m, mp, "kappa_jam", spec.mechanics.kappa_jam);
    read_optional(m, mp, "kappa_ei", spec.mechanics.kappa_ei);
    read_optional(m, mp, "membrane_stiffness_n_per_m", spec.mechanics.membrane_stiffness);
    read_optional(m, mp, "wrinkle_floor", spec.mechanics.wrinkle_floor);
    read_optional(m, mp, "weight_per_length_n_per_m", spec.mechanics.weight_per_length);
    read_optional(m, mp, "cable_tension_n", spec.cable_tension);
    if (m.contains("include_self_weight")) {
      if (!m.at("include_self_weight").is_boolean()) schema_error(mp + ".include_self_weight", "expected a boolean");
      spec.mechanics.include_self_weight = m.at("include_self_weight").get<bool>();
    }
  }
  if (j.contains("carriage")) {
    const json& c = j.at("carriage");
    const std::string cp = path + ".carriage";
    expect_object(c, cp);
    reject_unknown(c, cp, {"speed_m_per_s", "dwell_s", "magnet_range_m"});
    read_optional(c, cp, "speed_m_per_s", spec.carriage.speed);
    read_optional(c, cp, "dwell_s", spec.carriage.dwell);
    read_optional(c, cp, "magnet_range_m", spec.carriage.magnet_range);
  }
  if (j.contains("pneumatics")) {
    const json& p = j.at("pneumatics");
    const std::string pp = path + ".pneumatics";
    expect_object(p, pp);
    reject_unknown(p, pp, {"mode", "vent_time_constant_s", "seal_threshold_pa", "jam_fraction"});
    if (p.contains("mode")) {
      const std::string mode = get_string(p, pp, "mode");
      if (mode == "instantaneous") spec.pneumatics.mode = SettleMode::Instantaneous;
      else if (mode == "first_order") spec.pneumatics.mode = SettleMode::FirstOrder;
      else schema_error(pp + ".mode", "mode must be 'instantaneous' or 'first_order'");
    }
    read_optional(p, pp, "vent_time_constant_s", spec.pneumatics.vent_time_constant_s);
    read_optional(p, pp, "seal_threshold_pa", spec.pneumatics.seal_threshold_pa);
    read_optional(p, pp, "jam_fraction", spec.pneumatics.jam_fraction);
  }

  // Field paths in RobotSpec::validate are rooted at "spec".
  try {
    spec.validate();
  } catch (const Error& e) {
    if (path == "spec") throw;
    std::string p = e.path();
    if (p.rfind("spec", 0) == 0) p = path + p.substr(4);
    throw Error(e.kind(), e.what(), p);
  }
  return spec;
}

Action action_from_json(const json& j, const std::string& path) {
  expect_object(j, path);
  const std::string name = get_string(j, path, "action");
  if (name == "MoveCarriage") {
    reject_unknown(j, path, {"action", "x_m"});
    return MoveCarriage{get_non_negative(j, path, "x_m")};
  }
  if (name == "HoldMagnet") {
    reject_unknown(j, path, {"action", "pouch", "valve"});
    return HoldMagnet{get_pouch(j, path), get_valve(j, path)};
  }
  if (name == "ReleaseMagnet") {
    reject_unknown(j, path, {"action"});
    return ReleaseMagnet{};
  }
  if (name == "Dwell") {
    reject_unknown(j, path, {"action", "seconds"});
    return Dwell{get_non_negative(j, path, "seconds")};
  }
  if (name == "PullCable") {
    reject_unknown(j, path, {"action", "side", "length_m"});
    return PullCable{get_side(j, path), get_non_negative(j, path, "length_m")};
  }
  if (name == "ReleaseCable") {
    reject_unknown(j, path, {"action", "side", "length_m"});
    return ReleaseCable{get_side(j, path), get_non_negative(j, path, "length_m")};
  }
  if (name == "Grow") {
    reject_unknown(j, path, {"action", "length_m"});
    return Grow{get_non_negative(j, path, "length_m")};
  }
  if (name == "SetPressure") {
    reject_unknown(j, path, {"action", "pressure_pa"});
    return SetPressure{get_non_negative(j, path, "pressure_pa")};
  }
  if (name == "JamPouch") {
    reject_unknown(j, path, {"action", "pouch"});
    return JamPouch{get_pouch(j, path)};
  }
  if (name == "UnjamPouch") {
    reject_unknown(j, path, {"action", "pouch"});
    return UnjamPouch{get_pouch(j, path)};
  }
  if (name == "SetPouches") {
    reject_unknown(j, path, {"action", "jam", "unjam"});
    return SetPouches{get_index_list(j, path, "jam"), get_index_list(j, path, "unjam")};
  }
  schema_error(path + ".action", "unknown action '" + name + "'");
}

ActionScript script_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array of actions");
  ActionScript script;
  for (std::size_t i = 0; i < j.size(); ++i) script.push_back(action_from_json(j[i], path + "[" + std::to_string(i) + "]"));
  return script;
}

Scenario load_scenario(const json& document) {
  expect_object(document, "$");
  reject_unknown(document, "$", {"spec", "script"});
  if (!document.contains("spec")) schema_error("spec", "missing field 'spec'");
  Scenario scenario;
  scenario.spec = spec_from_json(document.at("spec"), "spec");
  if (document.contains("script")) scenario.script = script_from_json(document.at("script"), "script");
  for (std::size_t i = 0; i < scenario.script.size(); ++i) {
    for (const auto& [pouch, field] : referenced_pouches(scenario.script[i])) {
      if (pouch >= scenario.spec.num_pouches) {
        throw Error(ErrorKind::Schema,
                    std::string(action_name(scenario.script[i])) + " references pouch " + std::to_string(pouch) +
                        " but the robot has " + std::to_string(scenario.spec.num_pouches),
                    "script[" + std::to_string(i) + "]." + field);
      }
    }
  }
  return scenario;
}

Scenario load_scenario_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Schema, std::string("malformed JSON: ") + e.what(), "$");
  }
  return load_scenario(doc);
}

Scenario load_scenario_file(const std::string& path) { return load_scenario_text(read_file(path)); }

json to_json(const RobotSpec& spec) {
  json j;
  j["radius_m"] = spec.radius;
  j["length_m"] = spec.length;
  j["num_pouches"] = spec.num_pouches;
  j["pressure_pa"] = spec.pressure;
  if (spec.everted_length) j["everted_length_m"] = *spec.everted_length;
  if (spec.cable_offset) j["cable_offset_m"] = *spec.cable_offset;
  j["mechanics"] = {
      {"critical_coefficient", spec.mechanics.critical_coefficient},
      {"kappa_jam", spec.mechanics.kappa_jam},
      {"kappa_ei", spec.mechanics.kappa_ei},
      {"membrane_stiffness_n_per_m", spec.mechanics.membrane_stiffness},
      {"wrinkle_floor", spec.mechanics.wrinkle_floor},
      {"include_self_weight", spec.mechanics.include_self_weight},
      {"weight_per_length_n_per_m", spec.mechanics.weight_per_length},
      {"cable_tension_n", spec.cable_tension},
  };
  j["carriage"] = {
      {"speed_m_per_s", spec.carriage.speed},
      {"dwell_s", spec.carriage.dwell},
      {"magnet_range_m", spec.carriage.magnet_range},
  };
  j["pneumatics"] = {
      {"mode", spec.pneumatics.mode == SettleMode::FirstOrder ? "first_order" : "instantaneous"},
      {"vent_time_constant_s", spec.pneumatics.vent_time_constant_s},
      {"seal_threshold_pa", spec.pneumatics.seal_threshold_pa},
      {"jam_fraction", spec.pneumatics.jam_fraction},
  };
  return j;
}

json to_json(const Action& action) {
  json j;
  j["action"] = std::string(action_name(action));
  std::visit(overloaded{
                 [&](const MoveCarriage& a) { j["x_m"] = a.x_m; },
                 [&](const HoldMagnet& a) {
                   j["pouch"] = a.pouch;
                   j["valve"] = std::string(to_string(a.valve));
                 },
                 [&](const ReleaseMagnet&) {},
                 [&](const Dwell& a) { j["seconds"] = a.seconds; },
                 [&](const PullCable& a) {
                   j["side"] = std::string(to_string(a.side));
                   j["length_m"] = a.length_m;
                 },
                 [&](const ReleaseCable& a) {
                   j["side"] = std::string(to_string(a.side));
                   j["length_m"] = a.length_m;
                 },
                 [&](const Grow& a) { j["length_m"] = a.length_m; },
                 [&](const SetPressure& a) { j["pressure_pa"] = a.pressure_pa; },
                 [&](const JamPouch& a) { j["pouch"] = a.pouch; },
                 [&](const UnjamPouch& a) { j["pouch"] = a.pouch; },
                 [&](const SetPouches& a) {
                   j["jam"] = a.jam;
                   j["unjam"] = a.unjam;
                 },
             },
             action);
  return j;
}

json to_json(const ActionScript& script) {
  json out = json::array();
  for (const auto& a : script) out.push_back(to_json(a));
  return out;
}

json to_json(const Scenario& scenario) { return {{"spec", to_json(scenario.spec)}, {"script", to_json(scenario.script)}}; }

json to_json(const Snapshot& s) {
  json j;
  j["type"] = "snapshot";
  j["time_s"] = s.time_s;
  j["clock_s"] = s.time_s;
  j["action_index"] = s.action_index;
  j["shape"] = points_json(s.shape);
  json joints = json::array();
  for (const auto& [pouch, joint] : s.chain.joints) {
    joints.push_back({{"pouch", pouch}, {"angle_rad", joint.angle}, {"locked", joint.locked}});
  }
  j["joints"] = joints;
  json segments = json::array();
  for (const auto& seg : s.chain.segments) {
    segments.push_back({{"length_m", seg.length}, {"curvature_per_m", seg.curvature}});
  }
  j["segments"] = segments;
  json states = json::array();
  json pouches = json::array();
  for (const auto& p : s.pouches) {
    states.push_back(p.state ? std::string(to_string(*p.state)) : std::string("not_everted"));
    pouches.push_back({{"index", p.index},
                       {"everted", p.everted},
                       {"pressure_pa", p.pressure_pa},
                       {"inner_valve", std::string(to_string(p.inner))},
                       {"outer_valve", std::string(to_string(p.outer))},
                       {"inner_held", p.inner_held},
                       {"outer_held", p.outer_held}});
  }
  j["pouch_states"] = states;
  j["pouches"] = pouches;
  j["carriage_x_m"] = s.carriage_x;
  j["everted_length_m"] = s.everted_length;
  j["beam_pressure_pa"] = s.beam_pressure_pa;
  j["retraction_m"] = {{"left", s.retraction[0]}, {"right", s.retraction[1]}};
  return j;
}

json to_json(const TraceRecord& record) {
  return std::visit(
      overloaded{
          [](const ActionRecord& r) {
            return json{{"type", "action"},
                        {"time_s", r.time_s},
                        {"index", r.index},
                        {"expanded", r.expanded},
                        {"action", to_json(r.action)}};
          },
          [](const PneumaticRecord& r) {
            return json{{"type", "pneumatic"},
                        {"time_s", r.time_s},
                        {"action_index", r.action_index},
                        {"event_kind", std::string(to_string(r.event.kind))},
                        {"pouch_index", r.event.pouch},
                        {"valve_role", std::string(to_string(r.event.role))},
                        {"pressure_pa", r.event.pressure_pa}};
          },
          [](const PullRecord& r) {
            json j{{"type", "pull"},
                   {"time_s", r.time_s},
                   {"action_index", r.action_index},
                   {"side", std::string(to_string(r.side))},
                   {"length_m", r.length_m},
                   {"case", std::string(to_string(r.kind))},
                   {"angle_rad", r.angle}};
            if (r.pouch) j["pouch"] = *r.pouch;
            return j;
          },
          [](const RouteRecord& r) {
            return json{{"type", "route"},
                        {"time_s", r.time_s},
                        {"action_index", r.action_index},
                        {"pouches", r.pouches},
                        {"order", r.plan.order},
                        {"leg_times_s", r.plan.leg_times},
                        {"travel_distance_m", r.plan.travel_distance},
                        {"total_time_s", r.plan.total_time},
                        {"optimal", r.plan.optimal}};
          },
          [](const LockRecord& r) {
            return json{{"type", "lock"},     {"time_s", r.time_s}, {"action_index", r.action_index},
                        {"pouch", r.pouch},   {"locked", r.locked}, {"angle_rad", r.angle}};
          },
          [](const Snapshot& s) { return to_json(s); },
      },
      record);
}

std::string trace_ndjson(const Trace& trace) {
  std::string out;
  for (const auto& r : trace.records) {
    out += to_json(r).dump();
    out += '\n';
  }
  return out;
}

std::string pneumatic_event_records(const Trace& trace) {
  std::string out;
  for (const auto& r : trace.records) {
    if (const auto* p = std::get_if<PneumaticRecord>(&r)) {
      out += to_record(p->event, p->time_s);
      out += '\n';
    }
  }
  return out;
}

std::string polyline_csv(const Polyline& line) {
  std::string out = "x_m,y_m\n";
  char buf[96];
  for (const auto& p : line) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.x, p.y);
    out += buf;
  }
  return out;
}

Polyline polyline_from_csv(std::string_view text) {
  Polyline out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    double x = 0.0;
    double y = 0.0;
    char tail = 0;
    if (std::sscanf(line.c_str(), " %lf , %lf %c", &x, &y, &tail) != 2) {
      if (out.empty() && lineno == 1) continue;  // header
      throw Error(ErrorKind::Schema, "expected 'x_m,y_m' numbers", "line " + std::to_string(lineno));
    }
    if (!std::isfinite(x) || !std::isfinite(y)) {
      throw Error(ErrorKind::Schema, "non-finite coordinate", "line " + std::to_string(lineno));
    }
    out.push_back({x, y});
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  out << contents;
}

}  // namespace jambeam
