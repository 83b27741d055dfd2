#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "jambeam/engine.hpp"

namespace jambeam {

// JSON scenario documents:
//
//   {"spec": {"radius_m", "length_m", "num_pouches", "pressure_pa",
//             "everted_length_m"?, "cable_offset_m"?,
//             "mechanics": {...}?, "carriage": {...}?, "pneumatics": {...}?},
//    "script": [{"action": "...", ...}, ...]}
//
// Unknown fields are rejected; every error carries the JSON path of the
// offending field.

struct Scenario {
  RobotSpec spec;
  ActionScript script;
};

Scenario load_scenario(const nlohmann::json& document);
Scenario load_scenario_text(std::string_view text);
Scenario load_scenario_file(const std::string& path);

RobotSpec spec_from_json(const nlohmann::json& spec, const std::string& path = "spec");
Action action_from_json(const nlohmann::json& action, const std::string& path = "action");
ActionScript script_from_json(const nlohmann::json& script, const std::string& path = "script");

nlohmann::json to_json(const RobotSpec& spec);
nlohmann::json to_json(const Action& action);
nlohmann::json to_json(const ActionScript& script);
nlohmann::json to_json(const Scenario& scenario);

nlohmann::json to_json(const Snapshot& snapshot);
nlohmann::json to_json(const TraceRecord& record);

// One JSON object per line, in record order.
std::string trace_ndjson(const Trace& trace);
// Pneumatic events only, as "time_s,event_kind,pouch_index,valve_role,pressure_pa" lines.
std::string pneumatic_event_records(const Trace& trace);

// "x_m,y_m" header and one row per point.
std::string polyline_csv(const Polyline& line);
Polyline polyline_from_csv(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace jambeam
