#include "jambeam/gateway.hpp"

#include <cstdio>
#include <vector>

#include "jambeam/error.hpp"
#include "jambeam/scenario.hpp"

namespace jambeam {

using nlohmann::json;

std::shared_ptr<SessionManager::Session> SessionManager::find(const std::string& id) const {
  std::shared_lock lock(mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorKind::UnknownId, "unknown session '" + id + "'", "session");
  return it->second;
}

std::string SessionManager::create(const RobotSpec& spec) {
  spec.validate();
  std::unique_lock lock(mutex_);
  char buf[32];
  std::snprintf(buf, sizeof buf, "s%06llu", static_cast<unsigned long long>(++counter_));
  std::string id = buf;
  sessions_.emplace(id, std::make_shared<Session>(id, spec));
  return id;
}

bool SessionManager::contains(const std::string& id) const {
  std::shared_lock lock(mutex_);
  return sessions_.count(id) != 0;
}

SessionState SessionManager::state(const std::string& id) const {
  const auto s = find(id);
  std::lock_guard lock(s->mutex);
  return {s->revision, s->world.snapshot(static_cast<int>(s->revision) - 1)};
}

RobotSpec SessionManager::spec(const std::string& id) const {
  const auto s = find(id);
  std::lock_guard lock(s->mutex);
  return s->world.spec();
}

SessionState SessionManager::apply(const std::string& id, const Action& action) {
  const auto s = find(id);
  std::lock_guard lock(s->mutex);
  std::vector<TraceRecord> records;
  s->world.apply(action, static_cast<int>(s->revision), records);
  ++s->revision;
  SessionState out{s->revision, std::get<Snapshot>(records.back())};
  if (!s->listeners.empty()) {
    const std::string message = state_json(out).dump();
    for (auto& [token, listener] : s->listeners) listener(message);
  }
  return out;
}

PlanResponse SessionManager::plan(const std::string& id, const GoalShape& goal) const {
  RobotSpec spec;
  double everted = 0.0;
  {
    const auto s = find(id);
    std::lock_guard lock(s->mutex);
    spec = s->world.spec();
    everted = s->world.kinematics().growth.everted_length;
  }
  PlanResponse out;
  out.plan = fit_joint_angles(goal, spec);
  out.script = compile_actions(out.plan, spec, everted);
  return out;
}

std::uint64_t SessionManager::subscribe(const std::string& id, SnapshotListener listener) {
  const auto s = find(id);
  std::lock_guard lock(s->mutex);
  const std::uint64_t token = s->next_token++;
  listener(state_json({s->revision, s->world.snapshot(static_cast<int>(s->revision) - 1)}).dump());
  s->listeners.emplace(token, std::move(listener));
  return token;
}

void SessionManager::unsubscribe(const std::string& id, std::uint64_t token) {
  std::shared_ptr<Session> s;
  {
    std::shared_lock lock(mutex_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) return;
    s = it->second;
  }
  std::lock_guard lock(s->mutex);
  s->listeners.erase(token);
}

json state_json(const SessionState& state) {
  json j = to_json(state.snapshot);
  j["revision"] = state.revision;
  return j;
}

json plan_json(const PlanResponse& response) {
  json shape = json::array();
  for (const auto& p : response.plan.predicted_shape) shape.push_back({p.x, p.y});
  return {{"script", to_json(response.script)},
          {"predicted_shape", shape},
          {"residual_m", response.plan.residual},
          {"cost_m", response.plan.cost},
          {"angles_rad", response.plan.angles},
          {"goal_length_m", response.plan.goal_length}};
}

json error_json(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    return {{"error", {{"kind", to_string(err->kind())}, {"message", err->what()}, {"path", err->path()}}}};
  }
  return {{"error", {{"kind", "Internal"}, {"message", e.what()}, {"path", ""}}}};
}

GoalShape goal_from_json(const json& j) {
  GoalShape goal;
  const json* points = &j;
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      if (key != "polyline" && key != "tolerance_m") {
        throw Error(ErrorKind::Schema, "unknown field '" + key + "'", "goal." + key);
      }
    }
    if (!j.contains("polyline")) throw Error(ErrorKind::Schema, "missing field 'polyline'", "goal.polyline");
    points = &j.at("polyline");
    if (j.contains("tolerance_m")) {
      if (!j.at("tolerance_m").is_number()) throw Error(ErrorKind::Schema, "expected a number", "goal.tolerance_m");
      goal.tolerance = j.at("tolerance_m").get<double>();
    }
  }
  if (!points->is_array()) throw Error(ErrorKind::Schema, "expected an array of points", "goal.polyline");
  for (std::size_t i = 0; i < points->size(); ++i) {
    const json& p = (*points)[i];
    const std::string path = "goal.polyline[" + std::to_string(i) + "]";
    if (p.is_array() && p.size() == 2 && p[0].is_number() && p[1].is_number()) {
      goal.polyline.push_back({p[0].get<double>(), p[1].get<double>()});
    } else if (p.is_object() && p.size() == 2 && p.contains("x_m") && p.contains("y_m") && p["x_m"].is_number() &&
               p["y_m"].is_number()) {
      goal.polyline.push_back({p["x_m"].get<double>(), p["y_m"].get<double>()});
    } else {
      throw Error(ErrorKind::Schema, "expected [x, y] or {\"x_m\", \"y_m\"}", path);
    }
  }
  validate_goal(goal);
  return goal;
}

namespace {

int status_for(const std::exception& e) {
  const auto* err = dynamic_cast<const Error*>(&e);
  if (err == nullptr) return 500;
  switch (err->kind()) {
    case ErrorKind::Schema:
    case ErrorKind::InvalidArgument: return 400;
    case ErrorKind::UnknownId: return 404;
    default: return 422;
  }
}

std::vector<std::string> split_path(const std::string& target) {
  std::string path = target.substr(0, target.find('?'));
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < path.size()) {
    if (path[i] == '/') {
      ++i;
      continue;
    }
    const std::size_t j = path.find('/', i);
    parts.push_back(path.substr(i, j == std::string::npos ? std::string::npos : j - i));
    if (j == std::string::npos) break;
    i = j;
  }
  return parts;
}

json parse_body(const std::string& body) {
  if (body.find_first_not_of(" \t\r\n") == std::string::npos) return json::object();
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Schema, std::string("malformed JSON: ") + e.what(), "$");
  }
}

}  // namespace

HttpReply handle_request(SessionManager& manager, const std::string& method, const std::string& target,
                         const std::string& body) {
  const auto parts = split_path(target);
  try {
    if (parts.empty() || parts[0] != "sessions") {
      return {404, {{"error", {{"kind", "NotFound"}, {"message", "no route for " + target}, {"path", ""}}}}};
    }
    if (parts.size() == 1 && method == "POST") {
      json doc = parse_body(body);
      if (doc.is_object() && doc.contains("spec")) {
        if (doc.size() != 1) throw Error(ErrorKind::Schema, "only 'spec' is allowed at the top level", "$");
        doc = doc.at("spec");
      }
      const std::string id = manager.create(spec_from_json(doc, "spec"));
      return {201, {{"id", id}, {"state", state_json(manager.state(id))}}};
    }
    if (parts.size() == 3 && parts[2] == "state" && method == "GET") {
      return {200, state_json(manager.state(parts[1]))};
    }
    if (parts.size() == 3 && parts[2] == "actions" && method == "POST") {
      if (!manager.contains(parts[1])) manager.state(parts[1]);  // throws UnknownId
      const Action action = action_from_json(parse_body(body), "action");
      return {200, state_json(manager.apply(parts[1], action))};
    }
    if (parts.size() == 3 && parts[2] == "plan" && method == "POST") {
      if (!manager.contains(parts[1])) manager.state(parts[1]);
      return {200, plan_json(manager.plan(parts[1], goal_from_json(parse_body(body))))};
    }
    return {405, {{"error", {{"kind", "MethodNotAllowed"}, {"message", method + " " + target}, {"path", ""}}}}};
  } catch (const std::exception& e) {
    return {status_for(e), error_json(e)};
  }
}

std::optional<std::string> events_target(const std::string& target) {
  const auto parts = split_path(target);
  if (parts.size() == 3 && parts[0] == "sessions" && parts[2] == "events") return parts[1];
  return std::nullopt;
}

}  // namespace jambeam
