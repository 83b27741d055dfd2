#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include <nlohmann/json.hpp>

#include "jambeam/engine.hpp"
#include "jambeam/planner.hpp"

namespace jambeam {

struct SessionState {
  std::uint64_t revision = 0;
  Snapshot snapshot;
};

struct PlanResponse {
  JointPlan plan;
  ActionScript script;
};

// Receives the JSON snapshot record pushed after every revision.
using SnapshotListener = std::function<void(const std::string&)>;

// In-process session store behind the HTTP/WebSocket server. Calls on one
// session are serialized; different sessions do not share locks.
class SessionManager {
 public:
  std::string create(const RobotSpec& spec);
  bool contains(const std::string& id) const;
  SessionState state(const std::string& id) const;
  RobotSpec spec(const std::string& id) const;

  // Applies one action. On error the session and revision are unchanged.
  SessionState apply(const std::string& id, const Action& action);

  // Never mutates the session.
  PlanResponse plan(const std::string& id, const GoalShape& goal) const;

  // The listener is called once with the current snapshot and then after
  // every applied action, in revision order.
  std::uint64_t subscribe(const std::string& id, SnapshotListener listener);
  void unsubscribe(const std::string& id, std::uint64_t token);

 private:
  struct Session {
    mutable std::mutex mutex;
    std::string id;
    World world;
    std::uint64_t revision = 0;
    std::map<std::uint64_t, SnapshotListener> listeners;
    std::uint64_t next_token = 1;

    explicit Session(std::string sid, const RobotSpec& spec) : id(std::move(sid)), world(spec) {}
  };

  std::shared_ptr<Session> find(const std::string& id) const;

  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t counter_ = 0;
};

// Wire format shared by the server and its clients.
nlohmann::json state_json(const SessionState& state);
nlohmann::json plan_json(const PlanResponse& response);
nlohmann::json error_json(const std::exception& e);
GoalShape goal_from_json(const nlohmann::json& j);

struct HttpReply {
  int status = 200;
  nlohmann::json body;
};

// Routes one HTTP request (method, target path, body). Transport-free so the
// whole API is testable without sockets.
HttpReply handle_request(SessionManager& manager, const std::string& method, const std::string& target,
                         const std::string& body);

// Session id when `target` is /sessions/{id}/events.
std::optional<std::string> events_target(const std::string& target);

}  // namespace jambeam
