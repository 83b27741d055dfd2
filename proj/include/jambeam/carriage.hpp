#pragma once

#include <limits>
#include <utility>
#include <vector>

namespace jambeam {

// Internal carriage that carries the electromagnet along the everted body.

struct CarriageParams {
  double speed = 0.1;          // m/s
  double dwell = 2.0;          // s per valve switch
  double magnet_range = 0.02;  // m, reach of the electromagnet
};

struct CarriagePose {
  double x = 0.0;
  double speed = 0.1;
  double dwell = 2.0;
};

double travel_time(double from_x, double to_x, double speed);

struct AdvanceResult {
  CarriagePose pose;
  double clock = 0.0;
};

// Drives to target_x. The carriage rides the inner material, which exists
// only over the everted span.
AdvanceResult advance(const CarriagePose& pose, double target_x, double clock, double everted_length);

enum class RouteAction { Hold, Release, Dwell };

struct RouteOp {
  double position = 0.0;
  RouteAction action = RouteAction::Hold;
};

struct RouteTask {
  std::vector<RouteOp> ops;
  std::vector<std::pair<int, int>> precedence;  // (i, j): op i before op j
  double everted_length = std::numeric_limits<double>::infinity();
};

struct RoutePlan {
  std::vector<int> order;         // indices into RouteTask::ops
  std::vector<double> leg_times;  // travel time of each leg, s
  double travel_distance = 0.0;
  double total_time = 0.0;        // travel + one dwell per op
  bool optimal = true;            // false for the heuristic used above kExactRouteLimit ops
};

inline constexpr int kExactRouteLimit = 10;

// Single-carriage schedule on a line. Exact (DP over visited set x last op)
// up to kExactRouteLimit ops; nearest-feasible + 2-opt beyond.
RoutePlan plan_route(const RouteTask& task, double start_x, const CarriageParams& params);

}  // namespace jambeam
