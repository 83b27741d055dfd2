#include "jambeam/carriage.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "jambeam/common.hpp"
#include "jambeam/error.hpp"

namespace jambeam {

namespace {

void check_speed(double v) {
  if (!(v > 0.0)) throw Error(ErrorKind::InvalidArgument, "carriage speed must be positive");
}

// Predecessor bitmask per op; throws on cycles.
std::vector<std::uint32_t> predecessor_masks(const RouteTask& task) {
  const int n = static_cast<int>(task.ops.size());
  std::vector<std::vector<int>> succ(static_cast<std::size_t>(n));
  std::vector<int> indegree(static_cast<std::size_t>(n), 0);
  std::vector<std::uint32_t> masks(static_cast<std::size_t>(n), 0);
  for (const auto& [a, b] : task.precedence) {
    if (a < 0 || b < 0 || a >= n || b >= n) {
      throw Error(ErrorKind::InvalidArgument, "precedence references op outside the task");
    }
    if (a == b) throw Error(ErrorKind::CyclicPrecedence, "op " + std::to_string(a) + " precedes itself");
    succ[static_cast<std::size_t>(a)].push_back(b);
    ++indegree[static_cast<std::size_t>(b)];
    if (n <= 32) masks[static_cast<std::size_t>(b)] |= (1u << a);
  }
  // Kahn's algorithm, only to detect cycles.
  std::vector<int> queue;
  for (int i = 0; i < n; ++i) {
    if (indegree[static_cast<std::size_t>(i)] == 0) queue.push_back(i);
  }
  std::size_t head = 0;
  while (head < queue.size()) {
    const int u = queue[head++];
    for (int v : succ[static_cast<std::size_t>(u)]) {
      if (--indegree[static_cast<std::size_t>(v)] == 0) queue.push_back(v);
    }
  }
  if (static_cast<int>(queue.size()) != n) throw Error(ErrorKind::CyclicPrecedence, "precedence relation has a cycle");
  return masks;
}

bool feasible(const std::vector<int>& order, const RouteTask& task) {
  std::vector<int> rank(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) rank[static_cast<std::size_t>(order[k])] = static_cast<int>(k);
  return std::all_of(task.precedence.begin(), task.precedence.end(), [&](const auto& p) {
    return rank[static_cast<std::size_t>(p.first)] < rank[static_cast<std::size_t>(p.second)];
  });
}

double order_distance(const std::vector<int>& order, const RouteTask& task, double start_x) {
  double d = 0.0;
  double x = start_x;
  for (int i : order) {
    d += std::abs(task.ops[static_cast<std::size_t>(i)].position - x);
    x = task.ops[static_cast<std::size_t>(i)].position;
  }
  return d;
}

std::vector<int> exact_order(const RouteTask& task, double start_x, const std::vector<std::uint32_t>& preds) {
  const int n = static_cast<int>(task.ops.size());
  const std::uint32_t full = (1u << n) - 1u;
  const double inf = std::numeric_limits<double>::infinity();
  // best[mask][last]: shortest travel visiting `mask`, ending at op `last`.
  std::vector<double> best(static_cast<std::size_t>(full + 1) * n, inf);
  std::vector<int> parent(best.size(), -1);
  auto at = [n](std::uint32_t mask, int last) { return static_cast<std::size_t>(mask) * n + last; };
  auto pos = [&](int i) { return task.ops[static_cast<std::size_t>(i)].position; };

  for (int j = 0; j < n; ++j) {
    if (preds[static_cast<std::size_t>(j)] == 0) best[at(1u << j, j)] = std::abs(pos(j) - start_x);
  }
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    for (int last = 0; last < n; ++last) {
      const double here = best[at(mask, last)];
      if (here == inf) continue;
      for (int j = 0; j < n; ++j) {
        if ((mask >> j) & 1u) continue;
        if ((preds[static_cast<std::size_t>(j)] & mask) != preds[static_cast<std::size_t>(j)]) continue;
        const std::uint32_t next = mask | (1u << j);
        const double cand = here + std::abs(pos(j) - pos(last));
        if (cand < best[at(next, j)]) {
          best[at(next, j)] = cand;
          parent[at(next, j)] = last;
        }
      }
    }
  }
  int last = 0;
  for (int j = 1; j < n; ++j) {
    if (best[at(full, j)] < best[at(full, last)]) last = j;
  }
  std::vector<int> order;
  std::uint32_t mask = full;
  while (last >= 0) {
    order.push_back(last);
    const int prev = parent[at(mask, last)];
    mask &= ~(1u << last);
    last = prev;
  }
  std::reverse(order.begin(), order.end());
  return order;
}

std::vector<int> heuristic_order(const RouteTask& task, double start_x) {
  const int n = static_cast<int>(task.ops.size());
  std::vector<std::vector<int>> preds(static_cast<std::size_t>(n));
  for (const auto& [a, b] : task.precedence) preds[static_cast<std::size_t>(b)].push_back(a);
  std::vector<bool> done(static_cast<std::size_t>(n), false);
  std::vector<int> order;
  double x = start_x;
  for (int step = 0; step < n; ++step) {
    int pick = -1;
    double pick_d = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      if (done[static_cast<std::size_t>(j)]) continue;
      const auto& pj = preds[static_cast<std::size_t>(j)];
      if (!std::all_of(pj.begin(), pj.end(), [&](int p) { return done[static_cast<std::size_t>(p)]; })) continue;
      const double d = std::abs(task.ops[static_cast<std::size_t>(j)].position - x);
      if (d < pick_d) {
        pick = j;
        pick_d = d;
      }
    }
    done[static_cast<std::size_t>(pick)] = true;
    order.push_back(pick);
    x = task.ops[static_cast<std::size_t>(pick)].position;
  }
  // 2-opt, keeping only precedence-feasible reversals.
  bool improved = true;
  double current = order_distance(order, task, start_x);
  while (improved) {
    improved = false;
    for (int i = 0; i + 1 < n; ++i) {
      for (int k = i + 1; k < n; ++k) {
        std::vector<int> cand = order;
        std::reverse(cand.begin() + i, cand.begin() + k + 1);
        if (!feasible(cand, task)) continue;
        const double d = order_distance(cand, task, start_x);
        if (d < current - 1e-12) {
          order = std::move(cand);
          current = d;
          improved = true;
        }
      }
    }
  }
  return order;
}

}  // namespace

double travel_time(double from_x, double to_x, double speed) {
  check_speed(speed);
  return std::abs(to_x - from_x) / speed;
}

AdvanceResult advance(const CarriagePose& pose, double target_x, double clock, double everted_length) {
  check_speed(pose.speed);
  if (target_x < -kLengthEps || target_x > everted_length + kLengthEps) {
    throw Error(ErrorKind::Precondition, "carriage target " + std::to_string(target_x) +
                                             " m lies outside the everted body [0, " +
                                             std::to_string(everted_length) + "] m");
  }
  AdvanceResult out{pose, clock + travel_time(pose.x, target_x, pose.speed)};
  out.pose.x = target_x;
  return out;
}

RoutePlan plan_route(const RouteTask& task, double start_x, const CarriageParams& params) {
  check_speed(params.speed);
  if (params.dwell < 0.0) throw Error(ErrorKind::InvalidArgument, "dwell must be non-negative");
  for (std::size_t i = 0; i < task.ops.size(); ++i) {
    const double p = task.ops[i].position;
    if (p < -kLengthEps || p > task.everted_length + kLengthEps) {
      throw Error(ErrorKind::InvalidArgument, "route op " + std::to_string(i) + " lies outside the everted body");
    }
  }
  const auto preds = predecessor_masks(task);

  RoutePlan plan;
  if (task.ops.empty()) return plan;
  const int n = static_cast<int>(task.ops.size());
  plan.optimal = n <= kExactRouteLimit;
  plan.order = plan.optimal ? exact_order(task, start_x, preds) : heuristic_order(task, start_x);

  double x = start_x;
  for (int i : plan.order) {
    const double to = task.ops[static_cast<std::size_t>(i)].position;
    plan.leg_times.push_back(travel_time(x, to, params.speed));
    plan.travel_distance += std::abs(to - x);
    x = to;
  }
  plan.total_time = plan.travel_distance / params.speed + n * params.dwell;
  return plan;
}

}  // namespace jambeam
