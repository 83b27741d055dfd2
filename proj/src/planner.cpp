#include "jambeam/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>

#include "jambeam/error.hpp"

namespace jambeam {

namespace {

constexpr double kCostTie = 1e-12;
constexpr double kHeadingQuantum = 1e-9;

long long heading_key(double h) { return std::llround(h / kHeadingQuantum); }

// Goal between arc lengths s0 and s1.
Polyline slice(std::span<const Point2> line, double s0, double s1) {
  Polyline out{point_at(line, s0)};
  double walked = 0.0;
  for (std::size_t i = 1; i < line.size(); ++i) {
    walked += distance(line[i - 1], line[i]);
    if (walked > s0 && walked < s1) out.push_back(line[i]);
  }
  out.push_back(point_at(line, s1));
  return out;
}

// Grid in tie-break order: |angle| ascending, positive before negative.
std::vector<double> ordered_grid(std::span<const double> grid) {
  std::vector<double> out(grid.begin(), grid.end());
  std::sort(out.begin(), out.end(), [](double a, double b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
    return a > b;
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void validate_grid(std::span<const double> grid) {
  if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "angle grid is empty", "angle_grid");
  bool has_zero = false;
  for (double a : grid) {
    if (!std::isfinite(a) || std::abs(a) >= std::numbers::pi) {
      throw Error(ErrorKind::InvalidArgument, "grid angles must lie strictly inside (-pi, pi)", "angle_grid");
    }
    has_zero = has_zero || a == 0.0;
  }
  if (!has_zero) throw Error(ErrorKind::InvalidArgument, "angle grid must include 0", "angle_grid");
}

struct Pieces {
  std::vector<double> bounds;  // s_0 = 0 ... s_P = goal length
  int free = 0;                // pouches with a free hinge
};

Pieces pieces_for(const RobotSpec& spec, double goal_length) {
  Pieces p;
  p.free = eligible_pouches(spec, goal_length);
  const int count = std::max(p.free, 1);
  for (int k = 0; k < count; ++k) p.bounds.push_back(k * spec.pitch());
  p.bounds.push_back(goal_length);
  return p;
}

double checked_goal_length(const GoalShape& goal, const RobotSpec& spec) {
  validate_goal(goal);
  const double length = arc_length(goal.polyline);
  if (length > spec.length + kLengthEps) {
    throw Error(ErrorKind::MaterialExhausted,
                "goal is " + std::to_string(length) + " m long but only " + std::to_string(spec.length) +
                    " m of material exists",
                "goal");
  }
  return length;
}

void finish(JointPlan& plan, const GoalShape& goal, const RobotSpec& spec) {
  plan.predicted_shape = planned_shape(spec, plan.angles, plan.goal_length);
  plan.residual = shape_distance(plan.predicted_shape, goal.polyline, kShapeSamples);
}

}  // namespace

std::vector<double> default_angle_grid() {
  std::vector<double> grid{0.0};
  for (double deg : {15.0, 30.0, 45.0, 60.0, 90.0}) {
    grid.push_back(deg * std::numbers::pi / 180.0);
    grid.push_back(-deg * std::numbers::pi / 180.0);
  }
  return grid;
}

void validate_goal(const GoalShape& goal) {
  if (goal.polyline.size() < 2) throw Error(ErrorKind::InvalidArgument, "goal needs at least two points", "goal");
  for (std::size_t i = 0; i < goal.polyline.size(); ++i) {
    if (!std::isfinite(goal.polyline[i].x) || !std::isfinite(goal.polyline[i].y)) {
      throw Error(ErrorKind::InvalidArgument, "non-finite goal coordinate", "goal[" + std::to_string(i) + "]");
    }
  }
  if (!(arc_length(goal.polyline) > 0.0)) throw Error(ErrorKind::InvalidArgument, "goal has zero length", "goal");
  if (!(goal.tolerance >= 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be non-negative", "tolerance");
}

int eligible_pouches(const RobotSpec& spec, double goal_length) {
  int n = 0;
  while (n < spec.num_pouches && (n + 1) * spec.pitch() <= goal_length + kLengthEps) ++n;
  return n;
}

double segment_cost(std::span<const Point2> goal, double s0, double s1, double heading) {
  const Point2 anchor = point_at(goal, s0);
  const double len = s1 - s0;
  Polyline body;
  body.reserve(kSegmentSamples);
  for (int k = 0; k < kSegmentSamples; ++k) {
    const double t = len * k / (kSegmentSamples - 1);
    body.push_back({anchor.x + t * std::cos(heading), anchor.y + t * std::sin(heading)});
  }
  const Polyline target = resample(slice(goal, s0, s1), kSegmentSamples);
  return discrete_frechet(body, target);
}

double plan_cost(std::span<const Point2> goal, const RobotSpec& spec, std::span<const double> angles) {
  const Pieces p = pieces_for(spec, arc_length(goal));
  double heading = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < p.bounds.size(); ++k) {
    if (static_cast<int>(k) < p.free && k < angles.size()) heading += angles[k];
    total += segment_cost(goal, p.bounds[k], p.bounds[k + 1], heading);
  }
  return total;
}

Polyline planned_shape(const RobotSpec& spec, std::span<const double> angles, double length) {
  JointChain chain;
  chain.pouch_pitch = spec.pitch();
  chain.segments.push_back({length, 0.0});
  for (std::size_t i = 0; i < angles.size(); ++i) {
    if (angles[i] != 0.0 && chain.joint_position(static_cast<int>(i)) < length - kLengthEps) {
      chain.joints[static_cast<int>(i)] = Joint{angles[i], true};
    }
  }
  return shape_of(chain);
}

JointPlan fit_joint_angles(const GoalShape& goal, const RobotSpec& spec, std::span<const double> angle_grid) {
  validate_grid(angle_grid);
  const double goal_length = checked_goal_length(goal, spec);
  const std::vector<double> grid = ordered_grid(angle_grid);
  const Pieces p = pieces_for(spec, goal_length);
  const int layers = static_cast<int>(p.bounds.size()) - 1;

  // Headings entering each piece, keyed by quantized value.
  std::vector<std::map<long long, double>> reach(layers + 1);
  reach[0].emplace(0, 0.0);
  for (int k = 0; k < layers; ++k) {
    for (const auto& [key, h] : reach[k]) {
      if (k < p.free) {
        for (double a : grid) reach[k + 1].emplace(heading_key(h + a), h + a);
      } else {
        reach[k + 1].emplace(key, h);
      }
    }
  }

  struct Cell {
    double cost = 0.0;
    double angle = 0.0;
  };
  // best[k][key]: cheapest completion from piece k given the heading before hinge k.
  std::vector<std::map<long long, Cell>> best(layers + 1);
  for (const auto& [key, h] : reach[layers]) best[layers][key] = {0.0, 0.0};
  for (int k = layers - 1; k >= 0; --k) {
    std::map<long long, double> piece_cost;
    for (const auto& [key, h] : reach[k]) {
      Cell chosen{std::numeric_limits<double>::infinity(), 0.0};
      const std::vector<double> options = k < p.free ? grid : std::vector<double>{0.0};
      for (double a : options) {
        const long long next = heading_key(h + a);
        auto [it, fresh] = piece_cost.emplace(next, 0.0);
        if (fresh) it->second = segment_cost(goal.polyline, p.bounds[k], p.bounds[k + 1], reach[k + 1].at(next));
        const double total = it->second + best[k + 1].at(next).cost;
        if (total < chosen.cost - kCostTie) chosen = {total, a};
      }
      best[k][key] = chosen;
    }
  }

  JointPlan plan;
  plan.angles.assign(spec.num_pouches, 0.0);
  plan.goal_length = goal_length;
  plan.cost = best[0].at(0).cost;
  long long key = 0;
  for (int k = 0; k < layers; ++k) {
    const double a = best[k].at(key).angle;
    if (k < p.free) plan.angles[k] = a;
    key = heading_key(reach[k].at(key) + a);
  }
  finish(plan, goal, spec);
  return plan;
}

JointPlan brute_force_joint_angles(const GoalShape& goal, const RobotSpec& spec, std::span<const double> angle_grid) {
  validate_grid(angle_grid);
  const double goal_length = checked_goal_length(goal, spec);
  const std::vector<double> grid = ordered_grid(angle_grid);
  const int free = eligible_pouches(spec, goal_length);
  double combos = std::pow(static_cast<double>(grid.size()), free);
  if (combos > 5e6) throw Error(ErrorKind::InvalidArgument, "instance too large for enumeration");

  JointPlan plan;
  plan.angles.assign(spec.num_pouches, 0.0);
  plan.goal_length = goal_length;
  plan.cost = std::numeric_limits<double>::infinity();

  // Odometer with pouch 0 most significant: enumeration order is the tie-break order.
  std::vector<std::size_t> digit(free, 0);
  std::vector<double> angles(spec.num_pouches, 0.0);
  while (true) {
    for (int i = 0; i < free; ++i) angles[i] = grid[digit[i]];
    const double cost = plan_cost(goal.polyline, spec, angles);
    if (cost < plan.cost - kCostTie) {
      plan.cost = cost;
      plan.angles = angles;
    }
    int i = free - 1;
    while (i >= 0 && ++digit[i] == grid.size()) digit[i--] = 0;
    if (i < 0) break;
  }
  finish(plan, goal, spec);
  return plan;
}

ActionScript compile_actions(const JointPlan& plan, const RobotSpec& spec, std::optional<double> everted_length) {
  if (static_cast<int>(plan.angles.size()) != spec.num_pouches) {
    throw Error(ErrorKind::InvalidArgument, "plan has " + std::to_string(plan.angles.size()) +
                                                " angles for " + std::to_string(spec.num_pouches) + " pouches",
                "angles");
  }
  double needed = plan.goal_length;
  bool any = false;
  for (int i = 0; i < spec.num_pouches; ++i) {
    const double a = plan.angles[i];
    if (!std::isfinite(a) || std::abs(a) >= std::numbers::pi) {
      throw Error(ErrorKind::InvalidArgument, "angle out of range", "angles[" + std::to_string(i) + "]");
    }
    if (a != 0.0) {
      needed = std::max(needed, (i + 1) * spec.pitch());
      any = true;
    }
  }
  if (needed > spec.length + kLengthEps) {
    throw Error(ErrorKind::MaterialExhausted, "plan needs " + std::to_string(needed) + " m of material", "goal_length");
  }
  if (any) {
    const MomentModel model{spec.pressure, spec.radius, spec.mechanics.critical_coefficient,
                            spec.mechanics.wrinkle_floor};
    BeamSection section;
    section.radius = spec.radius;
    section.kappa_jam = spec.mechanics.kappa_jam;
    const double compliant = critical_moment(model, section);
    section.jammed = true;
    const double jammed = critical_moment(model, section);
    const double moment = spec.cable_tension * spec.offset();
    if (moment < compliant || moment >= jammed) {
      throw Error(ErrorKind::Precondition,
                  "cable moment " + std::to_string(moment) + " N*m cannot buckle a single compliant pouch (needs [" +
                      std::to_string(compliant) + ", " + std::to_string(jammed) + ") N*m)",
                  "cable_tension_n");
    }
  }

  ActionScript script;
  const double everted = everted_length.value_or(spec.initial_everted_length());
  if (needed > everted + kLengthEps) script.push_back(Grow{needed - everted});
  for (int i = 0; i < spec.num_pouches; ++i) {
    const double a = plan.angles[i];
    if (a == 0.0) continue;
    script.push_back(UnjamPouch{i});
    script.push_back(PullCable{a > 0.0 ? Side::Left : Side::Right, shortening_from_angle(a, spec.offset())});
    script.push_back(JamPouch{i});
  }
  return script;
}

}  // namespace jambeam
