#pragma once

#include <optional>
#include <span>
#include <vector>

#include "jambeam/actions.hpp"
#include "jambeam/engine.hpp"
#include "jambeam/geometry.hpp"

namespace jambeam {

struct GoalShape {
  Polyline polyline;
  double tolerance = 0.01;  // m
};

struct JointPlan {
  std::vector<double> angles;  // one per pouch, rad; hinge at pouch start
  double cost = 0.0;           // sum of per-pouch segment costs, m
  double residual = 0.0;       // whole-shape Frechet distance to the goal, m
  double goal_length = 0.0;    // m
  Polyline predicted_shape;    // first goal_length metres of the planned body

  bool within_tolerance(const GoalShape& goal) const noexcept { return residual <= goal.tolerance; }
};

inline constexpr int kSegmentSamples = 8;
inline constexpr int kShapeSamples = 64;

std::vector<double> default_angle_grid();

// Angles pouch i may take: hinges whose pouch lies entirely within the goal
// length are free, the rest stay at zero.
int eligible_pouches(const RobotSpec& spec, double goal_length);

// Cost of one planned piece: the body piece starting at the goal point at arc
// length s0 with the given heading, against the goal between s0 and s1.
double segment_cost(std::span<const Point2> goal, double s0, double s1, double heading);

// Sum of segment costs for a full assignment of angles.
double plan_cost(std::span<const Point2> goal, const RobotSpec& spec, std::span<const double> angles);

// Body shape for the given hinge angles, cut to `length`.
Polyline planned_shape(const RobotSpec& spec, std::span<const double> angles, double length);

// Exact DP over (pouch, heading). Ties go to the smaller |angle| at the
// earliest differing pouch, positive before negative.
JointPlan fit_joint_angles(const GoalShape& goal, const RobotSpec& spec,
                           std::span<const double> angle_grid = default_angle_grid());

// Exhaustive enumeration with the same cost and tie-break. Small instances only.
JointPlan brute_force_joint_angles(const GoalShape& goal, const RobotSpec& spec, std::span<const double> angle_grid);

// Grow if needed, then for each nonzero joint from the base:
// UnjamPouch(i), PullCable(side, 2 r sin(|angle|/2)), JamPouch(i).
ActionScript compile_actions(const JointPlan& plan, const RobotSpec& spec,
                             std::optional<double> everted_length = std::nullopt);

void validate_goal(const GoalShape& goal);

}  // namespace jambeam
