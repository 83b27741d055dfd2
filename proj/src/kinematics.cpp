#include "jambeam/kinematics.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "jambeam/error.hpp"

namespace jambeam {

namespace {

constexpr double kRetractionEps = 1e-12;

void add_uniform_curvature(JointChain& chain, double bend) {
  const double length = chain.length();
  if (length <= 0.0) return;
  const double kappa = bend / length;
  for (auto& seg : chain.segments) seg.curvature += kappa;
}

}  // namespace

double JointChain::length() const noexcept {
  return std::accumulate(segments.begin(), segments.end(), 0.0,
                         [](double acc, const Segment& s) { return acc + s.length; });
}

double JointChain::joint_angle(int pouch) const noexcept {
  const auto it = joints.find(pouch);
  return it == joints.end() ? 0.0 : it->second.angle;
}

Polyline shape_of(const JointChain& chain, int samples_per_segment) {
  if (samples_per_segment < 1) throw Error(ErrorKind::InvalidArgument, "samples_per_segment must be >= 1");
  Polyline out;
  Pose2 pose = chain.base_pose;
  out.push_back({pose.x, pose.y});

  auto joint = chain.joints.begin();
  const auto joint_pos = [&](auto it) { return chain.joint_position(it->first); };

  double s0 = 0.0;
  for (const auto& seg : chain.segments) {
    const double s1 = s0 + seg.length;
    while (joint != chain.joints.end() && joint_pos(joint) <= s0 + kLengthEps) {
      pose.heading += joint->second.angle;
      ++joint;
    }
    // Positions are always evaluated from the last hinge so that sampling
    // does not accumulate round-off along the segment.
    Pose2 piece = pose;
    double piece_s = s0;
    double last_s = s0;
    for (int k = 1; k <= samples_per_segment; ++k) {
      const double t = (k == samples_per_segment) ? s1 : s0 + seg.length * k / samples_per_segment;
      while (joint != chain.joints.end() && joint_pos(joint) < t - kLengthEps) {
        const double hp = joint_pos(joint);
        Pose2 at = advance_along_arc(piece, seg.curvature, hp - piece_s);
        if (hp - last_s > kLengthEps) out.push_back({at.x, at.y});
        at.heading += joint->second.angle;
        piece = at;
        piece_s = hp;
        last_s = hp;
        ++joint;
      }
      const Pose2 at = advance_along_arc(piece, seg.curvature, t - piece_s);
      out.push_back({at.x, at.y});
      last_s = t;
    }
    pose = advance_along_arc(piece, seg.curvature, s1 - piece_s);
    s0 = s1;
  }
  return out;
}

double shortening_from_angle(double theta, double offset) {
  if (!(offset > 0.0)) throw Error(ErrorKind::InvalidArgument, "cable offset must be positive");
  return 2.0 * offset * std::sin(0.5 * std::abs(theta));
}

double angle_from_shortening(double shortening, double offset) {
  if (!(offset > 0.0)) throw Error(ErrorKind::InvalidArgument, "cable offset must be positive");
  if (shortening < 0.0) throw Error(ErrorKind::InvalidArgument, "cable shortening must be non-negative");
  if (shortening >= 2.0 * offset) {
    throw Error(ErrorKind::Saturated, "hinge saturated: shortening " + std::to_string(shortening) +
                                          " m reaches 2r = " + std::to_string(2.0 * offset) + " m");
  }
  return 2.0 * std::asin(shortening / (2.0 * offset));
}

int GrowthState::everted_count(int num_pouches) const noexcept {
  int n = 0;
  for (int i = 0; i < num_pouches; ++i) n += is_everted(i) ? 1 : 0;
  return n;
}

KinematicState KinematicState::make(const Pose2& base, double everted_length, double total_material_length,
                                    double pouch_pitch, double cable_offset) {
  if (everted_length < 0.0 || everted_length > total_material_length + kLengthEps) {
    throw Error(ErrorKind::InvalidArgument, "everted length must lie within the material length");
  }
  if (!(pouch_pitch > 0.0)) throw Error(ErrorKind::InvalidArgument, "pouch pitch must be positive");
  if (!(cable_offset > 0.0)) throw Error(ErrorKind::InvalidArgument, "cable offset must be positive");
  KinematicState st;
  st.chain.base_pose = base;
  st.chain.pouch_pitch = pouch_pitch;
  if (everted_length > 0.0) st.chain.segments.push_back({everted_length, 0.0});
  st.growth = {everted_length, total_material_length, pouch_pitch};
  st.cable_offset = cable_offset;
  return st;
}

double geometric_retraction(const KinematicState& state, Side side) {
  const double sign = side_sign(side);
  double total = 0.0;
  for (const auto& [pouch, joint] : state.chain.joints) {
    if (joint.angle * sign > 0.0) total += shortening_from_angle(joint.angle, state.cable_offset);
  }
  return total + state.cable_offset * state.cable(side).arc_bend;
}

std::string_view to_string(PullCase kind) noexcept {
  switch (kind) {
    case PullCase::None: return "none";
    case PullCase::Buckle: return "buckle";
    case PullCase::Arc: return "arc";
    case PullCase::Stored: return "stored";
  }
  return "unknown";
}

PullResult apply_pull(KinematicState state, Side side, double shortening, std::span<const PouchCondition> pouches,
                      double cable_moment) {
  if (shortening < 0.0) throw Error(ErrorKind::InvalidArgument, "pull length must be non-negative");
  if (shortening == 0.0) return {std::move(state), PullCase::None, std::nullopt};

  const PouchCondition* weakest_compliant = nullptr;
  double weakest_jammed = std::numeric_limits<double>::infinity();
  for (const auto& p : pouches) {
    if (p.jammed) {
      weakest_jammed = std::min(weakest_jammed, p.critical_moment);
    } else if (weakest_compliant == nullptr || p.critical_moment < weakest_compliant->critical_moment) {
      weakest_compliant = &p;  // strict <: ties stay with the pouch nearest the base
    }
  }

  const double sign = side_sign(side);
  if (weakest_compliant == nullptr) {
    if (cable_moment >= weakest_jammed) {
      throw Error(ErrorKind::Overload, "cable moment " + std::to_string(cable_moment) +
                                           " N*m buckles a jammed section (capacity " +
                                           std::to_string(weakest_jammed) + " N*m)");
    }
    const double bend = shortening / state.cable_offset;
    add_uniform_curvature(state.chain, sign * bend);
    state.cable(side).arc_bend += bend;
    state.cable(side).spool_retraction += shortening;
    return {std::move(state), PullCase::Arc, std::nullopt};
  }

  // Tension ramps up until the weakest section yields; whichever of the
  // compliant and jammed capacities is lower decides what happens first.
  if (weakest_jammed < weakest_compliant->critical_moment && cable_moment >= weakest_jammed) {
    throw Error(ErrorKind::Overload, "a jammed section is weaker than every compliant pouch");
  }
  if (cable_moment < weakest_compliant->critical_moment) {
    return {std::move(state), PullCase::Stored, std::nullopt};
  }

  const int pouch = weakest_compliant->pouch;
  Joint& joint = state.chain.joints[pouch];
  if (joint.locked) {
    throw Error(ErrorKind::Precondition, "hinge at pouch " + std::to_string(pouch) + " is locked");
  }
  if (joint.angle * sign < 0.0) {
    throw Error(ErrorKind::Precondition, "hinge at pouch " + std::to_string(pouch) +
                                             " is bent toward the other cable; release that cable first");
  }
  const double total = shortening_from_angle(joint.angle, state.cable_offset) + shortening;
  joint.angle = sign * angle_from_shortening(total, state.cable_offset);
  state.cable(side).spool_retraction += shortening;
  return {std::move(state), PullCase::Buckle, pouch};
}

KinematicState apply_release(KinematicState state, Side side, double length) {
  if (length < 0.0) throw Error(ErrorKind::InvalidArgument, "release length must be non-negative");
  const double sign = side_sign(side);
  const double r = state.cable_offset;
  double remaining = length;
  CableState& cable = state.cable(side);

  for (auto it = state.chain.joints.rbegin(); it != state.chain.joints.rend() && remaining > 0.0; ++it) {
    Joint& joint = it->second;
    if (joint.locked || joint.angle * sign <= 0.0) continue;
    const double current = shortening_from_angle(joint.angle, r);
    const double take = std::min(current, remaining);
    joint.angle = sign * angle_from_shortening(current - take, r);
    remaining -= take;
    cable.spool_retraction -= take;
  }
  if (remaining > 0.0 && cable.arc_bend > 0.0) {
    const double take = std::min(r * cable.arc_bend, remaining);
    const double bend = take / r;
    add_uniform_curvature(state.chain, -sign * bend);
    cable.arc_bend = std::max(0.0, cable.arc_bend - bend);
    remaining -= take;
    cable.spool_retraction -= take;
  }
  if (remaining > kRetractionEps) {
    throw Error(ErrorKind::Precondition, "cannot release " + std::to_string(length) + " m on the " +
                                             std::string(to_string(side)) + " cable: only " +
                                             std::to_string(length - remaining) + " m is releasable");
  }
  cable.spool_retraction = std::max(0.0, cable.spool_retraction);
  return state;
}

KinematicState lock_joint(KinematicState state, int pouch, JamState pouch_state) {
  if (pouch_state != JamState::Jammed) {
    throw Error(ErrorKind::Precondition, "cannot lock hinge at pouch " + std::to_string(pouch) + ": pouch is " +
                                             std::string(to_string(pouch_state)));
  }
  if (auto it = state.chain.joints.find(pouch); it != state.chain.joints.end()) it->second.locked = true;
  return state;
}

KinematicState unlock_joint(KinematicState state, int pouch) {
  if (auto it = state.chain.joints.find(pouch); it != state.chain.joints.end()) it->second.locked = false;
  return state;
}

KinematicState grow(KinematicState state, double length) {
  if (length < 0.0) throw Error(ErrorKind::InvalidArgument, "growth length must be non-negative");
  if (state.growth.everted_length + length > state.growth.total_material_length + kLengthEps) {
    throw Error(ErrorKind::MaterialExhausted,
                "growing " + std::to_string(length) + " m exceeds the remaining material (" +
                    std::to_string(state.growth.total_material_length - state.growth.everted_length) + " m)");
  }
  if (length == 0.0) return state;
  state.chain.segments.push_back({length, 0.0});
  state.growth.everted_length += length;
  return state;
}

}  // namespace jambeam
