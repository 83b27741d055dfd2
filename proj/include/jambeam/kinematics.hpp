#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "jambeam/common.hpp"
#include "jambeam/geometry.hpp"

namespace jambeam {

// Planar virtual-joint model of the robot body.
//
// The body is a sequence of segments (straight or constant curvature) laid
// end to end from the base. Buckles are zero-length hinges located at the
// base end of a pouch, i.e. at arc length pouch_index * pitch. Positive
// angles bend left (counter-clockwise).

struct Segment {
  double length = 0.0;
  double curvature = 0.0;  // 1/m

  friend bool operator==(const Segment&, const Segment&) = default;
};

struct Joint {
  double angle = 0.0;
  bool locked = false;

  friend bool operator==(const Joint&, const Joint&) = default;
};

struct JointChain {
  Pose2 base_pose;
  std::vector<Segment> segments;
  std::map<int, Joint> joints;  // pouch index -> joint
  double pouch_pitch = 0.15;

  double length() const noexcept;
  double joint_position(int pouch) const noexcept { return pouch * pouch_pitch; }
  double joint_angle(int pouch) const noexcept;
};

inline constexpr int kSamplesPerSegment = 16;

// World-frame polyline of the chain. Each segment contributes
// `samples_per_segment` uniform steps plus a vertex at every hinge inside it.
Polyline shape_of(const JointChain& chain, int samples_per_segment = kSamplesPerSegment);

// Cable shortening across a hinge of angle theta with guides at offset r:
// dl = 2 r sin(|theta| / 2).
double shortening_from_angle(double theta, double offset);
// Inverse; throws ErrorKind::Saturated once dl reaches 2 r.
double angle_from_shortening(double shortening, double offset);

struct CableState {
  Side side = Side::Left;
  double spool_retraction = 0.0;  // m
  double arc_bend = 0.0;          // rad of global bending attributed to this cable
};

struct GrowthState {
  double everted_length = 0.0;
  double total_material_length = 0.0;
  double pouch_pitch = 0.15;

  bool is_everted(int pouch) const noexcept {
    return (pouch + 1) * pouch_pitch <= everted_length + kLengthEps;
  }
  int everted_count(int num_pouches) const noexcept;
};

struct KinematicState {
  JointChain chain;
  std::array<CableState, 2> cables{CableState{Side::Left}, CableState{Side::Right}};
  GrowthState growth;
  double cable_offset = 0.043;

  const CableState& cable(Side side) const noexcept { return cables[static_cast<std::size_t>(side_index(side))]; }
  CableState& cable(Side side) noexcept { return cables[static_cast<std::size_t>(side_index(side))]; }

  // Straight body along the base heading.
  static KinematicState make(const Pose2& base, double everted_length, double total_material_length,
                             double pouch_pitch, double cable_offset);
};

// Retraction the body geometry accounts for on one side:
// sum over joints bent toward `side` of 2 r sin(|theta|/2), plus r * arc_bend.
double geometric_retraction(const KinematicState& state, Side side);

// What the mechanics says about one everted pouch when a cable is pulled.
struct PouchCondition {
  int pouch = 0;
  bool jammed = true;
  double critical_moment = 0.0;  // N*m
};

enum class PullCase {
  None,    // zero pull
  Buckle,  // hinge formed / opened at the weakest compliant pouch
  Arc,     // all pouches jammed: uniform curvature over the everted length
  Stored,  // cable moment below the compliant critical moment: no motion
};

std::string_view to_string(PullCase kind) noexcept;

struct PullResult {
  KinematicState state;
  PullCase kind = PullCase::None;
  std::optional<int> pouch;  // hinge pouch for PullCase::Buckle
};

// Applies a cable pull of `shortening` metres. `pouches` lists the everted
// pouches; `cable_moment` is the moment the cable tension exerts about a
// section (tension times offset).
PullResult apply_pull(KinematicState state, Side side, double shortening, std::span<const PouchCondition> pouches,
                      double cable_moment);

// Pays cable back out. Unlocked hinges bent toward `side` straighten first
// (tip-most first), then any global arc on that side. Locked hinges never move.
KinematicState apply_release(KinematicState state, Side side, double length);

// Freezes the hinge of a pouch that has just jammed. Throws when the pouch
// is Transitional; a pouch without a hinge is left as is.
KinematicState lock_joint(KinematicState state, int pouch, JamState pouch_state);
KinematicState unlock_joint(KinematicState state, int pouch);

// Tip eversion: appends a straight segment along the current tip heading.
KinematicState grow(KinematicState state, double length);

}  // namespace jambeam
