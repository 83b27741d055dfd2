#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "jambeam/actions.hpp"
#include "jambeam/carriage.hpp"
#include "jambeam/geometry.hpp"
#include "jambeam/kinematics.hpp"
#include "jambeam/mechanics.hpp"
#include "jambeam/pneumatics.hpp"

namespace jambeam {

struct RobotSpec {
  double radius = 0.043;
  double length = 1.2;  // total material length
  int num_pouches = 8;
  double pressure = 6900.0;
  std::optional<double> everted_length;  // defaults to `length`
  std::optional<double> cable_offset;    // defaults to `radius`
  double cable_tension = 40.0;           // N, pulling force of a spool motor
  MechanicsParams mechanics;
  CarriageParams carriage;
  PneumaticParams pneumatics;

  double pitch() const noexcept { return length / num_pouches; }
  double initial_everted_length() const noexcept { return everted_length.value_or(length); }
  double offset() const noexcept { return cable_offset.value_or(radius); }

  // Throws Error(Schema) naming the offending field.
  void validate() const;
};

struct PouchReport {
  int index = 0;
  bool everted = true;
  std::optional<JamState> state;  // empty when not everted
  double pressure_pa = 0.0;
  Ball inner = Ball::Loose;
  Ball outer = Ball::Loose;
  bool inner_held = false;
  bool outer_held = false;
};

struct Snapshot {
  double time_s = 0.0;
  int action_index = -1;  // -1 for the initial state
  JointChain chain;
  Polyline shape;
  std::vector<PouchReport> pouches;
  double carriage_x = 0.0;
  double everted_length = 0.0;
  double beam_pressure_pa = 0.0;
  std::array<double, 2> retraction{0.0, 0.0};  // left, right spool
};

struct ActionRecord {
  double time_s = 0.0;
  int index = 0;        // top-level script index
  bool expanded = false;  // primitive produced by a macro
  Action action;
};

struct PneumaticRecord {
  double time_s = 0.0;
  int action_index = 0;
  PneumaticEvent event;
};

struct PullRecord {
  double time_s = 0.0;
  int action_index = 0;
  Side side = Side::Left;
  double length_m = 0.0;
  PullCase kind = PullCase::None;
  std::optional<int> pouch;
  double angle = 0.0;  // hinge angle after the pull (Buckle only)
};

struct RouteRecord {
  double time_s = 0.0;
  int action_index = 0;
  std::vector<int> pouches;  // pouch of each op, in execution order
  RoutePlan plan;
};

struct LockRecord {
  double time_s = 0.0;
  int action_index = 0;
  int pouch = 0;
  bool locked = true;
  double angle = 0.0;
};

using TraceRecord = std::variant<ActionRecord, PneumaticRecord, PullRecord, RouteRecord, LockRecord, Snapshot>;

struct Trace {
  std::vector<TraceRecord> records;

  std::vector<const Snapshot*> snapshots() const;
  const Snapshot& final_snapshot() const;
  double end_time() const;
};

// The whole simulated robot on a single timeline.
class World {
 public:
  explicit World(RobotSpec spec);

  const RobotSpec& spec() const noexcept { return spec_; }
  const PneumaticNetwork& network() const noexcept { return network_; }
  const KinematicState& kinematics() const noexcept { return kin_; }
  const CarriagePose& carriage() const noexcept { return carriage_; }
  double clock() const noexcept { return clock_; }

  // Executes one script action, macros expanded, and appends its records
  // followed by one snapshot. On error the world is unchanged and nothing is
  // appended; the Error's path is relative to the action ("pouch", "x_m"...).
  void apply(const Action& action, int index, std::vector<TraceRecord>& out);

  // Deterministic flat expansion of a macro from the current state
  // (identity for primitives). SetPouches also returns its route.
  ActionScript expand(const Action& action, RouteRecord* route = nullptr) const;

  Snapshot snapshot(int action_index) const;

  // Pouch conditions the cable sees at current pressure.
  std::vector<PouchCondition> pouch_conditions() const;
  double cable_moment() const noexcept { return spec_.cable_tension * spec_.offset(); }

 private:
  void step(const Action& primitive, int index, std::vector<TraceRecord>& out);
  void settle_for(double dt, int index, std::vector<TraceRecord>& out);
  void update_locks(int index, std::vector<TraceRecord>& out);
  double macro_dwell() const;

  RobotSpec spec_;
  PneumaticNetwork network_;
  KinematicState kin_;
  CarriagePose carriage_;
  double clock_ = 0.0;
  std::vector<std::optional<JamState>> last_states_;
};

// Executes a whole script. Errors carry "script[i]" in their path.
Trace run(const RobotSpec& spec, const ActionScript& script);

struct DeflectionRow {
  double pressure_pa = 0.0;
  bool jammed = false;
  std::optional<double> tip_deflection;  // empty when buckled
  bool buckled = false;
  std::optional<double> buckle_x;
};

// Cantilever sweep: the whole body (length, num_pouches) clamped at the base
// with load_n hanging at the tip, every pouch jammed or every pouch compliant.
std::vector<DeflectionRow> deflection_experiment(const RobotSpec& spec, std::span<const double> pressures,
                                                 double load_n, bool jammed);

// "pressure_pa,state,tip_deflection_m,buckled,buckle_x_m" plus one row per pressure.
std::string deflection_csv(std::span<const DeflectionRow> rows);

// Inclusive arithmetic sweep first, first+step, ... <= last.
std::vector<double> pressure_sweep(double first, double last, double step);

inline constexpr double kPascalPerPsi = 6894.757293168;
inline constexpr double kGravity = 9.81;

}  // namespace jambeam
