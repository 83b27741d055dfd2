#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jambeam/actions.hpp"
#include "jambeam/common.hpp"

namespace jambeam {

// Pressure network of the jamming pouches.
//
// Every pouch owns two bi-state valves: the inner valve joins the beam
// interior to the pouch and the outer valve joins the pouch to atmosphere.
// A valve's ball is pushed into an O-ring by any flow (sealing the valve)
// and is pulled off it by the carriage's electromagnet. Pressures are gauge
// pascals; the beam node is a boundary condition held by the regulator and
// atmosphere is identically zero.

enum class Ball { Loose, SealedTowardA, SealedTowardB };

enum class NodeKind { Beam, Pouch, Atmosphere };

struct NodeId {
  NodeKind kind = NodeKind::Beam;
  int pouch = -1;  // only meaningful for NodeKind::Pouch

  friend bool operator==(const NodeId&, const NodeId&) = default;
};

struct ValveId {
  int pouch = 0;
  ValveRole role = ValveRole::Inner;

  friend bool operator==(const ValveId&, const ValveId&) = default;
};

struct Valve {
  ValveId id;
  NodeId port_a;  // higher-pressure side in normal operation
  NodeId port_b;
  Ball ball = Ball::Loose;
  bool magnet_held = false;
  double position_m = 0.0;

  bool sealed() const noexcept { return ball != Ball::Loose; }
};

struct Pouch {
  int index = 0;
  Valve inner;
  Valve outer;
  double pressure_pa = 0.0;
  double x_start = 0.0;
  double x_end = 0.0;
  bool everted = true;

  const Valve& valve(ValveRole role) const noexcept { return role == ValveRole::Inner ? inner : outer; }
  Valve& valve(ValveRole role) noexcept { return role == ValveRole::Inner ? inner : outer; }
};

enum class SettleMode { Instantaneous, FirstOrder };

struct PneumaticParams {
  double seal_threshold_pa = 50.0;
  double vent_time_constant_s = 1.0;
  double jam_fraction = 0.1;
  SettleMode mode = SettleMode::Instantaneous;
};

struct PneumaticNetwork {
  double beam_pressure_pa = 0.0;
  PneumaticParams params;
  std::vector<Pouch> pouches;

  // Pouches tile [0, length] with equal pitch; both valves of a pouch sit at
  // its midpoint. Every pouch starts vented (jammed) with its inner valve
  // sealed, and pouch i is everted iff (i + 1) * pitch <= everted_length.
  static PneumaticNetwork make(int num_pouches, double length_m, double beam_pressure_pa,
                               const PneumaticParams& params, double everted_length_m);

  double pitch() const noexcept;
  double node_pressure(NodeId node) const;
  const Valve& valve(ValveId id) const;
  std::optional<ValveId> held_valve() const noexcept;
  bool has_pouch(int index) const noexcept { return index >= 0 && index < static_cast<int>(pouches.size()); }

  // Marks pouches everted for the given everted body length.
  void update_everted(double everted_length_m);
};

enum class PneumaticEventKind { ValveSealed, PouchEqualized, PouchVented };

std::string_view to_string(PneumaticEventKind kind) noexcept;

struct PneumaticEvent {
  PneumaticEventKind kind = PneumaticEventKind::ValveSealed;
  int pouch = 0;
  ValveRole role = ValveRole::Inner;
  double pressure_pa = 0.0;  // pouch pressure after the event

  friend bool operator==(const PneumaticEvent&, const PneumaticEvent&) = default;
};

// "time_s,event_kind,pouch_index,valve_role,pressure_pa"
std::string to_record(const PneumaticEvent& event, double time_s);
inline constexpr const char* kPneumaticRecordHeader = "time_s,event_kind,pouch_index,valve_role,pressure_pa";

// Engages or releases the electromagnet on a valve. Holding unseats a sealed
// ball immediately; releasing leaves the ball where it is until the next
// settle. Only one valve may be held at a time.
PneumaticNetwork set_magnet(PneumaticNetwork network, ValveId valve, bool held);

struct SettleResult {
  PneumaticNetwork network;
  std::vector<PneumaticEvent> events;
};

// Resolves flow for dt seconds. Magnet-held paths move the pouch toward the
// held valve's source (instantly, or with the vent time constant in
// FirstOrder mode); unheld valves seal as soon as a gradient appears and
// fall loose when it vanishes. dt is ignored in Instantaneous mode and must
// be positive in FirstOrder mode.
SettleResult settle(PneumaticNetwork network, double dt_s = 0.0);

// Unheld-valve pass only: seals loose valves under gradient and loosens
// sealed valves without one. No pressure changes, no elapsed time.
SettleResult seal_unheld(PneumaticNetwork network);

JamState pouch_state(const Pouch& pouch, double beam_pressure_pa, double jam_fraction = 0.1);
JamState pouch_state(const PneumaticNetwork& network, int pouch);

// Regulator change of the beam node. Quasi-static: every pouch keeps its
// pressure as a fraction of beam pressure, so jam states are preserved.
PneumaticNetwork set_beam_pressure(PneumaticNetwork network, double pressure_pa);

// Dwell needed after opening a path before the pouch is within the seal
// threshold of its source (zero in Instantaneous mode).
double settle_time(const PneumaticNetwork& network);

// Move to the valve, hold the outer (Jam) or inner (Unjam) valve, dwell,
// release. Four primitive actions.
ActionScript canonical_sequence(const PneumaticNetwork& network, int pouch, JamTarget target,
                                double dwell_s);

}  // namespace jambeam
