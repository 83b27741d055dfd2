#include "jambeam/pneumatics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "jambeam/error.hpp"

namespace jambeam {

namespace {

Valve make_valve(int pouch, ValveRole role, double position) {
  Valve v;
  v.id = {pouch, role};
  if (role == ValveRole::Inner) {
    v.port_a = {NodeKind::Beam, -1};
    v.port_b = {NodeKind::Pouch, pouch};
  } else {
    v.port_a = {NodeKind::Pouch, pouch};
    v.port_b = {NodeKind::Atmosphere, -1};
  }
  v.position_m = position;
  return v;
}

Pouch& pouch_ref(PneumaticNetwork& network, int index) {
  if (!network.has_pouch(index)) {
    throw Error(ErrorKind::UnknownId, "no pouch with index " + std::to_string(index));
  }
  return network.pouches[static_cast<std::size_t>(index)];
}

double source_pressure(const PneumaticNetwork& network, ValveRole held) {
  return held == ValveRole::Inner ? network.beam_pressure_pa : 0.0;
}

// Flow from A to B pushes the ball into the B-side O-ring.
Ball seal_direction(double dp) { return dp > 0.0 ? Ball::SealedTowardB : Ball::SealedTowardA; }

void resolve_unheld(const PneumaticNetwork& network, Pouch& pouch, Valve& valve,
                    std::vector<PneumaticEvent>& events) {
  if (valve.magnet_held) return;
  const double dp = network.node_pressure(valve.port_a) - network.node_pressure(valve.port_b);
  if (std::abs(dp) > network.params.seal_threshold_pa) {
    const Ball want = seal_direction(dp);
    if (valve.ball != want) {
      valve.ball = want;
      events.push_back({PneumaticEventKind::ValveSealed, pouch.index, valve.id.role, pouch.pressure_pa});
    }
  } else {
    valve.ball = Ball::Loose;
  }
}

SettleResult settle_impl(PneumaticNetwork network, double dt_s, bool move_pressure) {
  std::vector<PneumaticEvent> events;
  const double threshold = network.params.seal_threshold_pa;
  for (auto& pouch : network.pouches) {
    // Pouches still inverted inside the body cannot change pressure.
    if (move_pressure && pouch.everted) {
      for (ValveRole role : {ValveRole::Inner, ValveRole::Outer}) {
        if (!pouch.valve(role).magnet_held) continue;
        const double src = source_pressure(network, role);
        const double before = pouch.pressure_pa;
        double after = src;
        if (network.params.mode == SettleMode::FirstOrder) {
          after = src + (before - src) * std::exp(-dt_s / network.params.vent_time_constant_s);
        }
        after = std::clamp(after, 0.0, network.beam_pressure_pa);
        pouch.pressure_pa = after;
        if (std::abs(after - src) <= threshold && std::abs(before - src) > threshold) {
          events.push_back({role == ValveRole::Inner ? PneumaticEventKind::PouchEqualized
                                                     : PneumaticEventKind::PouchVented,
                            pouch.index, role, after});
        }
      }
    }
    // Inner first: for a vent, the inflow attempt across the inner valve is
    // what seals it.
    resolve_unheld(network, pouch, pouch.inner, events);
    resolve_unheld(network, pouch, pouch.outer, events);
  }
  return {std::move(network), std::move(events)};
}

}  // namespace

std::string_view to_string(PneumaticEventKind kind) noexcept {
  switch (kind) {
    case PneumaticEventKind::ValveSealed: return "ValveSealed";
    case PneumaticEventKind::PouchEqualized: return "PouchEqualized";
    case PneumaticEventKind::PouchVented: return "PouchVented";
  }
  return "Unknown";
}

std::string to_record(const PneumaticEvent& event, double time_s) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%.6f,%s,%d,%s,%.3f", time_s, std::string(to_string(event.kind)).c_str(),
                event.pouch, std::string(to_string(event.role)).c_str(), event.pressure_pa);
  return buf;
}

PneumaticNetwork PneumaticNetwork::make(int num_pouches, double length_m, double beam_pressure_pa,
                                        const PneumaticParams& params, double everted_length_m) {
  if (num_pouches <= 0) throw Error(ErrorKind::InvalidArgument, "num_pouches must be positive");
  if (!(length_m > 0.0)) throw Error(ErrorKind::InvalidArgument, "length must be positive");
  if (beam_pressure_pa < 0.0) throw Error(ErrorKind::InvalidArgument, "beam pressure must be non-negative");
  if (!(params.vent_time_constant_s > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "vent_time_constant_s must be positive");
  }
  if (!(params.jam_fraction > 0.0 && params.jam_fraction < 0.5)) {
    throw Error(ErrorKind::InvalidArgument, "jam_fraction must be in (0, 0.5)");
  }
  if (params.seal_threshold_pa < 0.0) throw Error(ErrorKind::InvalidArgument, "seal_threshold_pa must be >= 0");

  PneumaticNetwork net;
  net.beam_pressure_pa = beam_pressure_pa;
  net.params = params;
  const double pitch = length_m / num_pouches;
  for (int i = 0; i < num_pouches; ++i) {
    Pouch p;
    p.index = i;
    p.x_start = i * pitch;
    p.x_end = (i + 1) * pitch;
    const double mid = 0.5 * (p.x_start + p.x_end);
    p.inner = make_valve(i, ValveRole::Inner, mid);
    p.outer = make_valve(i, ValveRole::Outer, mid);
    p.pressure_pa = 0.0;
    net.pouches.push_back(p);
  }
  net.update_everted(everted_length_m);
  return seal_unheld(std::move(net)).network;
}

double PneumaticNetwork::pitch() const noexcept {
  return pouches.empty() ? 0.0 : pouches.front().x_end - pouches.front().x_start;
}

double PneumaticNetwork::node_pressure(NodeId node) const {
  switch (node.kind) {
    case NodeKind::Beam: return beam_pressure_pa;
    case NodeKind::Atmosphere: return 0.0;
    case NodeKind::Pouch:
      if (!has_pouch(node.pouch)) throw Error(ErrorKind::UnknownId, "no pouch node " + std::to_string(node.pouch));
      return pouches[static_cast<std::size_t>(node.pouch)].pressure_pa;
  }
  return 0.0;
}

const Valve& PneumaticNetwork::valve(ValveId id) const {
  if (!has_pouch(id.pouch)) throw Error(ErrorKind::UnknownId, "no valve on pouch " + std::to_string(id.pouch));
  return pouches[static_cast<std::size_t>(id.pouch)].valve(id.role);
}

std::optional<ValveId> PneumaticNetwork::held_valve() const noexcept {
  for (const auto& p : pouches) {
    if (p.inner.magnet_held) return p.inner.id;
    if (p.outer.magnet_held) return p.outer.id;
  }
  return std::nullopt;
}

void PneumaticNetwork::update_everted(double everted_length_m) {
  for (auto& p : pouches) p.everted = p.x_end <= everted_length_m + kLengthEps;
}

PneumaticNetwork set_magnet(PneumaticNetwork network, ValveId id, bool held) {
  Valve& valve = pouch_ref(network, id.pouch).valve(id.role);
  if (held) {
    const auto current = network.held_valve();
    if (current && !(*current == id)) {
      throw Error(ErrorKind::Precondition, "electromagnet already holds valve " + std::string(to_string(current->role)) +
                                               " of pouch " + std::to_string(current->pouch));
    }
    valve.magnet_held = true;
    valve.ball = Ball::Loose;
  } else {
    valve.magnet_held = false;
  }
  return network;
}

SettleResult settle(PneumaticNetwork network, double dt_s) {
  if (network.params.mode == SettleMode::FirstOrder && !(dt_s > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "settle in FirstOrder mode needs dt > 0");
  }
  return settle_impl(std::move(network), dt_s, true);
}

SettleResult seal_unheld(PneumaticNetwork network) { return settle_impl(std::move(network), 0.0, false); }

JamState pouch_state(const Pouch& pouch, double beam_pressure_pa, double jam_fraction) {
  if (!pouch.everted) {
    throw Error(ErrorKind::Precondition, "pouch " + std::to_string(pouch.index) + " is not everted");
  }
  if (pouch.pressure_pa <= jam_fraction * beam_pressure_pa) return JamState::Jammed;
  if (pouch.pressure_pa >= (1.0 - jam_fraction) * beam_pressure_pa) return JamState::Compliant;
  return JamState::Transitional;
}

JamState pouch_state(const PneumaticNetwork& network, int pouch) {
  if (!network.has_pouch(pouch)) throw Error(ErrorKind::UnknownId, "no pouch with index " + std::to_string(pouch));
  return pouch_state(network.pouches[static_cast<std::size_t>(pouch)], network.beam_pressure_pa,
                     network.params.jam_fraction);
}

PneumaticNetwork set_beam_pressure(PneumaticNetwork network, double pressure_pa) {
  if (pressure_pa < 0.0) throw Error(ErrorKind::InvalidArgument, "beam pressure must be non-negative");
  const double old = network.beam_pressure_pa;
  for (auto& p : network.pouches) {
    p.pressure_pa = old > 0.0 ? p.pressure_pa / old * pressure_pa : 0.0;
  }
  network.beam_pressure_pa = pressure_pa;
  return network;
}

double settle_time(const PneumaticNetwork& network) {
  if (network.params.mode == SettleMode::Instantaneous) return 0.0;
  const double threshold = std::max(network.params.seal_threshold_pa, 1e-6);
  if (network.beam_pressure_pa <= threshold) return 0.0;
  return network.params.vent_time_constant_s * std::log(network.beam_pressure_pa / threshold);
}

ActionScript canonical_sequence(const PneumaticNetwork& network, int pouch, JamTarget target, double dwell_s) {
  if (!network.has_pouch(pouch)) throw Error(ErrorKind::UnknownId, "no pouch with index " + std::to_string(pouch));
  const Pouch& p = network.pouches[static_cast<std::size_t>(pouch)];
  if (!p.everted) throw Error(ErrorKind::Precondition, "pouch " + std::to_string(pouch) + " is not everted");
  const ValveRole role = target == JamTarget::Jam ? ValveRole::Outer : ValveRole::Inner;
  return {
      MoveCarriage{p.valve(role).position_m},
      HoldMagnet{pouch, role},
      Dwell{dwell_s},
      ReleaseMagnet{},
  };
}

}  // namespace jambeam
