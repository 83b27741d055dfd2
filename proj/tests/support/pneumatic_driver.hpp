#pragma once

#include <cmath>
#include <variant>

#include "jambeam/pneumatics.hpp"

namespace jambeam::testing {

// Runs the pneumatic side of a primitive script with no carriage or
// kinematics, the same way the engine steps it.
inline PneumaticNetwork settle_for(PneumaticNetwork net, double dt) {
  if (net.params.mode == SettleMode::FirstOrder && !(dt > 0.0)) return seal_unheld(std::move(net)).network;
  return settle(std::move(net), dt).network;
}

inline PneumaticNetwork drive(PneumaticNetwork net, const ActionScript& script) {
  for (const auto& a : script) {
    if (const auto* h = std::get_if<HoldMagnet>(&a)) {
      net = settle_for(set_magnet(std::move(net), {h->pouch, h->valve}, true), 0.0);
    } else if (std::holds_alternative<ReleaseMagnet>(a)) {
      if (const auto held = net.held_valve()) net = set_magnet(std::move(net), *held, false);
      net = settle_for(std::move(net), 0.0);
    } else if (const auto* d = std::get_if<Dwell>(&a)) {
      net = settle_for(std::move(net), d->seconds);
    }
  }
  return net;
}

inline double valve_gradient(const PneumaticNetwork& net, const Valve& v) {
  return net.node_pressure(v.port_a) - net.node_pressure(v.port_b);
}

// No unheld valve is Loose while carrying more than the seal threshold.
inline bool seal_safe(const PneumaticNetwork& net) {
  for (const auto& p : net.pouches) {
    for (const Valve* v : {&p.inner, &p.outer}) {
      if (!v->magnet_held && !v->sealed() && std::abs(valve_gradient(net, *v)) > net.params.seal_threshold_pa) {
        return false;
      }
    }
  }
  return true;
}

inline bool same_state(const PneumaticNetwork& a, const PneumaticNetwork& b) {
  if (a.pouches.size() != b.pouches.size()) return false;
  for (std::size_t i = 0; i < a.pouches.size(); ++i) {
    const auto& p = a.pouches[i];
    const auto& q = b.pouches[i];
    if (p.pressure_pa != q.pressure_pa || p.inner.ball != q.inner.ball || p.outer.ball != q.outer.ball ||
        p.inner.magnet_held != q.inner.magnet_held || p.outer.magnet_held != q.outer.magnet_held) {
      return false;
    }
  }
  return true;
}

}  // namespace jambeam::testing
