#include "jambeam/engine.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "jambeam/error.hpp"

namespace jambeam {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& path, const std::string& message) {
  if (!ok) throw Error(ErrorKind::Schema, message, path);
}

void check_pouch(const PneumaticNetwork& network, int pouch, const char* path = "pouch") {
  if (!network.has_pouch(pouch)) {
    throw Error(ErrorKind::UnknownId,
                "pouch " + std::to_string(pouch) + " out of range [0, " + std::to_string(network.pouches.size()) + ")",
                path);
  }
}

// Re-throws a module error with a field path attached.
template <class F>
auto at_path(const char* path, F&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (!e.path().empty()) throw;
    throw e.with_path(path);
  }
}

}  // namespace

void RobotSpec::validate() const {
  require(radius > 0.0, "spec.radius_m", "radius must be positive");
  require(length > 0.0, "spec.length_m", "length must be positive");
  require(num_pouches > 0, "spec.num_pouches", "num_pouches must be positive");
  require(pressure >= 0.0, "spec.pressure_pa", "pressure must be non-negative");
  if (everted_length) {
    require(*everted_length >= 0.0 && *everted_length <= length + kLengthEps, "spec.everted_length_m",
            "everted length must lie within [0, length_m]");
  }
  if (cable_offset) require(*cable_offset > 0.0, "spec.cable_offset_m", "cable offset must be positive");
  require(cable_tension >= 0.0, "spec.mechanics.cable_tension_n", "cable tension must be non-negative");
  require(mechanics.critical_coefficient > 0.0 && mechanics.critical_coefficient <= 1.0,
          "spec.mechanics.critical_coefficient", "critical coefficient must lie in (0, 1]");
  require(mechanics.kappa_jam >= 1.0, "spec.mechanics.kappa_jam", "kappa_jam must be >= 1");
  require(mechanics.kappa_ei >= 1.0, "spec.mechanics.kappa_ei", "kappa_ei must be >= 1");
  require(mechanics.membrane_stiffness > 0.0, "spec.mechanics.membrane_stiffness_n_per_m",
          "membrane stiffness must be positive");
  require(mechanics.wrinkle_floor > 0.0 && mechanics.wrinkle_floor < 1.0, "spec.mechanics.wrinkle_floor",
          "wrinkle floor must lie in (0, 1)");
  require(mechanics.weight_per_length >= 0.0, "spec.mechanics.weight_per_length_n_per_m",
          "weight per length must be non-negative");
  require(carriage.speed > 0.0, "spec.carriage.speed_m_per_s", "carriage speed must be positive");
  require(carriage.dwell >= 0.0, "spec.carriage.dwell_s", "dwell must be non-negative");
  require(carriage.magnet_range >= 0.0, "spec.carriage.magnet_range_m", "magnet range must be non-negative");
  require(pneumatics.vent_time_constant_s > 0.0, "spec.pneumatics.vent_time_constant_s",
          "vent time constant must be positive");
  require(pneumatics.seal_threshold_pa >= 0.0, "spec.pneumatics.seal_threshold_pa",
          "seal threshold must be non-negative");
  require(pneumatics.jam_fraction > 0.0 && pneumatics.jam_fraction < 0.5, "spec.pneumatics.jam_fraction",
          "jam fraction must lie in (0, 0.5)");
}

std::vector<const Snapshot*> Trace::snapshots() const {
  std::vector<const Snapshot*> out;
  for (const auto& r : records) {
    if (const auto* s = std::get_if<Snapshot>(&r)) out.push_back(s);
  }
  return out;
}

const Snapshot& Trace::final_snapshot() const {
  for (auto it = records.rbegin(); it != records.rend(); ++it) {
    if (const auto* s = std::get_if<Snapshot>(&*it)) return *s;
  }
  throw Error(ErrorKind::Precondition, "trace has no snapshot");
}

double Trace::end_time() const { return records.empty() ? 0.0 : final_snapshot().time_s; }

World::World(RobotSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  const double everted = spec_.initial_everted_length();
  network_ = PneumaticNetwork::make(spec_.num_pouches, spec_.length, spec_.pressure, spec_.pneumatics, everted);
  kin_ = KinematicState::make(Pose2{}, everted, spec_.length, spec_.pitch(), spec_.offset());
  carriage_ = {0.0, spec_.carriage.speed, spec_.carriage.dwell};
  last_states_.resize(network_.pouches.size());
  for (std::size_t i = 0; i < network_.pouches.size(); ++i) {
    if (network_.pouches[i].everted) last_states_[i] = pouch_state(network_, static_cast<int>(i));
  }
}

double World::macro_dwell() const { return spec_.carriage.dwell + settle_time(network_); }

ActionScript World::expand(const Action& action, RouteRecord* route) const {
  auto single = [&](int pouch, JamTarget target) {
    check_pouch(network_, pouch);
    return at_path("pouch", [&] { return canonical_sequence(network_, pouch, target, macro_dwell()); });
  };
  if (const auto* a = std::get_if<JamPouch>(&action)) return single(a->pouch, JamTarget::Jam);
  if (const auto* a = std::get_if<UnjamPouch>(&action)) return single(a->pouch, JamTarget::Unjam);
  if (const auto* a = std::get_if<SetPouches>(&action)) {
    RouteTask task;
    task.everted_length = kin_.growth.everted_length;
    std::vector<std::pair<int, JamTarget>> targets;
    for (std::size_t k = 0; k < a->jam.size(); ++k) {
      check_pouch(network_, a->jam[k], ("jam[" + std::to_string(k) + "]").c_str());
      targets.emplace_back(a->jam[k], JamTarget::Jam);
    }
    for (std::size_t k = 0; k < a->unjam.size(); ++k) {
      check_pouch(network_, a->unjam[k], ("unjam[" + std::to_string(k) + "]").c_str());
      targets.emplace_back(a->unjam[k], JamTarget::Unjam);
    }
    for (const auto& [pouch, target] : targets) {
      const auto& p = network_.pouches[static_cast<std::size_t>(pouch)];
      if (!p.everted) {
        throw Error(ErrorKind::Precondition, "pouch " + std::to_string(pouch) + " is not everted",
                    target == JamTarget::Jam ? "jam" : "unjam");
      }
      const ValveRole role = target == JamTarget::Jam ? ValveRole::Outer : ValveRole::Inner;
      task.ops.push_back({p.valve(role).position_m, RouteAction::Hold});
    }
    const RoutePlan plan = plan_route(task, carriage_.x, spec_.carriage);
    ActionScript out;
    if (route) {
      route->plan = plan;
      route->pouches.clear();
    }
    for (int op : plan.order) {
      const auto& [pouch, target] = targets[static_cast<std::size_t>(op)];
      if (route) route->pouches.push_back(pouch);
      const auto seq = canonical_sequence(network_, pouch, target, macro_dwell());
      out.insert(out.end(), seq.begin(), seq.end());
    }
    return out;
  }
  return {action};
}

void World::apply(const Action& action, int index, std::vector<TraceRecord>& out) {
  World next = *this;
  std::vector<TraceRecord> records;
  records.push_back(ActionRecord{clock_, index, false, action});
  RouteRecord route;
  const ActionScript primitives = expand(action, &route);
  if (std::holds_alternative<SetPouches>(action)) {
    route.time_s = clock_;
    route.action_index = index;
    records.push_back(route);
  }
  for (const auto& primitive : primitives) {
    if (is_macro(action)) records.push_back(ActionRecord{next.clock_, index, true, primitive});
    next.step(primitive, index, records);
  }
  records.push_back(next.snapshot(index));
  *this = std::move(next);
  out.insert(out.end(), std::make_move_iterator(records.begin()), std::make_move_iterator(records.end()));
}

void World::settle_for(double dt, int index, std::vector<TraceRecord>& out) {
  SettleResult result = (network_.params.mode == SettleMode::FirstOrder && !(dt > 0.0))
                            ? seal_unheld(std::move(network_))
                            : settle(std::move(network_), dt);
  network_ = std::move(result.network);
  for (const auto& e : result.events) out.push_back(PneumaticRecord{clock_, index, e});
  update_locks(index, out);
}

void World::update_locks(int index, std::vector<TraceRecord>& out) {
  for (std::size_t i = 0; i < network_.pouches.size(); ++i) {
    const int pouch = static_cast<int>(i);
    if (!network_.pouches[i].everted) {
      last_states_[i].reset();
      continue;
    }
    const JamState now = pouch_state(network_, pouch);
    const auto before = last_states_[i];
    const bool has_joint = kin_.chain.joints.count(pouch) > 0;
    if (now == JamState::Jammed && before != JamState::Jammed) {
      kin_ = lock_joint(std::move(kin_), pouch, now);
      if (has_joint) out.push_back(LockRecord{clock_, index, pouch, true, kin_.chain.joint_angle(pouch)});
    } else if (now != JamState::Jammed && before == JamState::Jammed) {
      kin_ = unlock_joint(std::move(kin_), pouch);
      if (has_joint) out.push_back(LockRecord{clock_, index, pouch, false, kin_.chain.joint_angle(pouch)});
    }
    last_states_[i] = now;
  }
}

std::vector<PouchCondition> World::pouch_conditions() const {
  std::vector<PouchCondition> out;
  const MomentModel model{network_.beam_pressure_pa, spec_.radius, spec_.mechanics.critical_coefficient,
                          spec_.mechanics.wrinkle_floor};
  for (const auto& p : network_.pouches) {
    if (!p.everted) continue;
    BeamSection section;
    section.x0 = p.x_start;
    section.x1 = p.x_end;
    section.jammed = pouch_state(network_, p.index) == JamState::Jammed;
    section.radius = spec_.radius;
    section.membrane_stiffness = spec_.mechanics.membrane_stiffness;
    section.kappa_ei = spec_.mechanics.kappa_ei;
    section.kappa_jam = spec_.mechanics.kappa_jam;
    section.pouch_index = p.index;
    out.push_back({p.index, section.jammed, critical_moment(model, section)});
  }
  return out;
}

void World::step(const Action& primitive, int index, std::vector<TraceRecord>& out) {
  std::visit(
      overloaded{
          [&](const MoveCarriage& a) {
            if (network_.held_valve()) {
              throw Error(ErrorKind::Precondition, "release the electromagnet before moving the carriage", "x_m");
            }
            const auto moved =
                at_path("x_m", [&] { return advance(carriage_, a.x_m, clock_, kin_.growth.everted_length); });
            carriage_ = moved.pose;
            clock_ = moved.clock;
            settle_for(0.0, index, out);
          },
          [&](const HoldMagnet& a) {
            check_pouch(network_, a.pouch);
            const auto& pouch = network_.pouches[static_cast<std::size_t>(a.pouch)];
            if (!pouch.everted) {
              throw Error(ErrorKind::Precondition, "pouch " + std::to_string(a.pouch) + " is not everted", "pouch");
            }
            const double gap = std::abs(pouch.valve(a.valve).position_m - carriage_.x);
            if (gap > spec_.carriage.magnet_range + kLengthEps) {
              throw Error(ErrorKind::Precondition,
                          "carriage is " + std::to_string(gap) + " m from the " +
                              std::string(to_string(a.valve)) + " valve of pouch " + std::to_string(a.pouch),
                          "valve");
            }
            network_ = at_path("valve", [&] { return set_magnet(network_, {a.pouch, a.valve}, true); });
            settle_for(0.0, index, out);
          },
          [&](const ReleaseMagnet&) {
            if (const auto held = network_.held_valve()) network_ = set_magnet(network_, *held, false);
            settle_for(0.0, index, out);
          },
          [&](const Dwell& a) {
            if (!(a.seconds >= 0.0)) throw Error(ErrorKind::InvalidArgument, "dwell must be non-negative", "seconds");
            clock_ += a.seconds;
            settle_for(a.seconds, index, out);
          },
          [&](const PullCable& a) {
            const auto conditions = pouch_conditions();
            auto result = at_path("length_m", [&] {
              return apply_pull(kin_, a.side, a.length_m, conditions, cable_moment());
            });
            kin_ = std::move(result.state);
            const double angle = result.pouch ? kin_.chain.joint_angle(*result.pouch) : 0.0;
            out.push_back(PullRecord{clock_, index, a.side, a.length_m, result.kind, result.pouch, angle});
          },
          [&](const ReleaseCable& a) {
            kin_ = at_path("length_m", [&] { return apply_release(kin_, a.side, a.length_m); });
          },
          [&](const Grow& a) {
            kin_ = at_path("length_m", [&] { return grow(kin_, a.length_m); });
            network_.update_everted(kin_.growth.everted_length);
            settle_for(0.0, index, out);
          },
          [&](const SetPressure& a) {
            network_ = at_path("pressure_pa", [&] { return set_beam_pressure(network_, a.pressure_pa); });
            settle_for(0.0, index, out);
          },
          [&](const auto&) { throw Error(ErrorKind::InvalidArgument, "macro reached the primitive stepper"); },
      },
      primitive);
}

Snapshot World::snapshot(int action_index) const {
  Snapshot s;
  s.time_s = clock_;
  s.action_index = action_index;
  s.chain = kin_.chain;
  s.shape = shape_of(kin_.chain);
  for (const auto& p : network_.pouches) {
    PouchReport r;
    r.index = p.index;
    r.everted = p.everted;
    if (p.everted) r.state = pouch_state(network_, p.index);
    r.pressure_pa = p.pressure_pa;
    r.inner = p.inner.ball;
    r.outer = p.outer.ball;
    r.inner_held = p.inner.magnet_held;
    r.outer_held = p.outer.magnet_held;
    s.pouches.push_back(r);
  }
  s.carriage_x = carriage_.x;
  s.everted_length = kin_.growth.everted_length;
  s.beam_pressure_pa = network_.beam_pressure_pa;
  s.retraction = {kin_.cable(Side::Left).spool_retraction, kin_.cable(Side::Right).spool_retraction};
  return s;
}

Trace run(const RobotSpec& spec, const ActionScript& script) {
  World world(spec);
  Trace trace;
  trace.records.push_back(world.snapshot(-1));
  for (std::size_t i = 0; i < script.size(); ++i) {
    try {
      world.apply(script[i], static_cast<int>(i), trace.records);
    } catch (const Error& e) {
      throw e.with_path("script[" + std::to_string(i) + "]");
    }
  }
  return trace;
}

std::vector<DeflectionRow> deflection_experiment(const RobotSpec& spec, std::span<const double> pressures,
                                                 double load_n, bool jammed) {
  spec.validate();
  if (load_n < 0.0) throw Error(ErrorKind::InvalidArgument, "load must be non-negative");
  for (std::size_t i = 0; i < pressures.size(); ++i) {
    if (!(pressures[i] > 0.0)) throw Error(ErrorKind::InvalidArgument, "pressures must be positive");
    if (i > 0 && !(pressures[i] > pressures[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "pressures must be strictly ascending");
    }
  }
  const auto sections = uniform_sections(spec.length, spec.num_pouches, jammed, spec.mechanics, spec.radius);
  const LoadCase load{load_n, spec.length, spec.mechanics.include_self_weight, spec.mechanics.weight_per_length};
  std::vector<DeflectionRow> rows;
  for (double p : pressures) {
    const MomentModel model{p, spec.radius, spec.mechanics.critical_coefficient, spec.mechanics.wrinkle_floor};
    DeflectionRow row;
    row.pressure_pa = p;
    row.jammed = jammed;
    if (const auto buckle = buckling_check(sections, model, load)) {
      row.buckled = true;
      row.buckle_x = buckle->x;
    } else {
      row.tip_deflection = tip_deflection(sections, model, load);
    }
    rows.push_back(row);
  }
  return rows;
}

std::string deflection_csv(std::span<const DeflectionRow> rows) {
  std::string out = "pressure_pa,state,tip_deflection_m,buckled,buckle_x_m\n";
  char buf[200];
  for (const auto& r : rows) {
    std::string defl;
    if (r.tip_deflection) {
      std::snprintf(buf, sizeof buf, "%.9g", *r.tip_deflection);
      defl = buf;
    }
    std::string bx;
    if (r.buckle_x) {
      std::snprintf(buf, sizeof buf, "%.9g", *r.buckle_x);
      bx = buf;
    }
    std::snprintf(buf, sizeof buf, "%.6f,%s,%s,%s,%s\n", r.pressure_pa, r.jammed ? "jammed" : "unjammed",
                  defl.c_str(), r.buckled ? "true" : "false", bx.c_str());
    out += buf;
  }
  return out;
}

std::vector<double> pressure_sweep(double first, double last, double step) {
  if (!(step > 0.0)) throw Error(ErrorKind::InvalidArgument, "sweep step must be positive");
  if (last < first) throw Error(ErrorKind::InvalidArgument, "sweep end must not precede its start");
  std::vector<double> out;
  // Index-based so that 0.5:2.0:0.25 yields exactly seven points.
  const auto count = static_cast<long>(std::floor((last - first) / step + 1e-9)) + 1;
  for (long k = 0; k < count; ++k) out.push_back(first + static_cast<double>(k) * step);
  return out;
}

}  // namespace jambeam
