#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../support/gen.hpp"
#include "jambeam/engine.hpp"
#include "jambeam/error.hpp"
#include "jambeam/scenario.hpp"

using namespace jambeam;
using jambeam::testing::Gen;

namespace {

constexpr double kPi = std::numbers::pi;

const double kRight = 2.0 * 0.043 * std::sin(kPi / 4.0);

ActionScript three_buckles() {
  return {UnjamPouch{2}, PullCable{Side::Left, 0.043},  JamPouch{2}, UnjamPouch{4}, PullCable{Side::Right, kRight},
          JamPouch{4},   UnjamPouch{6}, PullCable{Side::Left, 0.043}, JamPouch{6}};
}

Error error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected an error");
  return Error(ErrorKind::InvalidArgument, "unreachable");
}

std::vector<double> psi_sweep() { return pressure_sweep(0.5 * kPascalPerPsi, 2.0 * kPascalPerPsi, 0.25 * kPascalPerPsi); }

RobotSpec bench() {
  RobotSpec spec;
  spec.length = 0.6;
  spec.num_pouches = 4;
  return spec;
}

}  // namespace

TEST_SUITE("engine") {
  TEST_CASE("empty script: initial snapshot only") {
    const Trace t = run(RobotSpec{}, {});
    REQUIRE(t.records.size() == 1);
    const auto& s = std::get<Snapshot>(t.records[0]);
    CHECK(s.action_index == -1);
    CHECK(s.time_s == 0.0);
    CHECK(s.pouches.size() == 8);
    for (const auto& p : s.pouches) CHECK(p.state == JamState::Jammed);
  }

  TEST_CASE("unjam, pull, jam: a locked right angle") {
    const Trace t = run(RobotSpec{}, {UnjamPouch{3}, PullCable{Side::Left, 0.0608}, JamPouch{3}});
    const auto& s = t.final_snapshot();
    REQUIRE(s.chain.joints.count(3) == 1);
    CHECK(s.chain.joints.at(3).angle == doctest::Approx(kPi / 2.0).epsilon(1e-3));
    CHECK(s.chain.joints.at(3).locked);
    CHECK(s.pouches[3].state == JamState::Jammed);
    CHECK(t.snapshots().size() == 4);
  }

  TEST_CASE("three buckles keep earlier angles") {
    const Trace t = run(RobotSpec{}, three_buckles());
    const auto& last = t.final_snapshot();
    CHECK(last.chain.joints.size() == 3);
    CHECK(last.chain.joints.at(2).angle > 0.0);
    CHECK(last.chain.joints.at(4).angle < 0.0);
    CHECK(last.chain.joints.at(6).angle > 0.0);
    CHECK(last.chain.joints.at(4).angle == doctest::Approx(-kPi / 2.0).epsilon(1e-12));
    for (const auto& [i, j] : last.chain.joints) CHECK(j.locked);
    std::map<int, double> first_seen;
    for (const Snapshot* s : t.snapshots()) {
      for (const auto& [i, j] : s->chain.joints) {
        if (!j.locked) continue;
        auto [it, fresh] = first_seen.emplace(i, j.angle);
        if (!fresh) CHECK(std::abs(j.angle - it->second) < 1e-9);
      }
    }
  }

  TEST_CASE("snapshot shapes come from their chains") {
    const Trace t = run(RobotSpec{}, three_buckles());
    for (const Snapshot* s : t.snapshots()) CHECK(s->shape == shape_of(s->chain));
  }

  TEST_CASE("timeline equals travel plus dwell of the expanded primitives") {
    RobotSpec spec;
    spec.pneumatics.mode = SettleMode::FirstOrder;
    ActionScript script = three_buckles();
    script.push_back(SetPouches{{}, {1, 5}});
    script.push_back(SetPouches{{5, 1}, {}});
    const Trace t = run(spec, script);
    double x = 0.0, total = 0.0;
    for (const auto& r : t.records) {
      const auto* a = std::get_if<ActionRecord>(&r);
      if (a == nullptr || is_macro(a->action)) continue;
      if (const auto* m = std::get_if<MoveCarriage>(&a->action)) {
        total += std::abs(m->x_m - x) / spec.carriage.speed;
        x = m->x_m;
      }
      if (const auto* d = std::get_if<Dwell>(&a->action)) total += d->seconds;
    }
    CHECK(t.end_time() == doctest::Approx(total).epsilon(1e-12));
    double last = 0.0;
    for (const auto& r : t.records) {
      const double time = std::visit([](const auto& v) { return v.time_s; }, r);
      CHECK(time >= last);
      last = time;
    }
  }

  TEST_CASE("route records for batches") {
    const Trace t = run(RobotSpec{}, {MoveCarriage{0.6}, SetPouches{{}, {1, 5, 3}}});
    const RouteRecord* route = nullptr;
    for (const auto& r : t.records) {
      if (const auto* rr = std::get_if<RouteRecord>(&r)) route = rr;
    }
    REQUIRE(route != nullptr);
    CHECK(route->pouches.size() == 3);
    CHECK(route->plan.optimal);
    // From 0.6: up to pouch 5 (0.825) first, then one sweep down to pouch 1 (0.225).
    CHECK(route->plan.travel_distance == doctest::Approx(0.225 + 0.6));
    for (int p : {1, 3, 5}) CHECK(t.final_snapshot().pouches[static_cast<std::size_t>(p)].state == JamState::Compliant);
  }

  TEST_CASE("all-jammed pull arcs the body") {
    const Trace t = run(RobotSpec{}, {PullCable{Side::Left, 0.043}});
    double bend = 0.0;
    for (const auto& seg : t.final_snapshot().chain.segments) bend += seg.length * seg.curvature;
    CHECK(bend == doctest::Approx(1.0));
  }

  TEST_CASE("growth unlocks new pouches") {
    RobotSpec spec;
    spec.everted_length = 0.6;
    const auto e = error_of([&] { run(spec, {JamPouch{5}}); });
    CHECK(e.kind() == ErrorKind::Precondition);
    CHECK(e.path() == "script[0].pouch");
    const Trace t = run(spec, {Grow{0.3}, UnjamPouch{5}});
    CHECK(t.final_snapshot().pouches[5].state == JamState::Compliant);
    CHECK_FALSE(t.final_snapshot().pouches[6].state.has_value());
    const auto more = error_of([&] { run(spec, {Grow{0.7}}); });
    CHECK(more.kind() == ErrorKind::MaterialExhausted);
    CHECK(more.path() == "script[0].length_m");
  }

  TEST_CASE("carriage and magnet preconditions") {
    const auto far = error_of([] { run(RobotSpec{}, {HoldMagnet{6, ValveRole::Inner}}); });
    CHECK(far.kind() == ErrorKind::Precondition);
    CHECK(far.path() == "script[0].valve");
    const auto moving = error_of([] {
      run(RobotSpec{}, {MoveCarriage{0.525}, HoldMagnet{3, ValveRole::Inner}, MoveCarriage{0.9}});
    });
    CHECK(moving.path() == "script[2].x_m");
    const auto beyond = error_of([] { run(RobotSpec{}, {MoveCarriage{1.5}}); });
    CHECK(beyond.path() == "script[0].x_m");
  }

  TEST_CASE("pressure changes keep jam states and move capacities") {
    const Trace t = run(RobotSpec{}, {UnjamPouch{2}, SetPressure{13800.0}});
    const auto& s = t.final_snapshot();
    CHECK(s.beam_pressure_pa == 13800.0);
    CHECK(s.pouches[2].state == JamState::Compliant);
    CHECK(s.pouches[2].pressure_pa == doctest::Approx(13800.0));
    CHECK(s.pouches[1].state == JamState::Jammed);
  }

  TEST_CASE("replay is bitwise deterministic") {
    for (const auto& script : {three_buckles(), ActionScript{PullCable{Side::Right, 0.02}, Grow{0.0}}}) {
      CHECK(trace_ndjson(run(RobotSpec{}, script)) == trace_ndjson(run(RobotSpec{}, script)));
    }
  }

  TEST_CASE("property: macros always reach their target") {
    Gen gen(41);
    for (int trial = 0; trial < 40; ++trial) {
      RobotSpec spec;
      spec.pneumatics.mode = gen.coin() ? SettleMode::FirstOrder : SettleMode::Instantaneous;
      World world(spec);
      std::vector<TraceRecord> out;
      for (int k = 0; k < 12; ++k) {
        const int pouch = gen.integer(0, 7);
        const bool jam = gen.coin();
        if (jam) {
          world.apply(JamPouch{pouch}, k, out);
        } else {
          world.apply(UnjamPouch{pouch}, k, out);
        }
        REQUIRE(pouch_state(world.network(), pouch) == (jam ? JamState::Jammed : JamState::Compliant));
      }
    }
  }

  TEST_CASE("failed actions leave the world untouched") {
    World world(RobotSpec{});
    std::vector<TraceRecord> out;
    world.apply(UnjamPouch{2}, 0, out);
    const auto before = out.size();
    const double clock = world.clock();
    CHECK_THROWS_AS(world.apply(PullCable{Side::Left, 0.09}, 1, out), Error);
    CHECK(out.size() == before);
    CHECK(world.clock() == clock);
    CHECK(world.kinematics().chain.joints.empty());
  }
}

TEST_SUITE("deflection experiment") {
  TEST_CASE("unjammed sweep buckles at the two lowest pressures") {
    const auto rows = deflection_experiment(bench(), psi_sweep(), 0.150 * kGravity, false);
    REQUIRE(rows.size() == 7);
    CHECK(rows[0].buckled);
    CHECK(rows[1].buckled);
    CHECK(rows[0].buckle_x == 0.0);
    for (std::size_t i = 2; i < rows.size(); ++i) {
      CHECK_FALSE(rows[i].buckled);
      REQUIRE(rows[i].tip_deflection);
      if (i > 2) CHECK(*rows[i].tip_deflection <= *rows[i - 1].tip_deflection);
    }
    // Degraded stiffness at 1.0 psi, none from 1.5 psi up.
    CHECK(*rows[2].tip_deflection > *rows[3].tip_deflection);
    const double ei0 = 1.4e4 * kPi * std::pow(0.043, 3);
    CHECK(*rows[6].tip_deflection == doctest::Approx(0.150 * kGravity * 0.216 / (3.0 * ei0)).epsilon(0.02));
  }

  TEST_CASE("jammed sweep never buckles and always deflects less") {
    const auto un = deflection_experiment(bench(), psi_sweep(), 0.150 * kGravity, false);
    const auto ja = deflection_experiment(bench(), psi_sweep(), 0.150 * kGravity, true);
    for (std::size_t i = 0; i < ja.size(); ++i) {
      CHECK_FALSE(ja[i].buckled);
      REQUIRE(ja[i].tip_deflection);
      if (un[i].tip_deflection) CHECK(*ja[i].tip_deflection < *un[i].tip_deflection);
    }
  }

  TEST_CASE("empty sweep and CSV") {
    CHECK(deflection_experiment(bench(), std::vector<double>{}, 1.0, false).empty());
    const auto rows = deflection_experiment(bench(), std::vector<double>{3400.0, 13800.0}, 0.150 * kGravity, false);
    const std::string csv = deflection_csv(rows);
    CHECK(csv.rfind("pressure_pa,state,tip_deflection_m,buckled,buckle_x_m\n", 0) == 0);
    CHECK(csv.find("3400") != std::string::npos);
    CHECK(csv.find("unjammed") != std::string::npos);
    CHECK(csv.find("true") != std::string::npos);
  }

  TEST_CASE("sweep validation") {
    CHECK_THROWS_AS(deflection_experiment(bench(), std::vector<double>{6900.0, 3400.0}, 1.0, false), Error);
    CHECK_THROWS_AS(deflection_experiment(bench(), std::vector<double>{0.0}, 1.0, false), Error);
    const auto sweep = pressure_sweep(3400.0, 13800.0, 1700.0);
    CHECK(sweep.size() == 7);
    CHECK(sweep.back() == doctest::Approx(13600.0));
    CHECK(psi_sweep().back() == doctest::Approx(2.0 * kPascalPerPsi));
  }
}

TEST_SUITE("scenario") {
  TEST_CASE("spec-only document takes defaults") {
    const auto sc = load_scenario_text(R"({"spec": {}})");
    CHECK(sc.script.empty());
    CHECK(sc.spec.radius == 0.043);
    CHECK(sc.spec.num_pouches == 8);
    CHECK(sc.spec.mechanics.critical_coefficient == 0.68);
  }

  TEST_CASE("three-buckle document") {
    const auto sc = load_scenario_file(JAMBEAM_SOURCE_DIR "/scenarios/three_buckles.json");
    CHECK(sc.spec.num_pouches == 8);
    CHECK(sc.script.size() == 9);
    CHECK(std::get<PullCable>(sc.script[4]).side == Side::Right);
  }

  TEST_CASE("out-of-range pouch names the action") {
    const auto e = error_of([] {
      load_scenario_text(R"({"spec": {"num_pouches": 8}, "script": [{"action": "Dwell", "seconds": 1},
                                                                    {"action": "JamPouch", "pouch": 9}]})");
    });
    CHECK(e.kind() == ErrorKind::Schema);
    CHECK(e.path() == "script[1].pouch");
    CHECK(std::string(e.what()).find("JamPouch") != std::string::npos);
  }

  TEST_CASE("schema errors carry field paths") {
    struct Case {
      const char* doc;
      const char* path;
    };
    const Case cases[] = {
        {R"({"spec": {"radius_m": -1}})", "spec.radius_m"},
        {R"({"spec": {"colour": "red"}})", "spec.colour"},
        {R"({"spec": {"mechanics": {"kappa_jam": 0.5}}})", "spec.mechanics.kappa_jam"},
        {R"({"spec": {"carriage": {"speed_m_per_s": "fast"}}})", "spec.carriage.speed_m_per_s"},
        {R"({"spec": {}, "script": [{"action": "Grow", "length_m": -0.1}]})", "script[0].length_m"},
        {R"({"spec": {}, "script": [{"action": "Teleport"}]})", "script[0].action"},
        {R"({"spec": {}, "script": [{"action": "PullCable", "side": "up", "length_m": 0.01}]})", "script[0].side"},
        {R"({"spec": {}, "script": [{"action": "Dwell", "seconds": 1, "extra": 2}]})", "script[0].extra"},
        {R"({"spec": {}, "script": [{"action": "SetPouches", "jam": [1, -2]}]})", "script[0].jam[1]"},
        {R"({"script": []})", "spec"},
        {R"({"spec": {}, "script": {}})", "script"},
        {R"({"spec": )", "$"},
    };
    for (const auto& c : cases) {
      CAPTURE(c.doc);
      const auto e = error_of([&] { load_scenario_text(c.doc); });
      CHECK(e.kind() == ErrorKind::Schema);
      CHECK(e.path() == c.path);
    }
  }

  TEST_CASE("documents survive a write/read cycle") {
    Scenario sc;
    sc.spec.pneumatics.mode = SettleMode::FirstOrder;
    sc.spec.everted_length = 0.9;
    sc.script = three_buckles();
    sc.script.push_back(SetPouches{{1}, {2, 3}});
    sc.script.push_back(HoldMagnet{1, ValveRole::Outer});
    const auto back = load_scenario(to_json(sc));
    CHECK(back.script == sc.script);
    CHECK(to_json(back.spec) == to_json(sc.spec));
  }

  TEST_CASE("polyline CSV") {
    const Polyline line{{0.0, 0.0}, {0.45, 0.0}, {0.45, 0.3}};
    CHECK(polyline_from_csv(polyline_csv(line)) == line);
    CHECK(polyline_from_csv("0,0\n1.5, 2\n\n") == Polyline{{0.0, 0.0}, {1.5, 2.0}});
    CHECK_THROWS_AS(polyline_from_csv("x_m,y_m\n0,0\nabc\n"), Error);
  }

  TEST_CASE("trace records") {
    const Trace t = run(RobotSpec{}, {UnjamPouch{3}, PullCable{Side::Left, 0.0608}, JamPouch{3}});
    const std::string nd = trace_ndjson(t);
    std::size_t lines = 0;
    for (char ch : nd) lines += ch == '\n';
    CHECK(lines == t.records.size());
    CHECK(nd.find(R"("case":"buckle")") != std::string::npos);
    CHECK(nd.find(R"("type":"lock")") != std::string::npos);
    const std::string events = pneumatic_event_records(t);
    CHECK(events.find(",PouchVented,3,outer,0.000") != std::string::npos);
  }
}
