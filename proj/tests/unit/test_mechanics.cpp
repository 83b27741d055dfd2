#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../support/gen.hpp"
#include "jambeam/error.hpp"
#include "jambeam/mechanics.hpp"

using namespace jambeam;
using jambeam::testing::Gen;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kR = 0.043;
constexpr double kTipLoad = 0.150 * 9.81;  // 150 g
constexpr double kLength = 0.6;

MomentModel model_at(double p, double c = 0.68) { return {p, kR, c, 0.1}; }

BeamSection section(bool jammed, double kappa_jam = 2.0) {
  BeamSection s;
  s.x0 = 0.0;
  s.x1 = 0.15;
  s.jammed = jammed;
  s.radius = kR;
  s.kappa_jam = kappa_jam;
  return s;
}

std::vector<BeamSection> beam(bool jammed, int n = 4, double length = kLength, MechanicsParams params = {}) {
  return uniform_sections(length, n, jammed, params, kR);
}

LoadCase tip(double f, double length = kLength) { return {f, length, false, 0.0}; }

}  // namespace

TEST_SUITE("mechanics") {
  TEST_CASE("characteristic moments at 6.9 kPa") {
    const auto m = characteristic_moments(6900.0, kR);
    const double r3 = kR * kR * kR;
    CHECK(m.wrinkle == doctest::Approx(kPi / 2.0 * 6900.0 * r3));
    CHECK(m.wrinkle == doctest::Approx(0.862).epsilon(1e-3 / 0.862));
    CHECK(m.collapse == doctest::Approx(1.723).epsilon(1e-3 / 1.723));
    CHECK(m.collapse == 2.0 * m.wrinkle);
  }

  TEST_CASE("characteristic moments edge cases") {
    const auto zero = characteristic_moments(0.0, kR);
    CHECK(zero.wrinkle == 0.0);
    CHECK(zero.collapse == 0.0);
    CHECK_THROWS_AS(characteristic_moments(6900.0, 0.0), Error);
    CHECK_THROWS_AS(characteristic_moments(6900.0, -0.01), Error);
  }

  TEST_CASE("critical moment, compliant and jammed") {
    const double oracle = 0.68 * kPi * 5200.0 * kR * kR * kR;
    CHECK(critical_moment(model_at(5200.0), section(false)) == doctest::Approx(oracle));
    CHECK(critical_moment(model_at(5200.0), section(false)) == doctest::Approx(0.883).epsilon(0.002 / 0.883));
    CHECK(critical_moment(model_at(5200.0), section(true)) == doctest::Approx(2.0 * oracle));
    CHECK(critical_moment(model_at(0.0), section(true)) == 0.0);
    CHECK(critical_moment(model_at(0.0), section(false)) == 0.0);
  }

  TEST_CASE("moment profile") {
    const auto m = moment_profile(tip(kTipLoad));
    CHECK(m(0.0) == doctest::Approx(0.8829));
    CHECK(m(kLength) == 0.0);
    CHECK(m(0.3) == doctest::Approx(kTipLoad * 0.3));
    const auto none = moment_profile(tip(0.0));
    CHECK(none(0.0) == 0.0);
    const auto weighted = moment_profile({kTipLoad, kLength, true, 2.0});
    CHECK(weighted(0.1) == doctest::Approx(kTipLoad * 0.5 + 0.5 * 2.0 * 0.25));
    double last = weighted(0.0);
    for (int i = 1; i <= 60; ++i) {
      const double v = weighted(kLength * i / 60.0);
      CHECK(v <= last);
      last = v;
    }
  }

  TEST_CASE("buckling check over the pressure sweep") {
    const auto compliant = beam(false);
    const auto load = tip(kTipLoad);
    SUBCASE("3.4 kPa buckles at the base") {
      const auto b = buckling_check(compliant, model_at(3400.0), load);
      REQUIRE(b);
      CHECK(b->x == 0.0);
      CHECK(b->pouch_index == 0);
    }
    SUBCASE("6.9 kPa holds") { CHECK_FALSE(buckling_check(compliant, model_at(6900.0), load)); }
    SUBCASE("jammed holds at 3.4 kPa") { CHECK_FALSE(buckling_check(beam(true), model_at(3400.0), load)); }
    SUBCASE("boundary pressure") {
      const double boundary = 0.8829 / (0.68 * kPi * kR * kR * kR);
      CHECK(boundary == doctest::Approx(5198.13).epsilon(1e-5));
      CHECK(buckling_check(compliant, model_at(boundary * (1.0 - 1e-9)), load));
      CHECK_FALSE(buckling_check(compliant, model_at(boundary * (1.0 + 1e-9)), load));
    }
  }

  TEST_CASE("buckle lands in the first section that gives way") {
    std::vector<bool> pattern{true, true, false, true};
    MechanicsParams params;
    params.kappa_jam = 3.0;  // with 2 the base gives way first under any tip load
    const auto sections = uniform_sections(kLength, 4, pattern, params, kR);
    // Moment at the compliant pouch start above its capacity, base below the jammed one.
    const double crit_c = 0.68 * kPi * 6900.0 * kR * kR * kR;
    const double f = 1.05 * crit_c / (kLength - 0.3);
    REQUIRE(f * kLength < 3.0 * crit_c);
    const auto b = buckling_check(sections, model_at(6900.0), tip(f));
    REQUIRE(b);
    CHECK(b->pouch_index == 2);
    CHECK(b->x == doctest::Approx(0.3));
  }

  TEST_CASE("tip deflection matches the uniform cantilever") {
    const double ei0 = 1.4e4 * kPi * kR * kR * kR;
    CHECK(ei0 == doctest::Approx(3.497).epsilon(1e-3));
    const double oracle = kTipLoad * std::pow(kLength, 3) / (3.0 * ei0);
    CHECK(oracle == doctest::Approx(0.0303).epsilon(0.002));
    const double unjammed = tip_deflection(beam(false), model_at(13800.0), tip(kTipLoad));
    CHECK(unjammed == doctest::Approx(oracle).epsilon(0.02));
    const double jammed = tip_deflection(beam(true), model_at(13800.0), tip(kTipLoad));
    CHECK(jammed == doctest::Approx(oracle / 5.0).epsilon(0.02));
    CHECK(jammed == doctest::Approx(0.00606).epsilon(0.02));
    const double fine = tip_deflection(beam(false), model_at(13800.0), tip(kTipLoad), 1000);
    CHECK(fine == doctest::Approx(oracle).epsilon(0.005));
    CHECK(tip_deflection(beam(false), model_at(13800.0), tip(0.0)) == 0.0);
  }

  TEST_CASE("tip deflection with self weight matches the distributed-load oracle") {
    MechanicsParams params;
    const double w = 0.5;
    const double ei0 = 1.4e4 * kPi * kR * kR * kR;
    const double oracle = kTipLoad * std::pow(kLength, 3) / (3.0 * ei0) + w * std::pow(kLength, 4) / (8.0 * ei0);
    const double d = tip_deflection(beam(false), model_at(20000.0), {kTipLoad, kLength, true, w}, 1000);
    CHECK(d == doctest::Approx(oracle).epsilon(0.005));
  }

  TEST_CASE("tip deflection errors") {
    try {
      (void)tip_deflection(beam(false), model_at(3400.0), tip(kTipLoad));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Buckled);
    }
    auto gap = beam(false);
    gap[2].x0 += 0.01;
    CHECK_THROWS_AS(tip_deflection(gap, model_at(13800.0), tip(kTipLoad)), Error);
    auto shortened = beam(false);
    shortened.pop_back();
    CHECK_THROWS_AS(tip_deflection(shortened, model_at(13800.0), tip(kTipLoad)), Error);
  }

  TEST_CASE("effective stiffness degrades linearly between wrinkling and critical") {
    const auto s = section(false);
    const auto m = model_at(6900.0);
    const double ei0 = 1.4e4 * kPi * kR * kR * kR;
    const double mw = kPi / 2.0 * 6900.0 * kR * kR * kR;
    const double mc = 0.68 * kPi * 6900.0 * kR * kR * kR;
    CHECK(effective_stiffness(s, m, 0.5 * mw) == doctest::Approx(ei0));
    CHECK(effective_stiffness(s, m, mw) == doctest::Approx(ei0));
    CHECK(effective_stiffness(s, m, mc) == doctest::Approx(0.1 * ei0));
    CHECK(effective_stiffness(s, m, 0.5 * (mw + mc)) == doctest::Approx(0.55 * ei0));
    const auto j = section(true);
    CHECK(effective_stiffness(j, m, 0.5 * mw) == doctest::Approx(5.0 * ei0));
    CHECK(effective_stiffness(j, m, 2.0 * mw) == doctest::Approx(5.0 * ei0));
  }

  TEST_CASE("calibration") {
    const std::vector<BuckleObservation> pair{{5200.0, kTipLoad, kLength, true}, {6900.0, kTipLoad, kLength, false}};
    const auto est = calibrate_coefficient(pair, kR);
    const double r3 = kR * kR * kR;
    CHECK(est.upper == doctest::Approx(0.8829 / (kPi * 5200.0 * r3)));
    CHECK(est.lower == doctest::Approx(0.8829 / (kPi * 6900.0 * r3)));
    CHECK(est.upper == doctest::Approx(0.680).epsilon(0.002 / 0.68));
    CHECK(est.lower == doctest::Approx(0.512).epsilon(0.002 / 0.512));
    CHECK(est.point == est.upper);

    const std::vector<BuckleObservation> single{{6900.0, kTipLoad, kLength, false}};
    const auto one = calibrate_coefficient(single, kR);
    CHECK(one.upper == 1.0);
    CHECK(one.point == 1.0);

    const std::vector<BuckleObservation> crossed{{6900.0, kTipLoad, kLength, true}, {5200.0, kTipLoad, kLength, false}};
    try {
      (void)calibrate_coefficient(crossed, kR);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Inconsistent);
    }
    CHECK_THROWS_AS(calibrate_coefficient(std::vector<BuckleObservation>{}, kR), Error);
  }

  TEST_CASE("property: moments scale linearly in p and cubically in r") {
    Gen gen(11);
    for (int i = 0; i < 200; ++i) {
      const double p = gen.uniform(0.0, 20000.0);
      const double r = gen.uniform(0.005, 0.2);
      const double k = gen.uniform(0.1, 5.0);
      const auto base = characteristic_moments(p, r);
      const auto pk = characteristic_moments(k * p, r);
      const auto rk = characteristic_moments(p, k * r);
      CHECK(pk.wrinkle == doctest::Approx(k * base.wrinkle).epsilon(1e-12));
      CHECK(rk.collapse == doctest::Approx(k * k * k * base.collapse).epsilon(1e-12));
    }
  }

  TEST_CASE("property: jammed critical moment dominates, equal only when kappa_jam is 1") {
    Gen gen(12);
    for (int i = 0; i < 200; ++i) {
      const double kappa = gen.coin(0.2) ? 1.0 : gen.uniform(1.0, 4.0);
      const MomentModel m{gen.uniform(100.0, 20000.0), gen.uniform(0.01, 0.1), gen.uniform(0.5, 1.0), 0.1};
      const double jammed = critical_moment(m, section(true, kappa));
      const double compliant = critical_moment(m, section(false, kappa));
      CHECK(jammed >= compliant);
      CHECK((jammed == compliant) == (kappa == 1.0));
    }
  }

  TEST_CASE("property: wrinkle <= critical <= collapse for c in [0.5, 1]") {
    Gen gen(13);
    for (int i = 0; i < 200; ++i) {
      const double p = gen.uniform(0.0, 20000.0);
      const MomentModel m{p, kR, gen.uniform(0.5, 1.0), 0.1};
      const auto cm = characteristic_moments(p, kR);
      const double crit = critical_moment(m, section(false));
      CHECK(cm.wrinkle <= crit + 1e-12);
      CHECK(crit <= cm.collapse + 1e-12);
    }
  }

  TEST_CASE("property: deflection is non-increasing in pressure and in jammed sections") {
    Gen gen(14);
    for (int trial = 0; trial < 100; ++trial) {
      MechanicsParams params;
      params.kappa_ei = gen.uniform(1.0, 8.0);
      params.kappa_jam = gen.uniform(1.0, 3.0);
      const int n = gen.integer(1, 8);
      const double length = gen.uniform(0.2, 1.2);
      const double f = gen.uniform(0.0, 2.0);
      std::vector<bool> pattern(static_cast<std::size_t>(n), false);

      double last = std::numeric_limits<double>::infinity();
      for (int i = 0; i <= n; ++i) {
        if (i > 0) pattern[static_cast<std::size_t>(gen.integer(0, n - 1))] = true;
        const auto s = uniform_sections(length, n, pattern, params, kR);
        const MomentModel m{30000.0, kR, 0.68, 0.1};
        if (buckling_check(s, m, tip(f, length))) break;
        const double d = tip_deflection(s, m, tip(f, length));
        CHECK(d <= last * (1.0 + 1e-12));
        last = d;
      }

      const auto s = uniform_sections(length, n, gen.coin(), params, kR);
      last = std::numeric_limits<double>::infinity();
      for (double p = 1000.0; p <= 30000.0; p += 1000.0) {
        const MomentModel m{p, kR, 0.68, 0.1};
        if (buckling_check(s, m, tip(f, length))) continue;
        const double d = tip_deflection(s, m, tip(f, length));
        CHECK(d <= last * (1.0 + 1e-12));
        last = d;
      }
    }
  }

  TEST_CASE("property: a single compliant pouch takes the buckle") {
    Gen gen(15);
    int hits = 0;
    for (int trial = 0; trial < 2000 && hits < 200; ++trial) {
      MechanicsParams params;
      params.kappa_jam = gen.uniform(1.2, 4.0);
      const double r = gen.uniform(0.02, 0.08);
      const double p = gen.uniform(2000.0, 15000.0);
      const double length = gen.uniform(0.3, 1.5);
      const int n = gen.integer(1, 10);
      const int j = gen.integer(0, n - 1);
      const double x0 = length * j / n;
      const double crit_c = 0.68 * kPi * p * r * r * r;
      const double crit_j = params.kappa_jam * crit_c;
      const double f_min = crit_c / (length - x0);
      const double f_max = crit_j / length;
      if (!(f_min < f_max)) continue;
      const double f = gen.uniform(f_min, f_max) * (1.0 - 1e-9) + f_min * 1e-9;
      std::vector<bool> pattern(static_cast<std::size_t>(n), true);
      pattern[static_cast<std::size_t>(j)] = false;
      const auto sections = uniform_sections(length, n, pattern, params, r);
      const auto b = buckling_check(sections, {p, r, 0.68, 0.1}, tip(f, length));
      REQUIRE(b);
      CHECK(b->pouch_index == j);
      CHECK(b->x == doctest::Approx(x0));
      ++hits;
    }
    CHECK(hits >= 100);
  }
}
