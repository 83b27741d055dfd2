#include "jambeam/mechanics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "jambeam/common.hpp"
#include "jambeam/error.hpp"

namespace jambeam {

namespace {

void validate(const BeamSection& s) {
  if (!(s.x1 > s.x0)) throw Error(ErrorKind::InvalidArgument, "section must have x1 > x0");
  if (!(s.radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "section radius must be positive");
  if (!(s.membrane_stiffness > 0.0)) throw Error(ErrorKind::InvalidArgument, "membrane stiffness must be positive");
  if (s.kappa_ei < 1.0 || s.kappa_jam < 1.0) throw Error(ErrorKind::InvalidArgument, "jamming multipliers must be >= 1");
}

void validate(const LoadCase& load) {
  if (load.tip_load < 0.0) throw Error(ErrorKind::InvalidArgument, "tip load must be non-negative");
  if (!(load.beam_length > 0.0)) throw Error(ErrorKind::InvalidArgument, "beam length must be positive");
  if (load.weight_per_length < 0.0) throw Error(ErrorKind::InvalidArgument, "weight per length must be non-negative");
}

void validate_tiling(std::span<const BeamSection> sections, double length) {
  if (sections.empty()) throw Error(ErrorKind::InvalidArgument, "no beam sections");
  if (std::abs(sections.front().x0) > kLengthEps) throw Error(ErrorKind::InvalidArgument, "sections must start at 0");
  for (std::size_t i = 0; i < sections.size(); ++i) {
    validate(sections[i]);
    if (i > 0 && std::abs(sections[i].x0 - sections[i - 1].x1) > kLengthEps) {
      throw Error(ErrorKind::InvalidArgument, "sections overlap or leave a gap at index " + std::to_string(i));
    }
  }
  if (std::abs(sections.back().x1 - length) > kLengthEps) {
    throw Error(ErrorKind::InvalidArgument, "sections do not tile the loaded beam length");
  }
}

const BeamSection& section_at(std::span<const BeamSection> sections, double x) {
  for (const auto& s : sections) {
    if (x < s.x1) return s;
  }
  return sections.back();
}

double moment_multiplier(const BeamSection& s) { return s.jammed ? s.kappa_jam : 1.0; }

}  // namespace

CharacteristicMoments characteristic_moments(double pressure, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "radius must be positive");
  if (pressure < 0.0) throw Error(ErrorKind::InvalidArgument, "pressure must be non-negative");
  const double collapse = std::numbers::pi * pressure * radius * radius * radius;
  return {0.5 * collapse, collapse};
}

double critical_moment(const MomentModel& model, const BeamSection& section) {
  const double collapse = characteristic_moments(model.pressure, section.radius).collapse;
  return moment_multiplier(section) * model.critical_coefficient * collapse;
}

MomentProfile::MomentProfile(const LoadCase& load) : load_(load) { validate(load_); }

double MomentProfile::operator()(double x) const noexcept {
  const double arm = std::max(0.0, load_.beam_length - x);
  double m = load_.tip_load * arm;
  if (load_.include_self_weight) m += 0.5 * load_.weight_per_length * arm * arm;
  return m;
}

MomentProfile moment_profile(const LoadCase& load) { return MomentProfile(load); }

std::vector<BeamSection> uniform_sections(double length, int count, const std::vector<bool>& jammed,
                                          const MechanicsParams& params, double radius) {
  if (count <= 0) throw Error(ErrorKind::InvalidArgument, "section count must be positive");
  if (static_cast<int>(jammed.size()) != count) throw Error(ErrorKind::InvalidArgument, "jam pattern size mismatch");
  std::vector<BeamSection> out;
  out.reserve(static_cast<std::size_t>(count));
  const double pitch = length / count;
  for (int i = 0; i < count; ++i) {
    BeamSection s;
    s.x0 = i * pitch;
    s.x1 = (i + 1 == count) ? length : (i + 1) * pitch;
    s.jammed = jammed[static_cast<std::size_t>(i)];
    s.radius = radius;
    s.membrane_stiffness = params.membrane_stiffness;
    s.kappa_ei = params.kappa_ei;
    s.kappa_jam = params.kappa_jam;
    s.pouch_index = i;
    validate(s);
    out.push_back(s);
  }
  return out;
}

std::vector<BeamSection> uniform_sections(double length, int count, bool all_jammed, const MechanicsParams& params,
                                          double radius) {
  return uniform_sections(length, count, std::vector<bool>(static_cast<std::size_t>(std::max(count, 0)), all_jammed),
                          params, radius);
}

double effective_stiffness(const BeamSection& section, const MomentModel& model, double moment) {
  const double stiffness_mult = section.jammed ? section.kappa_ei : 1.0;
  const double r = section.radius;
  const double full = section.membrane_stiffness * std::numbers::pi * r * r * r * stiffness_mult;
  const double wrinkle = characteristic_moments(model.pressure, r).wrinkle * moment_multiplier(section);
  const double critical = critical_moment(model, section);
  const double m = std::abs(moment);
  if (m <= wrinkle) return full;
  if (critical <= wrinkle || m >= critical) return model.wrinkle_floor * full;
  const double t = (m - wrinkle) / (critical - wrinkle);
  return full * (1.0 - (1.0 - model.wrinkle_floor) * t);
}

std::optional<BuckleAt> buckling_check(std::span<const BeamSection> sections, const MomentModel& model,
                                       const LoadCase& load) {
  const MomentProfile moment(load);
  for (const auto& s : sections) {
    validate(s);
    if (s.x0 >= load.beam_length) break;
    // M is non-increasing in x, so a section fails first at its base end.
    if (moment(s.x0) >= critical_moment(model, s)) return BuckleAt{s.x0, s.pouch_index};
  }
  return std::nullopt;
}

double tip_deflection(std::span<const BeamSection> sections, const MomentModel& model, const LoadCase& load,
                      int stations) {
  validate(load);
  validate_tiling(sections, load.beam_length);
  if (stations < 2) throw Error(ErrorKind::InvalidArgument, "need at least two integration stations");
  if (const auto buckle = buckling_check(sections, model, load)) {
    throw Error(ErrorKind::Buckled, "beam buckles at x=" + std::to_string(buckle->x) + " (pouch " +
                                        std::to_string(buckle->pouch_index) + ")");
  }
  const MomentProfile moment(load);
  const double length = load.beam_length;
  const double h = length / (stations - 1);
  auto curvature = [&](double x) {
    const double m = moment(x);
    return m / effective_stiffness(section_at(sections, x), model, m);
  };
  double slope = 0.0;
  double deflection = 0.0;
  double prev_curv = curvature(0.0);
  for (int k = 1; k < stations; ++k) {
    const double x = (k + 1 == stations) ? length : k * h;
    const double curv = curvature(x);
    const double next_slope = slope + 0.5 * h * (prev_curv + curv);
    deflection += 0.5 * h * (slope + next_slope);
    slope = next_slope;
    prev_curv = curv;
  }
  return deflection;
}

CoefficientEstimate calibrate_coefficient(std::span<const BuckleObservation> observations, double radius) {
  if (observations.empty()) throw Error(ErrorKind::InvalidArgument, "need at least one observation");
  CoefficientEstimate est;
  for (const auto& obs : observations) {
    if (!(obs.pressure > 0.0)) throw Error(ErrorKind::InvalidArgument, "observation pressure must be positive");
    const double applied = obs.tip_load * obs.length;
    const double bound = applied / characteristic_moments(obs.pressure, radius).collapse;
    if (obs.buckled) est.upper = std::min(est.upper, bound);
    else est.lower = std::max(est.lower, bound);
  }
  if (est.lower > est.upper) {
    throw Error(ErrorKind::Inconsistent, "observations bound c to an empty interval [" + std::to_string(est.lower) +
                                             ", " + std::to_string(est.upper) + "]");
  }
  est.point = est.upper;
  return est;
}

}  // namespace jambeam
