#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace jambeam {

// Bending mechanics of a pressurised thin-walled tube with optional
// jammed sections. SI units throughout: Pa, m, N, N*m.

struct MechanicsParams {
  double critical_coefficient = 0.68;  // c: places buckling between wrinkle onset (0.5) and collapse (1)
  double kappa_jam = 2.0;              // critical-moment multiplier of a jammed section
  double kappa_ei = 5.0;               // bending-stiffness multiplier of a jammed section
  double membrane_stiffness = 1.4e4;   // Et, N/m
  double wrinkle_floor = 0.1;          // EI fraction left at the critical moment
  bool include_self_weight = false;
  double weight_per_length = 0.0;  // N/m
};

struct BeamSection {
  double x0 = 0.0;
  double x1 = 0.0;
  bool jammed = false;
  double radius = 0.043;
  double membrane_stiffness = 1.4e4;
  double kappa_ei = 5.0;
  double kappa_jam = 2.0;
  int pouch_index = 0;
};

struct MomentModel {
  double pressure = 0.0;
  double radius = 0.043;
  double critical_coefficient = 0.68;
  double wrinkle_floor = 0.1;
};

struct LoadCase {
  double tip_load = 0.0;
  double beam_length = 0.0;
  bool include_self_weight = false;
  double weight_per_length = 0.0;
};

struct CharacteristicMoments {
  double wrinkle = 0.0;   // (pi/2) p r^3
  double collapse = 0.0;  // pi p r^3
};

CharacteristicMoments characteristic_moments(double pressure, double radius);

double critical_moment(const MomentModel& model, const BeamSection& section);

// Clamped-base cantilever moment M(x) = F (L - x) + (w / 2) (L - x)^2.
class MomentProfile {
 public:
  explicit MomentProfile(const LoadCase& load);
  double operator()(double x) const noexcept;
  double length() const noexcept { return load_.beam_length; }

 private:
  LoadCase load_;
};

MomentProfile moment_profile(const LoadCase& load);

// Sections of equal length along [0, length], one per pouch.
std::vector<BeamSection> uniform_sections(double length, int count, const std::vector<bool>& jammed,
                                          const MechanicsParams& params, double radius);
std::vector<BeamSection> uniform_sections(double length, int count, bool all_jammed,
                                          const MechanicsParams& params, double radius);

// Effective bending stiffness of a section carrying moment M: full EI0*kappa
// up to the wrinkling moment, linear down to wrinkle_floor*EI0*kappa at the
// critical moment.
double effective_stiffness(const BeamSection& section, const MomentModel& model, double moment);

struct BuckleAt {
  double x = 0.0;
  int pouch_index = 0;

  friend bool operator==(const BuckleAt&, const BuckleAt&) = default;
};

// Smallest x where M(x) reaches the critical moment of the section holding x.
std::optional<BuckleAt> buckling_check(std::span<const BeamSection> sections, const MomentModel& model,
                                       const LoadCase& load);

inline constexpr int kDefaultStations = 200;

// Tip deflection by trapezoidal double integration of M / EI_eff over
// `stations` uniform points, clamped base. Throws ErrorKind::Buckled when
// any section reaches its critical moment.
double tip_deflection(std::span<const BeamSection> sections, const MomentModel& model, const LoadCase& load,
                      int stations = kDefaultStations);

struct BuckleObservation {
  double pressure = 0.0;
  double tip_load = 0.0;
  double length = 0.0;
  bool buckled = false;
};

struct CoefficientEstimate {
  double lower = 0.0;
  double upper = 1.0;
  double point = 1.0;  // the upper bound: buckling taken as marginal
};

// Bounds on c from buckle / no-buckle observations at the clamped base.
// Throws ErrorKind::Inconsistent when the bounds cross.
CoefficientEstimate calibrate_coefficient(std::span<const BuckleObservation> observations, double radius);

}  // namespace jambeam
