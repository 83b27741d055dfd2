#pragma once

#include <string_view>
#include <variant>
#include <vector>

#include "jambeam/common.hpp"

namespace jambeam {

struct MoveCarriage {
  double x_m = 0.0;
  friend bool operator==(const MoveCarriage&, const MoveCarriage&) = default;
};
struct HoldMagnet {
  int pouch = 0;
  ValveRole valve = ValveRole::Inner;
  friend bool operator==(const HoldMagnet&, const HoldMagnet&) = default;
};
struct ReleaseMagnet {
  friend bool operator==(const ReleaseMagnet&, const ReleaseMagnet&) = default;
};
struct Dwell {
  double seconds = 0.0;
  friend bool operator==(const Dwell&, const Dwell&) = default;
};
struct PullCable {
  Side side = Side::Left;
  double length_m = 0.0;
  friend bool operator==(const PullCable&, const PullCable&) = default;
};
struct ReleaseCable {
  Side side = Side::Left;
  double length_m = 0.0;
  friend bool operator==(const ReleaseCable&, const ReleaseCable&) = default;
};
struct Grow {
  double length_m = 0.0;
  friend bool operator==(const Grow&, const Grow&) = default;
};
struct SetPressure {
  double pressure_pa = 0.0;
  friend bool operator==(const SetPressure&, const SetPressure&) = default;
};
// Macros. Expanded by the engine into primitive carriage/magnet/dwell steps.
struct JamPouch {
  int pouch = 0;
  friend bool operator==(const JamPouch&, const JamPouch&) = default;
};
struct UnjamPouch {
  int pouch = 0;
  friend bool operator==(const UnjamPouch&, const UnjamPouch&) = default;
};
// Batch of jam/unjam macros whose execution order is chosen by the route
// scheduler (minimal carriage travel).
struct SetPouches {
  std::vector<int> jam;
  std::vector<int> unjam;
  friend bool operator==(const SetPouches&, const SetPouches&) = default;
};

using Action = std::variant<MoveCarriage, HoldMagnet, ReleaseMagnet, Dwell, PullCable, ReleaseCable,
                            Grow, SetPressure, JamPouch, UnjamPouch, SetPouches>;
using ActionScript = std::vector<Action>;

std::string_view action_name(const Action& action) noexcept;

bool is_macro(const Action& action) noexcept;

}  // namespace jambeam
