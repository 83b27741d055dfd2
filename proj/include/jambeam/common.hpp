#pragma once

#include <string_view>

namespace jambeam {

enum class Side { Left, Right };
enum class ValveRole { Inner, Outer };
enum class JamState { Jammed, Compliant, Transitional };
enum class JamTarget { Jam, Unjam };

// +1 for a left (counter-clockwise) bend, -1 for right.
constexpr double side_sign(Side side) noexcept { return side == Side::Left ? 1.0 : -1.0; }
constexpr int side_index(Side side) noexcept { return side == Side::Left ? 0 : 1; }

std::string_view to_string(Side side) noexcept;
std::string_view to_string(ValveRole role) noexcept;
std::string_view to_string(JamState state) noexcept;

// Absolute tolerance for comparing lengths along the beam axis.
inline constexpr double kLengthEps = 1e-9;

}  // namespace jambeam
