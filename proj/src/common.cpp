#include "jambeam/actions.hpp"
#include "jambeam/common.hpp"
#include "jambeam/error.hpp"

namespace jambeam {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::UnknownId: return "unknown_id";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Schema: return "schema";
    case ErrorKind::Buckled: return "buckled";
    case ErrorKind::Saturated: return "saturated";
    case ErrorKind::MaterialExhausted: return "material_exhausted";
    case ErrorKind::Overload: return "overload";
    case ErrorKind::Inconsistent: return "inconsistent";
    case ErrorKind::CyclicPrecedence: return "cyclic_precedence";
  }
  return "unknown";
}

std::string_view to_string(Side side) noexcept { return side == Side::Left ? "left" : "right"; }

std::string_view to_string(ValveRole role) noexcept { return role == ValveRole::Inner ? "inner" : "outer"; }

std::string_view to_string(JamState state) noexcept {
  switch (state) {
    case JamState::Jammed: return "jammed";
    case JamState::Compliant: return "compliant";
    case JamState::Transitional: return "transitional";
  }
  return "unknown";
}

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

std::string_view action_name(const Action& action) noexcept {
  return std::visit(overloaded{
                        [](const MoveCarriage&) { return std::string_view("MoveCarriage"); },
                        [](const HoldMagnet&) { return std::string_view("HoldMagnet"); },
                        [](const ReleaseMagnet&) { return std::string_view("ReleaseMagnet"); },
                        [](const Dwell&) { return std::string_view("Dwell"); },
                        [](const PullCable&) { return std::string_view("PullCable"); },
                        [](const ReleaseCable&) { return std::string_view("ReleaseCable"); },
                        [](const Grow&) { return std::string_view("Grow"); },
                        [](const SetPressure&) { return std::string_view("SetPressure"); },
                        [](const JamPouch&) { return std::string_view("JamPouch"); },
                        [](const UnjamPouch&) { return std::string_view("UnjamPouch"); },
                        [](const SetPouches&) { return std::string_view("SetPouches"); },
                    },
                    action);
}

bool is_macro(const Action& action) noexcept {
  return std::holds_alternative<JamPouch>(action) || std::holds_alternative<UnjamPouch>(action) ||
         std::holds_alternative<SetPouches>(action);
}

}  // namespace jambeam
