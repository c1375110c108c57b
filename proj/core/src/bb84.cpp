#include "homsync/bb84.hpp"

#include <numbers>

namespace homsync {

double polarization_overlap(Bb84State a, Bb84State b) noexcept {
  if (a == b) return 1.0;
  if (basis_of(a) == basis_of(b)) return 0.0;
  return std::numbers::sqrt2 / 2.0;
}

std::string_view to_string(Bb84State s) noexcept {
  switch (s) {
    case Bb84State::H: return "H";
    case Bb84State::V: return "V";
    case Bb84State::D: return "D";
    case Bb84State::A: return "A";
  }
  return "?";
}

std::optional<Bb84State> parse_bb84_state(std::string_view text) noexcept {
  if (text == "H") return Bb84State::H;
  if (text == "V") return Bb84State::V;
  if (text == "D" || text == "+") return Bb84State::D;
  if (text == "A" || text == "-") return Bb84State::A;
  return std::nullopt;
}

}  // namespace homsync
