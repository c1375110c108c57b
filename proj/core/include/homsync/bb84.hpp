#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace homsync {

/// The four BB84 polarization preparations. H/V span the rectilinear basis,
/// D (+45 deg) and A (-45 deg) the diagonal basis.
enum class Bb84State : std::uint8_t { H = 0, V = 1, D = 2, A = 3 };

enum class Basis : std::uint8_t { Rectilinear = 0, Diagonal = 1 };

inline constexpr std::array<Bb84State, 4> kAllBb84States{Bb84State::H, Bb84State::V,
                                                         Bb84State::D, Bb84State::A};

constexpr Basis basis_of(Bb84State s) noexcept {
  return (s == Bb84State::H || s == Bb84State::V) ? Basis::Rectilinear : Basis::Diagonal;
}

/// The two states of a basis, in (H, V) / (D, A) order.
constexpr std::array<Bb84State, 2> states_of(Basis b) noexcept {
  return b == Basis::Rectilinear ? std::array{Bb84State::H, Bb84State::V}
                                 : std::array{Bb84State::D, Bb84State::A};
}

/// |<a|b>|: 1 for identical states, 0 for orthogonal states of the same
/// basis, 1/sqrt(2) across bases.
double polarization_overlap(Bb84State a, Bb84State b) noexcept;

std::string_view to_string(Bb84State s) noexcept;
std::optional<Bb84State> parse_bb84_state(std::string_view text) noexcept;

}  // namespace homsync
