#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "mklock/netlist.hpp"

namespace mklock {

enum class Logic : std::uint8_t { Zero = 0, One = 1, X = 2 };

[[nodiscard]] constexpr char to_char(Logic v) noexcept {
    return v == Logic::Zero ? '0' : v == Logic::One ? '1' : 'x';
}
[[nodiscard]] std::optional<Logic> logic_from_char(char c) noexcept;
[[nodiscard]] constexpr Logic from_bool(bool b) noexcept { return b ? Logic::One : Logic::Zero; }

// Strong Kleene semantics: AND with any 0 is 0, OR with any 1 is 1,
// otherwise an X input makes the result X. XOR with any X is X.
[[nodiscard]] Logic kleene_eval(GateKind kind, std::span<const Logic> fanins);

}  // namespace mklock
