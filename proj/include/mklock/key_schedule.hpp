#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mklock {

// Widest key value the toolkit can represent.
inline constexpr unsigned kMaxKeyBits = 63;

// k key values of key_bits bits each, applied cyclically: cycle t expects
// keys[t mod k].
struct KeySchedule {
    unsigned key_bits = 0;
    std::vector<std::uint64_t> keys;

    [[nodiscard]] std::size_t period() const noexcept { return keys.size(); }
    [[nodiscard]] std::uint64_t at_cycle(std::size_t cycle) const { return keys[cycle % keys.size()]; }
    [[nodiscard]] bool is_constant() const noexcept;

    friend bool operator==(const KeySchedule&, const KeySchedule&) = default;
};

[[nodiscard]] constexpr bool is_power_of_two(std::size_t v) noexcept { return v && !(v & (v - 1)); }
[[nodiscard]] unsigned log2_exact(std::size_t v);

// Throws ConfigError unless keys.size() >= 2, 1 <= key_bits <= kMaxKeyBits
// and every value fits in key_bits.
void check_schedule(const KeySchedule& s);

// Seeded uniform draw of k values in [0, 2^key_bits). Repeats are allowed.
[[nodiscard]] KeySchedule generate_key_schedule(std::size_t k, unsigned key_bits, std::uint64_t seed);

// MSB-first binary rendering, e.g. to_binary(1, 2) == "01".
[[nodiscard]] std::string to_binary(std::uint64_t value, unsigned bits);
[[nodiscard]] std::uint64_t from_binary(std::string_view bits);

// "01,11,10,00" <-> schedule. All values must share one width.
[[nodiscard]] KeySchedule parse_key_list(std::string_view csv);
[[nodiscard]] std::string format_key_list(const KeySchedule& s);

// Key schedule file: one MSB-first binary string per line, k lines.
[[nodiscard]] KeySchedule parse_schedule_file(std::string_view text);
[[nodiscard]] std::string write_schedule_file(const KeySchedule& s);

}  // namespace mklock
