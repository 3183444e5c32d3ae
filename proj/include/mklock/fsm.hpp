#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mklock {

// Patterns are strings over {0,1,-}; input bit 0 is the leftmost character.
struct Transition {
    std::string input;
    std::string from;
    std::string to;
    std::string output;

    friend bool operator==(const Transition&, const Transition&) = default;
};

// Mealy machine in symbolic (STG) form.
struct Fsm {
    std::size_t input_width = 0;
    std::size_t output_width = 0;
    std::vector<std::string> states;
    std::string reset_state;
    std::vector<Transition> transitions;

    [[nodiscard]] bool has_state(std::string_view s) const;
};

// Two patterns overlap when some fully specified vector matches both.
[[nodiscard]] bool patterns_overlap(std::string_view a, std::string_view b) noexcept;
[[nodiscard]] bool pattern_matches(std::string_view pattern, std::string_view bits) noexcept;

// Human-readable problems; empty iff the Fsm invariants hold (reset state
// declared, widths consistent, endpoints declared, deterministic).
[[nodiscard]] std::vector<std::string> validate(const Fsm& f);

// Same widths, reset state, state set and transition list.
[[nodiscard]] bool structurally_equal(const Fsm& a, const Fsm& b);

[[nodiscard]] Fsm parse_kiss2(std::string_view text);
[[nodiscard]] std::string write_kiss2(const Fsm& f);
[[nodiscard]] Fsm read_kiss2_file(const std::string& path);

struct FsmRun {
    std::vector<std::string> outputs;
    std::vector<std::string> states;  // state entered after each step
};

// Inputs are fully specified bit strings of length input_width. Throws
// mklock::Error when no transition matches (incomplete machine).
[[nodiscard]] FsmRun simulate_fsm(const Fsm& f, const std::vector<std::string>& inputs);

}  // namespace mklock
