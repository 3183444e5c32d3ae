#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mklock/fsm.hpp"
#include "mklock/key_schedule.hpp"

namespace mklock {

struct BehLockConfig {
    std::size_t k = 4;      // any k >= 2
    unsigned key_bits = 4;  // k_i
    std::uint64_t seed = 0;
    std::optional<KeySchedule> explicit_schedule;
};

struct BehStateEntry {
    std::string state;
    std::size_t time = 0;
    std::string locked_state;
};

struct BehWrongfulEntry {
    std::string state;
    std::size_t time = 0;
    std::string input;  // original input pattern
    std::string wrongful_state;
};

struct BehManifest {
    KeySchedule schedule;
    std::vector<BehStateEntry> state_map;
    std::vector<BehWrongfulEntry> wrongful_map;

    [[nodiscard]] const std::string& locked_state(std::string_view state, std::size_t time) const;
    [[nodiscard]] const std::string& wrongful_state(std::string_view state, std::size_t time,
                                                    std::string_view input_pattern) const;
};

struct BehavioralLock {
    Fsm fsm;
    BehManifest manifest;
};

// Name of state `s` at counter time t in the product machine.
[[nodiscard]] std::string timed_state_name(std::string_view s, std::size_t t);

// Covers every k_i-bit value except `key` with k_i cubes (MSB first).
[[nodiscard]] std::vector<std::string> wrong_key_cubes(std::uint64_t key, unsigned key_bits);

[[nodiscard]] BehavioralLock lock_behavioral(const Fsm& f, const BehLockConfig& cfg);

// Locked-machine input for one step: key bits (MSB first) then x.
[[nodiscard]] std::string keyed_input(std::uint64_t key, unsigned key_bits, std::string_view x);

[[nodiscard]] std::string write_beh_manifest(const BehManifest& m);
[[nodiscard]] BehManifest parse_beh_manifest(std::string_view text);

}  // namespace mklock
