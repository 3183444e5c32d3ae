#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mklock/key_schedule.hpp"
#include "mklock/netlist.hpp"

namespace mklock {

struct LockConfig {
    std::size_t k = 4;          // number of key values, power of two >= 2
    unsigned key_bits = 2;      // k_i
    std::size_t num_locked_ffs = 1;
    std::uint64_t seed = 0;
    std::optional<std::vector<std::string>> explicit_targets;  // DFF output net names
    std::optional<KeySchedule> explicit_schedule;
    // Refuse constructions larger than this many 2-to-1 MUXes in total.
    std::size_t max_added_mux2 = std::size_t{1} << 22;
};

// Throws ConfigError on any violated LockConfig invariant that does not
// need the target netlist.
void check_config(const LockConfig& cfg);

struct CounterSpec {
    unsigned width = 0;        // log2(k) flip-flops
    std::size_t period = 0;    // k cycles
    std::uint64_t reset_value = 0;
};

[[nodiscard]] CounterSpec counter_spec(std::size_t k);
// log2(k) + 1
[[nodiscard]] unsigned mux_tree_layers(std::size_t k);
// k * (2^k_i - 1) + (k - 1): key-selected first layer plus counter-selected tree.
[[nodiscard]] std::size_t mux2_per_locked_ff(std::size_t k, unsigned key_bits);

struct WrongfulSlot {
    std::size_t time = 0;    // counter value
    std::uint64_t key = 0;   // wrong key value at that time
    std::string net;         // net the FF loads instead
};

struct LockedFf {
    std::string ff_output_net;
    std::string correct_d_net;
    std::string mux_tree_output_net;
    std::vector<std::string> first_layer_nets;  // one per counter time
    std::vector<WrongfulSlot> wrongful_sources;  // sorted by (time, key)

    [[nodiscard]] const std::string& wrongful_net(std::size_t time, std::uint64_t key) const;
};

struct LockManifest {
    std::string circuit;
    std::uint64_t seed = 0;
    std::vector<std::string> key_input_nets;      // index i carries key bit i (LSB first)
    std::vector<std::string> counter_state_nets;  // LSB first, reset to 0
    std::vector<std::string> onehot_time_nets;    // t_0 .. t_{k-1}
    std::vector<LockedFf> locked_ffs;
    KeySchedule schedule;
    unsigned layers = 0;

    [[nodiscard]] std::size_t k() const noexcept { return schedule.period(); }
    [[nodiscard]] unsigned key_bits() const noexcept { return schedule.key_bits; }
};

struct StructuralLock {
    Netlist netlist;
    LockManifest manifest;
};

// Seeded choice of DFF indices to lock; explicit names win when given.
[[nodiscard]] std::vector<std::size_t> select_lock_targets(
    const Netlist& n, std::size_t count, std::uint64_t seed,
    const std::optional<std::vector<std::string>>& explicit_targets = std::nullopt);

// A wrongful data source: another flip-flop's next-state net, or the
// complement of the target's own next-state net when the circuit has too
// few other flip-flops.
struct WrongfulSource {
    NetId net;
    bool complement = false;

    friend bool operator==(const WrongfulSource&, const WrongfulSource&) = default;
};

// Sources for the count_needed wrong-key slots of one counter time.
[[nodiscard]] std::vector<WrongfulSource> wrongful_sources(const Netlist& n, std::size_t target_dff,
                                                           std::size_t time, std::size_t count_needed,
                                                           std::uint64_t seed);

[[nodiscard]] StructuralLock lock_structural(const Netlist& n, const LockConfig& cfg);

// Every net named in the manifest exists and the locked FFs read their MUX
// trees. Returns problems, empty when consistent.
[[nodiscard]] std::vector<std::string> audit_manifest(const Netlist& locked, const LockManifest& m);

[[nodiscard]] std::string write_manifest(const LockManifest& m);
[[nodiscard]] LockManifest parse_manifest(std::string_view text);

}  // namespace mklock
