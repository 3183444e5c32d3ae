#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mklock/key_schedule.hpp"
#include "mklock/lock_structural.hpp"
#include "mklock/logic.hpp"
#include "mklock/netlist.hpp"
#include "mklock/simd/kernels.hpp"

namespace mklock {

// Key-driving policies for locked circuits.
struct NoKey {};
struct CorrectKey {
    KeySchedule schedule;
};
// Correct schedule except at the listed cycles, which carry the given value.
struct TamperedKey {
    KeySchedule schedule;
    std::map<std::size_t, std::uint64_t> overrides;
};
struct StaticKey {
    std::uint64_t value = 0;
};
using KeyPolicy = std::variant<NoKey, CorrectKey, TamperedKey, StaticKey>;

// Key bus value at a cycle, nullopt under NoKey.
[[nodiscard]] std::optional<std::uint64_t> key_at(const KeyPolicy& policy, std::size_t cycle);

// Which inputs form the key bus (LSB first) and which flip-flops belong to
// the lock counter (they always start at 0).
struct LockPorts {
    std::vector<NetId> key_inputs;
    std::vector<NetId> counter_dffs;

    [[nodiscard]] bool empty() const noexcept { return key_inputs.empty() && counter_dffs.empty(); }
};

[[nodiscard]] LockPorts lock_ports(const Netlist& locked, const LockManifest& m);
// Falls back on the naming convention: keyinput<i> and cl_cnt_q<i>.
[[nodiscard]] LockPorts infer_lock_ports(const Netlist& locked);

// Primary inputs that are not key inputs, in declaration order.
[[nodiscard]] std::vector<NetId> data_inputs(const Netlist& n, const LockPorts& ports);

enum class InitMode { Zero, X };

struct Stimulus {
    std::size_t cycles = 0;
    std::vector<std::vector<Logic>> inputs;  // [cycle][data input]
    KeyPolicy key_policy = NoKey{};
};

struct Trace {
    InitMode init = InitMode::Zero;
    std::vector<std::vector<Logic>> inputs;   // [cycle][data input]
    std::vector<std::optional<std::uint64_t>> keys;
    std::vector<std::vector<Logic>> outputs;  // [cycle][primary output]
    std::vector<std::vector<Logic>> watched;  // [cycle][watched net], sampled after evaluation

    [[nodiscard]] std::size_t cycles() const noexcept { return outputs.size(); }
};

// Cycle semantics: inputs are applied, the combinational logic settles, the
// outputs (and watched nets) are sampled, then every flip-flop latches D.
[[nodiscard]] Trace simulate(const Netlist& n, const Stimulus& s, InitMode init, const LockPorts& ports = {},
                             const std::vector<NetId>& watch = {},
                             const simd::KernelTable& kernels = simd::best_kernels());

// Columns: cycle, data inputs, key (MSB-first binary, locked circuits only),
// primary outputs.
[[nodiscard]] std::string trace_to_csv(const Netlist& n, const Trace& t, const LockPorts& ports = {});

// One binary/x string per line, width = number of data inputs.
[[nodiscard]] std::vector<std::vector<Logic>> parse_stimulus(std::string_view text, std::size_t width);

}  // namespace mklock
