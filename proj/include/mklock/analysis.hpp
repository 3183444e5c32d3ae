#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mklock/engine.hpp"
#include "mklock/fsm.hpp"
#include "mklock/lock_structural.hpp"
#include "mklock/simulator.hpp"

namespace mklock {

inline constexpr std::size_t kDefaultBudget = std::size_t{1} << 20;

struct Counterexample {
    Stimulus stimulus;  // replays on both circuits; the key policy applies to the second
    std::size_t cycle = 0;
    std::string output;
    Logic expected = Logic::X;  // first circuit
    Logic actual = Logic::X;    // second circuit
};

struct EquivVerdict {
    bool equivalent = true;
    std::optional<Counterexample> counterexample;
    std::size_t work = 0;  // (state, input) expansions or simulated sequences
};

struct EquivOptions {
    InitMode init = InitMode::Zero;
    // Exhaustive mode: cap on (product state, input vector) expansions.
    std::size_t budget = kDefaultBudget;
    const simd::KernelTable* kernels = nullptr;  // nullptr = best available
};

// Bounded sequential equivalence between `reference` (unlocked) and
// `candidate` (possibly locked, driven by a key policy). Ports are matched by
// name. Compile once, query many times.
class EquivalenceChecker {
public:
    EquivalenceChecker(const Netlist& reference, const Netlist& candidate, LockPorts candidate_ports,
                       EquivOptions options = {});
    ~EquivalenceChecker();
    EquivalenceChecker(const EquivalenceChecker&) = delete;
    EquivalenceChecker& operator=(const EquivalenceChecker&) = delete;

    // Every input sequence of length <= depth, enumerated as a breadth-first
    // walk over distinct product states. Throws BudgetExceeded.
    [[nodiscard]] EquivVerdict exhaustive(std::size_t depth, const KeyPolicy& policy) const;
    // `sequences` seeded random stimuli of `cycles` cycles each.
    [[nodiscard]] EquivVerdict random(std::size_t sequences, std::size_t cycles, std::uint64_t seed,
                                      const KeyPolicy& policy) const;
    // Fraction of (sequence, cycle, output) observations that differ.
    [[nodiscard]] double mismatch_rate(std::size_t sequences, std::size_t cycles, std::uint64_t seed,
                                       const KeyPolicy& policy) const;

    [[nodiscard]] std::size_t data_input_count() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

[[nodiscard]] EquivVerdict check_equivalence_exhaustive(const Netlist& a, const Netlist& b, std::size_t depth,
                                                        const KeyPolicy& policy, const LockPorts& b_ports,
                                                        const EquivOptions& options = {});
[[nodiscard]] EquivVerdict check_equivalence_random(const Netlist& a, const Netlist& b, std::size_t sequences,
                                                    std::size_t cycles, std::uint64_t seed, const KeyPolicy& policy,
                                                    const LockPorts& b_ports, const EquivOptions& options = {});

// Wrong key at every cycle: each cycle carries a seeded value != schedule key.
[[nodiscard]] TamperedKey wrong_key_every_cycle(const KeySchedule& schedule, std::size_t cycles, std::uint64_t seed);

// `tamper` lists the cycles whose key is overridden; no overrides means the
// correct schedule is applied.
[[nodiscard]] double corruption_rate(const Netlist& original, const Netlist& locked, const LockPorts& ports,
                                     const TamperedKey& tamper, std::size_t sequences, std::size_t cycles,
                                     std::uint64_t seed, InitMode init = InitMode::Zero);

// Behavioral counterparts on KISS2 machines. The locked machine receives
// keyed_input(key, k_i, x) at every step.
[[nodiscard]] bool fsm_equivalent_exhaustive(const Fsm& original, const Fsm& locked, const KeySchedule& schedule,
                                             std::size_t depth);
[[nodiscard]] double fsm_corruption_rate(const Fsm& original, const Fsm& locked, const TamperedKey& tamper,
                                         std::size_t sequences, std::size_t cycles, std::uint64_t seed);

struct AttackOptions {
    std::size_t depth = 8;
    std::size_t budget = kDefaultBudget;  // candidate count limit
    InitMode init = InitMode::Zero;
    std::size_t random_sequences = 256;
    std::size_t random_cycles = 64;
    std::uint64_t seed = 1;
    // Exhaustive bounded equivalence for oracles with <= 6 data inputs and
    // <= 8 flip-flops; randomized otherwise. Set to force one mode.
    std::optional<bool> exhaustive;
};

struct AttackResult {
    std::string mode;  // "bruteforce" or "static"
    std::uint64_t search_space_size = 0;
    std::vector<std::vector<std::uint64_t>> survivors;  // key sequences; static keys have length 1
    unsigned key_bits = 0;
    std::size_t depth = 0;
    std::string equivalence;  // "exhaustive" or "random"
    double elapsed_seconds = 0;

    [[nodiscard]] bool survives(const std::vector<std::uint64_t>& keys) const;
};

// Every length-k key sequence, applied cyclically.
[[nodiscard]] AttackResult brute_force_attack(const Netlist& locked, const LockPorts& ports, const Netlist& oracle,
                                              std::size_t k, unsigned key_bits, const AttackOptions& options = {});
// Every constant key held across all cycles.
[[nodiscard]] AttackResult static_key_attack(const Netlist& locked, const LockPorts& ports, const Netlist& oracle,
                                             unsigned key_bits, const AttackOptions& options = {});

// Elapsed time is left out so that reports are byte-stable.
[[nodiscard]] std::string write_attack_result(const AttackResult& r);

struct CircuitCounts {
    std::size_t gates = 0;
    std::size_t dffs = 0;
    std::size_t inputs = 0;
    std::size_t outputs = 0;
};

[[nodiscard]] CircuitCounts count_circuit(const Netlist& n);

struct OverheadReport {
    std::string circuit;
    CircuitCounts original;
    CircuitCounts locked;
    CircuitCounts delta;
    std::size_t k = 0;
    unsigned key_bits = 0;
    std::size_t key_inputs = 0;     // physical key pins (k_i)
    std::size_t schedule_bits = 0;  // k * k_i
    unsigned layers = 0;
    std::vector<std::size_t> mux2_per_ff;  // measured on the netlist
    double relative_gate_overhead = 0;     // delta.gates / original.gates
};

// 2-to-1 MUXes (OR(AND(a, NOT s), AND(b, s)) over lock-added nets) in the
// tree rooted at `root`.
[[nodiscard]] std::size_t count_mux2_tree(const Netlist& locked, NetId root);

[[nodiscard]] OverheadReport overhead_report(const Netlist& original, const Netlist& locked, const LockManifest& m);
[[nodiscard]] std::string write_overhead_report(const OverheadReport& r);
[[nodiscard]] std::string overhead_csv_header();
[[nodiscard]] std::string overhead_csv_row(const OverheadReport& r);

}  // namespace mklock
