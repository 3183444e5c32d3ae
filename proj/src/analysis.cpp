#include "mklock/analysis.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <unordered_map>

#include <json.hpp>

#include "mklock/error.hpp"
#include "mklock/lock_behavioral.hpp"
#include "mklock/random.hpp"

namespace mklock {

using simd::Word;

namespace {

constexpr std::size_t kMaxBatchWords = 16;

Word lane_mask(std::size_t word, std::size_t valid_lanes) {
    const std::size_t first = word * 64;
    if (valid_lanes >= first + 64) return ~Word{0};
    if (valid_lanes <= first) return 0;
    return (Word{1} << (valid_lanes - first)) - 1;
}

KeyPolicy trim_policy(const KeyPolicy& policy, std::size_t cycles) {
    if (const auto* t = std::get_if<TamperedKey>(&policy)) {
        TamperedKey out{t->schedule, {}};
        for (const auto& [c, v] : t->overrides) {
            if (c < cycles) out.overrides.emplace(c, v);
        }
        return out;
    }
    return policy;
}

}  // namespace

struct EquivalenceChecker::Impl {
    CompiledCircuit ca;
    CompiledCircuit cb;
    LockPorts ports;
    EquivOptions options;
    const simd::KernelTable* kernels;
    std::vector<NetId> a_in, b_in;
    std::vector<NetId> a_out, b_out;
    std::vector<std::string> out_names;
    std::vector<bool> b_counter;  // per b DFF

    Impl(const Netlist& a, const Netlist& b, LockPorts p, EquivOptions o)
        : ca(a), cb(b), ports(std::move(p)), options(o),
          kernels(o.kernels ? o.kernels : &simd::best_kernels()) {
        a_in = a.inputs;
        b_in = data_inputs(b, ports);
        if (a_in.size() != b_in.size()) {
            throw InterfaceMismatch("data input count differs: " + std::to_string(a_in.size()) + " vs " +
                                    std::to_string(b_in.size()));
        }
        for (std::size_t i = 0; i < a_in.size(); ++i) {
            if (a.net_name(a_in[i]) != b.net_name(b_in[i])) {
                throw InterfaceMismatch("data input " + std::to_string(i) + " differs: " + a.net_name(a_in[i]) +
                                        " vs " + b.net_name(b_in[i]));
            }
        }
        if (a.outputs.size() != b.outputs.size()) {
            throw InterfaceMismatch("output count differs: " + std::to_string(a.outputs.size()) + " vs " +
                                    std::to_string(b.outputs.size()));
        }
        for (NetId o : a.outputs) {
            const auto& name = a.net_name(o);
            auto id = b.nets.find(name);
            if (!id || std::find(b.outputs.begin(), b.outputs.end(), *id) == b.outputs.end()) {
                throw InterfaceMismatch("output missing from second circuit: " + name);
            }
            a_out.push_back(o);
            b_out.push_back(*id);
            out_names.push_back(name);
        }
        for (const auto& d : cb.dffs()) {
            b_counter.push_back(std::find(ports.counter_dffs.begin(), ports.counter_dffs.end(), d.output) !=
                                ports.counter_dffs.end());
        }
    }

    void check_policy(const KeyPolicy& policy) const {
        const bool has_policy = !std::holds_alternative<NoKey>(policy);
        if (has_policy && ports.key_inputs.empty()) {
            throw InterfaceMismatch("key policy given for a netlist without key inputs");
        }
        if (!has_policy && !ports.key_inputs.empty()) throw InterfaceMismatch("locked netlist needs a key policy");
    }

    void apply_key(LaneSim& sb, const KeyPolicy& policy, std::size_t cycle) const {
        const auto key = key_at(policy, cycle);
        if (!key) return;
        for (std::size_t b = 0; b < ports.key_inputs.size(); ++b) {
            sb.fill(ports.key_inputs[b], from_bool((*key >> b) & 1U));
        }
    }

    void reset(LaneSim& sa, LaneSim& sb) const {
        const Logic v = options.init == InitMode::Zero ? Logic::Zero : Logic::X;
        sa.reset_state(v);
        sb.reset_state(v);
        for (NetId q : ports.counter_dffs) sb.fill(q, Logic::Zero);
    }

    // Lanes (within the first valid_lanes) where some output differs.
    void mismatches(const LaneSim& sa, const LaneSim& sb, std::vector<Word>& acc) const {
        std::fill(acc.begin(), acc.end(), 0);
        for (std::size_t j = 0; j < a_out.size(); ++j) {
            kernels->accumulate_mismatch(sa.block(a_out[j]), sb.block(b_out[j]), acc.data(), sa.words());
        }
    }

    Counterexample make_cex(const LaneSim& sa, const LaneSim& sb, std::size_t lane, std::size_t cycle,
                            std::vector<std::vector<Logic>> inputs, const KeyPolicy& policy) const {
        Counterexample cex;
        for (std::size_t j = 0; j < a_out.size(); ++j) {
            const Logic va = sa.get(a_out[j], lane);
            const Logic vb = sb.get(b_out[j], lane);
            if (va != vb) {
                cex.output = out_names[j];
                cex.expected = va;
                cex.actual = vb;
                break;
            }
        }
        cex.cycle = cycle;
        cex.stimulus.cycles = cycle + 1;
        cex.stimulus.inputs = std::move(inputs);
        cex.stimulus.key_policy = trim_policy(policy, cycle + 1);
        return cex;
    }

    // Random stimuli in batches of up to kMaxBatchWords * 64 lanes. With
    // stop_at_first the first divergent lane is returned as a
    // counterexample; otherwise every mismatching observation is counted.
    EquivVerdict run_random(std::size_t sequences, std::size_t cycles, std::uint64_t seed,
                            const KeyPolicy& policy, bool stop_at_first, std::uint64_t* mismatch_count) const {
        check_policy(policy);
        EquivVerdict verdict;
        Rng rng(seed);
        const std::size_t n = a_in.size();
        std::vector<Word> acc;
        for (std::size_t start = 0; start < sequences; start += kMaxBatchWords * 64) {
            const std::size_t count = std::min(sequences - start, kMaxBatchWords * 64);
            const std::size_t words = (count + 63) / 64;
            LaneSim sa(ca, words, *kernels), sb(cb, words, *kernels);
            reset(sa, sb);
            acc.assign(words, 0);
            std::vector<Word> recorded;  // [cycle][input][word]
            if (stop_at_first) recorded.reserve(cycles * n * words);
            for (std::size_t c = 0; c < cycles; ++c) {
                for (std::size_t i = 0; i < n; ++i) {
                    for (std::size_t w = 0; w < words; ++w) {
                        const Word bits = rng.next();
                        sa.set_word(a_in[i], w, bits);
                        sb.set_word(b_in[i], w, bits);
                        if (stop_at_first) recorded.push_back(bits);
                    }
                }
                apply_key(sb, policy, c);
                sa.evaluate();
                sb.evaluate();
                if (stop_at_first) {
                    mismatches(sa, sb, acc);
                    for (std::size_t w = 0; w < words; ++w) {
                        const Word hit = acc[w] & lane_mask(w, count);
                        if (!hit) continue;
                        const std::size_t lane = w * 64 + static_cast<std::size_t>(std::countr_zero(hit));
                        std::vector<std::vector<Logic>> inputs(c + 1, std::vector<Logic>(n));
                        for (std::size_t cc = 0; cc <= c; ++cc) {
                            for (std::size_t i = 0; i < n; ++i) {
                                const Word word = recorded[(cc * n + i) * words + lane / 64];
                                inputs[cc][i] = from_bool((word >> (lane % 64)) & 1U);
                            }
                        }
                        verdict.equivalent = false;
                        verdict.counterexample = make_cex(sa, sb, lane, c, std::move(inputs), policy);
                        verdict.work = start + lane + 1;
                        return verdict;
                    }
                } else {
                    for (std::size_t j = 0; j < a_out.size(); ++j) {
                        std::fill(acc.begin(), acc.end(), 0);
                        kernels->accumulate_mismatch(sa.block(a_out[j]), sb.block(b_out[j]), acc.data(), words);
                        for (std::size_t w = 0; w < words; ++w) {
                            *mismatch_count += static_cast<std::uint64_t>(std::popcount(acc[w] & lane_mask(w, count)));
                        }
                    }
                }
                sa.clock();
                sb.clock();
            }
        }
        verdict.work = sequences;
        return verdict;
    }

    EquivVerdict run_exhaustive(std::size_t depth, const KeyPolicy& policy) const;
};

EquivVerdict EquivalenceChecker::Impl::run_exhaustive(std::size_t depth, const KeyPolicy& policy) const {
    check_policy(policy);
    const std::size_t n = a_in.size();
    if (n >= 32) throw BudgetExceeded("exhaustive equivalence over " + std::to_string(n) + " inputs");
    const std::size_t combos = std::size_t{1} << n;
    const std::size_t a_ff = ca.dffs().size();
    const std::size_t b_ff = cb.dffs().size();
    const Logic init = options.init == InitMode::Zero ? Logic::Zero : Logic::X;

    // A product state is the concatenated flip-flop values of both circuits.
    std::string start(a_ff + b_ff, static_cast<char>(init));
    for (std::size_t i = 0; i < b_ff; ++i) {
        if (b_counter[i]) start[a_ff + i] = static_cast<char>(Logic::Zero);
    }
    struct Node {
        std::uint32_t parent;
        std::uint32_t input;
    };
    std::vector<std::string> frontier{start};
    std::vector<std::vector<Node>> nodes{{Node{0, 0}}};  // nodes[t][i] reached frontier i of level t

    EquivVerdict verdict;
    std::vector<Word> acc;
    for (std::size_t t = 0; t < depth; ++t) {
        const std::size_t total = frontier.size() * combos;
        verdict.work += total;
        if (verdict.work > options.budget) {
            throw BudgetExceeded("exhaustive equivalence needs more than " + std::to_string(options.budget) +
                                 " state expansions at depth " + std::to_string(t + 1));
        }
        const std::size_t words = std::min((total + 63) / 64, kMaxBatchWords);
        const std::size_t lanes = words * 64;
        LaneSim sa(ca, words, *kernels), sb(cb, words, *kernels);
        apply_key(sb, policy, t);
        acc.assign(words, 0);
        std::vector<std::string> next;
        std::vector<Node> next_nodes;
        std::unordered_map<std::string, std::uint32_t> seen;
        const bool more = t + 1 < depth;

        for (std::size_t base = 0; base < total; base += lanes) {
            const std::size_t count = std::min(lanes, total - base);
            for (std::size_t l = 0; l < count; ++l) {
                const std::size_t g = base + l;
                const std::string& state = frontier[g / combos];
                const std::size_t x = g % combos;
                for (std::size_t i = 0; i < a_ff; ++i) sa.set(ca.dffs()[i].output, l, static_cast<Logic>(state[i]));
                for (std::size_t i = 0; i < b_ff; ++i) {
                    sb.set(cb.dffs()[i].output, l, static_cast<Logic>(state[a_ff + i]));
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const Logic v = from_bool((x >> i) & 1U);
                    sa.set(a_in[i], l, v);
                    sb.set(b_in[i], l, v);
                }
            }
            sa.evaluate();
            sb.evaluate();
            mismatches(sa, sb, acc);
            for (std::size_t w = 0; w < words; ++w) {
                const Word hit = acc[w] & lane_mask(w, count);
                if (!hit) continue;
                const std::size_t lane = w * 64 + static_cast<std::size_t>(std::countr_zero(hit));
                const std::size_t g = base + lane;
                std::vector<std::vector<Logic>> inputs(t + 1, std::vector<Logic>(n));
                std::size_t x = g % combos;
                std::size_t idx = g / combos;
                for (std::size_t s = t + 1; s-- > 0;) {
                    for (std::size_t i = 0; i < n; ++i) inputs[s][i] = from_bool((x >> i) & 1U);
                    if (s == 0) break;
                    const Node& node = nodes[s][idx];
                    x = node.input;
                    idx = node.parent;
                }
                verdict.equivalent = false;
                verdict.counterexample = make_cex(sa, sb, lane, t, std::move(inputs), policy);
                return verdict;
            }
            if (!more) continue;
            sa.clock();
            sb.clock();
            std::string state(a_ff + b_ff, '\0');
            for (std::size_t l = 0; l < count; ++l) {
                for (std::size_t i = 0; i < a_ff; ++i) state[i] = static_cast<char>(sa.get(ca.dffs()[i].output, l));
                for (std::size_t i = 0; i < b_ff; ++i) {
                    state[a_ff + i] = static_cast<char>(sb.get(cb.dffs()[i].output, l));
                }
                auto [it, inserted] = seen.try_emplace(state, static_cast<std::uint32_t>(next.size()));
                if (inserted) {
                    next.push_back(state);
                    const std::size_t g = base + l;
                    next_nodes.push_back(Node{static_cast<std::uint32_t>(g / combos), static_cast<std::uint32_t>(g % combos)});
                }
            }
        }
        frontier = std::move(next);
        nodes.push_back(std::move(next_nodes));
    }
    return verdict;
}

EquivalenceChecker::EquivalenceChecker(const Netlist& reference, const Netlist& candidate, LockPorts candidate_ports,
                                       EquivOptions options)
    : impl_(std::make_unique<Impl>(reference, candidate, std::move(candidate_ports), options)) {}

EquivalenceChecker::~EquivalenceChecker() = default;

EquivVerdict EquivalenceChecker::exhaustive(std::size_t depth, const KeyPolicy& policy) const {
    return impl_->run_exhaustive(depth, policy);
}

EquivVerdict EquivalenceChecker::random(std::size_t sequences, std::size_t cycles, std::uint64_t seed,
                                        const KeyPolicy& policy) const {
    return impl_->run_random(sequences, cycles, seed, policy, true, nullptr);
}

double EquivalenceChecker::mismatch_rate(std::size_t sequences, std::size_t cycles, std::uint64_t seed,
                                         const KeyPolicy& policy) const {
    const double total = static_cast<double>(sequences) * static_cast<double>(cycles) *
                         static_cast<double>(impl_->a_out.size());
    if (total == 0) return 0.0;
    std::uint64_t count = 0;
    (void)impl_->run_random(sequences, cycles, seed, policy, false, &count);
    return static_cast<double>(count) / total;
}

std::size_t EquivalenceChecker::data_input_count() const noexcept { return impl_->a_in.size(); }

EquivVerdict check_equivalence_exhaustive(const Netlist& a, const Netlist& b, std::size_t depth,
                                          const KeyPolicy& policy, const LockPorts& b_ports,
                                          const EquivOptions& options) {
    return EquivalenceChecker(a, b, b_ports, options).exhaustive(depth, policy);
}

EquivVerdict check_equivalence_random(const Netlist& a, const Netlist& b, std::size_t sequences, std::size_t cycles,
                                      std::uint64_t seed, const KeyPolicy& policy, const LockPorts& b_ports,
                                      const EquivOptions& options) {
    return EquivalenceChecker(a, b, b_ports, options).random(sequences, cycles, seed, policy);
}

TamperedKey wrong_key_every_cycle(const KeySchedule& schedule, std::size_t cycles, std::uint64_t seed) {
    check_schedule(schedule);
    Rng rng(seed);
    TamperedKey t{schedule, {}};
    const std::uint64_t space = std::uint64_t{1} << schedule.key_bits;
    for (std::size_t c = 0; c < cycles; ++c) {
        const std::uint64_t right = schedule.at_cycle(c);
        std::uint64_t v = rng.below(space - 1);
        if (v >= right) ++v;
        t.overrides.emplace(c, v);
    }
    return t;
}

double corruption_rate(const Netlist& original, const Netlist& locked, const LockPorts& ports,
                       const TamperedKey& tamper, std::size_t sequences, std::size_t cycles, std::uint64_t seed,
                       InitMode init) {
    EquivOptions o;
    o.init = init;
    return EquivalenceChecker(original, locked, ports, o).mismatch_rate(sequences, cycles, seed, tamper);
}

namespace {

// Per-state transition lists for fast stepping.
class FsmStepper {
public:
    explicit FsmStepper(const Fsm& f) : f_(f) {
        for (const auto& t : f.transitions) by_state_[t.from].push_back(&t);
    }

    [[nodiscard]] const Transition* step(const std::string& state, std::string_view bits) const {
        auto it = by_state_.find(state);
        if (it == by_state_.end()) return nullptr;
        for (const Transition* t : it->second) {
            if (pattern_matches(t->input, bits)) return t;
        }
        return nullptr;
    }

    [[nodiscard]] const Fsm& fsm() const noexcept { return f_; }

private:
    const Fsm& f_;
    std::unordered_map<std::string, std::vector<const Transition*>> by_state_;
};

std::string bits_of(std::uint64_t x, std::size_t width) {
    std::string s(width, '0');
    for (std::size_t i = 0; i < width; ++i) {
        if ((x >> i) & 1U) s[i] = '1';
    }
    return s;
}

void check_fsm_pair(const Fsm& original, const Fsm& locked, unsigned key_bits) {
    if (locked.input_width != original.input_width + key_bits) {
        throw InterfaceMismatch("locked machine input width " + std::to_string(locked.input_width) + " != " +
                                std::to_string(original.input_width) + " + " + std::to_string(key_bits));
    }
    if (locked.output_width != original.output_width) throw InterfaceMismatch("output widths differ");
}

}  // namespace

bool fsm_equivalent_exhaustive(const Fsm& original, const Fsm& locked, const KeySchedule& schedule,
                               std::size_t depth) {
    check_schedule(schedule);
    check_fsm_pair(original, locked, schedule.key_bits);
    if (original.input_width >= 32) throw BudgetExceeded("machine has too many inputs for exhaustive search");
    const FsmStepper a(original), b(locked);
    const std::size_t combos = std::size_t{1} << original.input_width;
    std::vector<std::pair<std::string, std::string>> frontier{{original.reset_state, locked.reset_state}};
    for (std::size_t t = 0; t < depth; ++t) {
        std::vector<std::pair<std::string, std::string>> next;
        std::unordered_map<std::string, bool> seen;
        const std::uint64_t key = schedule.at_cycle(t);
        for (const auto& [sa, sb] : frontier) {
            for (std::size_t x = 0; x < combos; ++x) {
                const std::string bits = bits_of(x, original.input_width);
                const Transition* ta = a.step(sa, bits);
                const Transition* tb = b.step(sb, keyed_input(key, schedule.key_bits, bits));
                if (!ta && !tb) continue;
                if (!ta || !tb || ta->output != tb->output) return false;
                if (seen.try_emplace(ta->to + '\n' + tb->to, true).second) next.emplace_back(ta->to, tb->to);
            }
        }
        frontier = std::move(next);
    }
    return true;
}

double fsm_corruption_rate(const Fsm& original, const Fsm& locked, const TamperedKey& tamper, std::size_t sequences,
                           std::size_t cycles, std::uint64_t seed) {
    check_schedule(tamper.schedule);
    check_fsm_pair(original, locked, tamper.schedule.key_bits);
    const FsmStepper a(original), b(locked);
    Rng rng(seed);
    std::uint64_t differing = 0, observed = 0;
    for (std::size_t s = 0; s < sequences; ++s) {
        std::string sa = original.reset_state, sb = locked.reset_state;
        for (std::size_t c = 0; c < cycles; ++c) {
            std::string bits(original.input_width, '0');
            for (char& ch : bits) ch = (rng.next() & 1U) ? '1' : '0';
            const Transition* ta = a.step(sa, bits);
            if (!ta) break;
            const std::uint64_t key = *key_at(tamper, c);
            const Transition* tb = b.step(sb, keyed_input(key, tamper.schedule.key_bits, bits));
            observed += original.output_width;
            if (!tb) {
                differing += original.output_width;
                break;
            }
            for (std::size_t i = 0; i < original.output_width; ++i) {
                if (ta->output[i] != tb->output[i]) ++differing;
            }
            sa = ta->to;
            sb = tb->to;
        }
    }
    return observed ? static_cast<double>(differing) / static_cast<double>(observed) : 0.0;
}

bool AttackResult::survives(const std::vector<std::uint64_t>& keys) const {
    return std::find(survivors.begin(), survivors.end(), keys) != survivors.end();
}

namespace {

bool use_exhaustive(const Netlist& oracle, const AttackOptions& o) {
    if (o.exhaustive) return *o.exhaustive;
    return oracle.inputs.size() <= 6 && oracle.dffs.size() <= 8;
}

template <class PolicyFor>
void run_attack(AttackResult& r, const Netlist& locked, const LockPorts& ports, const Netlist& oracle,
                const AttackOptions& o, std::size_t key_count, PolicyFor policy_for) {
    const auto started = std::chrono::steady_clock::now();
    const bool exhaustive = use_exhaustive(oracle, o);
    r.equivalence = exhaustive ? "exhaustive" : "random";
    r.depth = exhaustive ? o.depth : o.random_cycles;
    EquivOptions eo;
    eo.init = o.init;
    const EquivalenceChecker checker(oracle, locked, ports, eo);
    const std::uint64_t mask = (std::uint64_t{1} << r.key_bits) - 1;
    for (std::uint64_t code = 0; code < r.search_space_size; ++code) {
        std::vector<std::uint64_t> keys(key_count);
        for (std::size_t t = 0; t < key_count; ++t) keys[t] = (code >> (r.key_bits * (key_count - 1 - t))) & mask;
        const KeyPolicy policy = policy_for(keys);
        const auto verdict = exhaustive ? checker.exhaustive(o.depth, policy)
                                        : checker.random(o.random_sequences, o.random_cycles, o.seed, policy);
        if (verdict.equivalent) r.survivors.push_back(std::move(keys));
    }
    r.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
}

std::uint64_t search_space(unsigned key_bits, std::size_t key_count, std::size_t budget) {
    if (key_bits == 0 || key_bits > kMaxKeyBits) throw ConfigError("key width must be in 1.." + std::to_string(kMaxKeyBits));
    if (static_cast<std::uint64_t>(key_bits) * key_count > 62) {
        throw BudgetExceeded("search space of 2^" + std::to_string(key_bits * key_count) + " candidates");
    }
    const std::uint64_t space = std::uint64_t{1} << (key_bits * key_count);
    if (space > budget) {
        throw BudgetExceeded("search space " + std::to_string(space) + " exceeds budget " + std::to_string(budget));
    }
    return space;
}

}  // namespace

AttackResult brute_force_attack(const Netlist& locked, const LockPorts& ports, const Netlist& oracle, std::size_t k,
                                unsigned key_bits, const AttackOptions& options) {
    if (k < 2) throw ConfigError("k must be >= 2 (got " + std::to_string(k) + ")");
    AttackResult r;
    r.mode = "bruteforce";
    r.key_bits = key_bits;
    r.search_space_size = search_space(key_bits, k, options.budget);
    run_attack(r, locked, ports, oracle, options, k, [&](const std::vector<std::uint64_t>& keys) -> KeyPolicy {
        return CorrectKey{KeySchedule{key_bits, keys}};
    });
    return r;
}

AttackResult static_key_attack(const Netlist& locked, const LockPorts& ports, const Netlist& oracle,
                               unsigned key_bits, const AttackOptions& options) {
    AttackResult r;
    r.mode = "static";
    r.key_bits = key_bits;
    r.search_space_size = search_space(key_bits, 1, options.budget);
    run_attack(r, locked, ports, oracle, options, 1,
               [](const std::vector<std::uint64_t>& keys) -> KeyPolicy { return StaticKey{keys[0]}; });
    return r;
}

std::string write_attack_result(const AttackResult& r) {
    nlohmann::ordered_json j;
    j["mode"] = r.mode;
    j["search_space_size"] = r.search_space_size;
    j["key_bits"] = r.key_bits;
    j["equivalence"] = r.equivalence;
    j["depth"] = r.depth;
    j["survivor_count"] = r.survivors.size();
    j["survivors"] = nlohmann::ordered_json::array();
    for (const auto& keys : r.survivors) {
        std::string s;
        for (std::size_t i = 0; i < keys.size(); ++i) {
            if (i) s += ',';
            s += to_binary(keys[i], r.key_bits);
        }
        j["survivors"].push_back(s);
    }
    return j.dump(2) + "\n";
}

CircuitCounts count_circuit(const Netlist& n) {
    return {n.gates.size(), n.dffs.size(), n.inputs.size(), n.outputs.size()};
}

namespace {

class MuxCounter {
public:
    explicit MuxCounter(const Netlist& n) : n_(n), driver_(n.net_count(), kNone) {
        for (std::size_t i = 0; i < n.gates.size(); ++i) driver_[n.gates[i].output] = i;
    }

    std::size_t count(NetId root) const {
        std::size_t total = 0;
        std::vector<NetId> stack{root};
        while (!stack.empty()) {
            const NetId net = stack.back();
            stack.pop_back();
            NetId a, b;
            if (!match(net, a, b)) continue;
            ++total;
            stack.push_back(a);
            stack.push_back(b);
        }
        return total;
    }

private:
    static constexpr std::size_t kNone = ~std::size_t{0};

    const Gate* gate(NetId net) const {
        const std::size_t g = driver_[net];
        return g == kNone ? nullptr : &n_.gates[g];
    }

    bool added(NetId net) const { return n_.net_name(net).starts_with("cl_"); }

    // net = OR(AND(a, NOT s), AND(b, s)) with every gate added by the lock.
    bool match(NetId net, NetId& a, NetId& b) const {
        if (!added(net)) return false;
        const Gate* g = gate(net);
        if (!g || g->kind != GateKind::Or || g->fanins.size() != 2) return false;
        const Gate* x = gate(g->fanins[0]);
        const Gate* y = gate(g->fanins[1]);
        if (!x || !y || x->kind != GateKind::And || y->kind != GateKind::And) return false;
        if (x->fanins.size() != 2 || y->fanins.size() != 2) return false;
        if (!added(g->fanins[0]) || !added(g->fanins[1])) return false;
        for (int xi = 0; xi < 2; ++xi) {
            const NetId sel_n = x->fanins[xi];
            const Gate* inv = gate(sel_n);
            if (!inv || inv->kind != GateKind::Not || !added(sel_n)) continue;
            const NetId sel = inv->fanins[0];
            for (int yi = 0; yi < 2; ++yi) {
                if (y->fanins[yi] != sel) continue;
                a = x->fanins[1 - xi];
                b = y->fanins[1 - yi];
                return true;
            }
        }
        return false;
    }

    const Netlist& n_;
    std::vector<std::size_t> driver_;
};

}  // namespace

std::size_t count_mux2_tree(const Netlist& locked, NetId root) { return MuxCounter(locked).count(root); }

OverheadReport overhead_report(const Netlist& original, const Netlist& locked, const LockManifest& m) {
    if (auto problems = audit_manifest(locked, m); !problems.empty()) {
        throw Error("manifest does not match the locked netlist: " + problems.front());
    }
    OverheadReport r;
    r.circuit = m.circuit;
    r.original = count_circuit(original);
    r.locked = count_circuit(locked);
    auto diff = [&](std::size_t CircuitCounts::*field, const char* what) {
        if (r.locked.*field < r.original.*field) {
            throw Error(std::string("locked netlist has fewer ") + what + " than the original");
        }
        r.delta.*field = r.locked.*field - r.original.*field;
    };
    diff(&CircuitCounts::gates, "gates");
    diff(&CircuitCounts::dffs, "flip-flops");
    diff(&CircuitCounts::inputs, "inputs");
    diff(&CircuitCounts::outputs, "outputs");
    r.k = m.k();
    r.key_bits = m.key_bits();
    r.key_inputs = m.key_input_nets.size();
    r.schedule_bits = r.k * r.key_bits;
    r.layers = m.layers;
    const MuxCounter counter(locked);
    const std::size_t expected = mux2_per_locked_ff(r.k, r.key_bits);
    for (const auto& ff : m.locked_ffs) {
        const std::size_t measured = counter.count(locked.nets.at(ff.mux_tree_output_net));
        if (measured != expected) {
            throw Error("locked flip-flop " + ff.ff_output_net + " has " + std::to_string(measured) +
                        " 2-to-1 MUXes, expected " + std::to_string(expected));
        }
        r.mux2_per_ff.push_back(measured);
    }
    if (r.delta.inputs != r.key_bits) {
        throw Error("input delta " + std::to_string(r.delta.inputs) + " != key width " + std::to_string(r.key_bits));
    }
    if (r.delta.dffs != counter_spec(r.k).width) {
        throw Error("flip-flop delta " + std::to_string(r.delta.dffs) + " != counter width " +
                    std::to_string(counter_spec(r.k).width));
    }
    r.relative_gate_overhead =
        r.original.gates ? static_cast<double>(r.delta.gates) / static_cast<double>(r.original.gates) : 0.0;
    return r;
}

namespace {

nlohmann::ordered_json counts_json(const CircuitCounts& c) {
    nlohmann::ordered_json j;
    j["gate_count"] = c.gates;
    j["dff_count"] = c.dffs;
    j["input_count"] = c.inputs;
    j["output_count"] = c.outputs;
    return j;
}

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

std::string write_overhead_report(const OverheadReport& r) {
    nlohmann::ordered_json j;
    j["circuit"] = r.circuit;
    j["original"] = counts_json(r.original);
    j["locked"] = counts_json(r.locked);
    j["delta"] = counts_json(r.delta);
    j["k"] = r.k;
    j["k_i"] = r.key_bits;
    j["key_inputs"] = r.key_inputs;
    j["schedule_bits"] = r.schedule_bits;
    j["layers"] = r.layers;
    j["mux2_per_locked_ff"] = r.mux2_per_ff;
    j["relative_gate_overhead"] = fixed6(r.relative_gate_overhead);
    return j.dump(2) + "\n";
}

std::string overhead_csv_header() {
    return "circuit,orig_gates,orig_dffs,orig_inputs,orig_outputs,locked_gates,locked_dffs,locked_inputs,"
           "locked_outputs,added_gates,k,k_i,schedule_bits,layers,mux2_per_ff,relative_gate_overhead\n";
}

std::string overhead_csv_row(const OverheadReport& r) {
    std::string mux;
    for (std::size_t i = 0; i < r.mux2_per_ff.size(); ++i) {
        if (i) mux += ';';
        mux += std::to_string(r.mux2_per_ff[i]);
    }
    std::string s = r.circuit;
    for (std::size_t v : {r.original.gates, r.original.dffs, r.original.inputs, r.original.outputs, r.locked.gates,
                          r.locked.dffs, r.locked.inputs, r.locked.outputs, r.delta.gates, r.k,
                          static_cast<std::size_t>(r.key_bits), r.schedule_bits, static_cast<std::size_t>(r.layers)}) {
        s += ',' + std::to_string(v);
    }
    s += ',' + mux + ',' + fixed6(r.relative_gate_overhead) + '\n';
    return s;
}

}  // namespace mklock
