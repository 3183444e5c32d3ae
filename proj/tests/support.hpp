#pragma once

#include <map>
#include <string>
#include <vector>

#include "mklock/fsm.hpp"
#include "mklock/logic.hpp"
#include "mklock/netlist.hpp"
#include "mklock/random.hpp"

namespace testsupport {

inline std::string bench_path(const std::string& name) {
    return std::string(MKLOCK_BENCHMARK_DIR) + "/bench/" + name + ".bench";
}

inline std::string kiss2_path(const std::string& name) {
    return std::string(MKLOCK_BENCHMARK_DIR) + "/kiss2/" + name + ".kiss2";
}

// Truth tables written out case by case, kept apart from the library.
inline mklock::Logic ref_gate(mklock::GateKind kind, const std::vector<mklock::Logic>& in) {
    using mklock::GateKind;
    using mklock::Logic;
    auto all = [&](Logic v) {
        for (Logic x : in) {
            if (x != v) return false;
        }
        return true;
    };
    auto any = [&](Logic v) {
        for (Logic x : in) {
            if (x == v) return true;
        }
        return false;
    };
    auto invert = [](Logic v) { return v == Logic::X ? Logic::X : (v == Logic::One ? Logic::Zero : Logic::One); };
    switch (kind) {
    case GateKind::And:
        return any(Logic::Zero) ? Logic::Zero : all(Logic::One) ? Logic::One : Logic::X;
    case GateKind::Nand:
        return invert(ref_gate(GateKind::And, in));
    case GateKind::Or:
        return any(Logic::One) ? Logic::One : all(Logic::Zero) ? Logic::Zero : Logic::X;
    case GateKind::Nor:
        return invert(ref_gate(GateKind::Or, in));
    case GateKind::Xor: {
        if (any(Logic::X)) return Logic::X;
        int ones = 0;
        for (Logic x : in) ones += x == Logic::One;
        return ones % 2 ? Logic::One : Logic::Zero;
    }
    case GateKind::Xnor:
        return invert(ref_gate(GateKind::Xor, in));
    case GateKind::Not:
        return invert(in.at(0));
    case GateKind::Buf:
        return in.at(0);
    }
    return Logic::X;
}

// Name-keyed simulator that settles the combinational logic by sweeping
// every gate until nothing changes. Slow and obviously correct.
class ReferenceSim {
public:
    ReferenceSim(const mklock::Netlist& n, mklock::Logic init) : n_(n) {
        for (std::size_t i = 0; i < n.net_count(); ++i) value_[n.net_name(static_cast<mklock::NetId>(i))] = mklock::Logic::X;
        for (const auto& d : n.dffs) value_[n.net_name(d.output)] = init;
    }

    void set(const std::string& net, mklock::Logic v) { value_[net] = v; }
    [[nodiscard]] mklock::Logic get(const std::string& net) const { return value_.at(net); }

    void settle() {
        for (const auto& g : n_.gates) value_[n_.net_name(g.output)] = mklock::Logic::X;
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& g : n_.gates) {
                std::vector<mklock::Logic> in;
                for (auto f : g.fanins) in.push_back(value_[n_.net_name(f)]);
                const auto v = ref_gate(g.kind, in);
                auto& slot = value_[n_.net_name(g.output)];
                if (slot != v) {
                    slot = v;
                    changed = true;
                }
            }
        }
    }

    void clock() {
        std::map<std::string, mklock::Logic> next;
        for (const auto& d : n_.dffs) next[n_.net_name(d.output)] = value_[n_.net_name(d.input)];
        for (const auto& [k, v] : next) value_[k] = v;
    }

private:
    const mklock::Netlist& n_;
    std::map<std::string, mklock::Logic> value_;
};

// Random valid sequential netlist: gates only read inputs, flip-flop outputs
// or earlier gates, so the combinational part is acyclic.
inline mklock::Netlist random_netlist(std::uint64_t seed, std::size_t inputs, std::size_t dffs, std::size_t gates,
                                      std::size_t outputs) {
    using namespace mklock;
    Rng rng(seed);
    std::string text;
    std::vector<std::string> pool;
    for (std::size_t i = 0; i < inputs; ++i) {
        text += "INPUT(i" + std::to_string(i) + ")\n";
        pool.push_back("i" + std::to_string(i));
    }
    for (std::size_t i = 0; i < dffs; ++i) pool.push_back("q" + std::to_string(i));
    static const char* kinds[] = {"AND", "NAND", "OR", "NOR", "XOR", "XNOR", "NOT", "BUF"};
    std::vector<std::string> gate_lines;
    for (std::size_t g = 0; g < gates; ++g) {
        const std::string kind = kinds[rng.below(8)];
        const bool unary = kind == "NOT" || kind == "BUF";
        const std::size_t arity = unary ? 1 : 2 + rng.below(3);
        std::string line = "g" + std::to_string(g) + " = " + kind + "(";
        for (std::size_t a = 0; a < arity; ++a) {
            if (a) line += ", ";
            line += pool[rng.below(pool.size())];
        }
        gate_lines.push_back(line + ")");
        pool.push_back("g" + std::to_string(g));
    }
    const std::size_t first_gate = inputs + dffs;
    for (std::size_t o = 0; o < outputs; ++o) {
        text += "OUTPUT(g" + std::to_string(gates - 1 - o) + ")\n";
    }
    for (std::size_t i = 0; i < dffs; ++i) {
        text += "q" + std::to_string(i) + " = DFF(" + pool[first_gate + rng.below(gates)] + ")\n";
    }
    for (const auto& l : gate_lines) text += l + "\n";
    return parse_bench(text, "rand" + std::to_string(seed));
}

// Random complete, deterministic Mealy machine: every state has one
// transition per fully specified input vector.
inline mklock::Fsm random_fsm(std::uint64_t seed, std::size_t states, std::size_t in_width, std::size_t out_width) {
    mklock::Rng rng(seed);
    mklock::Fsm f;
    f.input_width = in_width;
    f.output_width = out_width;
    for (std::size_t s = 0; s < states; ++s) f.states.push_back("st" + std::to_string(s));
    f.reset_state = f.states.front();
    for (const auto& s : f.states) {
        for (std::size_t x = 0; x < (std::size_t{1} << in_width); ++x) {
            mklock::Transition t;
            for (std::size_t i = 0; i < in_width; ++i) t.input += ((x >> i) & 1U) ? '1' : '0';
            t.from = s;
            t.to = f.states[rng.below(states)];
            for (std::size_t i = 0; i < out_width; ++i) t.output += (rng.next() & 1U) ? '1' : '0';
            f.transitions.push_back(t);
        }
    }
    return f;
}

}  // namespace testsupport
