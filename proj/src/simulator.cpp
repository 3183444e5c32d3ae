#include "mklock/simulator.hpp"

#include <algorithm>
#include <sstream>

#include "mklock/engine.hpp"
#include "mklock/error.hpp"
#include "text_util.hpp"

namespace mklock {

std::optional<std::uint64_t> key_at(const KeyPolicy& policy, std::size_t cycle) {
    struct Visitor {
        std::size_t cycle;
        std::optional<std::uint64_t> operator()(const NoKey&) const { return std::nullopt; }
        std::optional<std::uint64_t> operator()(const CorrectKey& p) const { return p.schedule.at_cycle(cycle); }
        std::optional<std::uint64_t> operator()(const TamperedKey& p) const {
            if (auto it = p.overrides.find(cycle); it != p.overrides.end()) return it->second;
            return p.schedule.at_cycle(cycle);
        }
        std::optional<std::uint64_t> operator()(const StaticKey& p) const { return p.value; }
    };
    return std::visit(Visitor{cycle}, policy);
}

LockPorts lock_ports(const Netlist& locked, const LockManifest& m) {
    LockPorts p;
    for (const auto& name : m.key_input_nets) p.key_inputs.push_back(locked.nets.at(name));
    for (const auto& name : m.counter_state_nets) p.counter_dffs.push_back(locked.nets.at(name));
    return p;
}

LockPorts infer_lock_ports(const Netlist& locked) {
    LockPorts p;
    for (std::size_t i = 0;; ++i) {
        auto id = locked.nets.find("keyinput" + std::to_string(i));
        if (!id || !locked.is_input(*id)) break;
        p.key_inputs.push_back(*id);
    }
    for (std::size_t i = 0;; ++i) {
        auto id = locked.nets.find("cl_cnt_q" + std::to_string(i));
        if (!id) break;
        p.counter_dffs.push_back(*id);
    }
    return p;
}

std::vector<NetId> data_inputs(const Netlist& n, const LockPorts& ports) {
    std::vector<NetId> out;
    for (NetId id : n.inputs) {
        if (std::find(ports.key_inputs.begin(), ports.key_inputs.end(), id) == ports.key_inputs.end()) {
            out.push_back(id);
        }
    }
    return out;
}

Trace simulate(const Netlist& n, const Stimulus& s, InitMode init, const LockPorts& ports,
               const std::vector<NetId>& watch, const simd::KernelTable& kernels) {
    const bool has_policy = !std::holds_alternative<NoKey>(s.key_policy);
    if (has_policy && ports.key_inputs.empty()) {
        throw InterfaceMismatch("key policy given for a netlist without key inputs");
    }
    if (!has_policy && !ports.key_inputs.empty()) {
        throw InterfaceMismatch("locked netlist needs a key policy");
    }
    const auto data = data_inputs(n, ports);
    if (s.inputs.size() != s.cycles) {
        throw InterfaceMismatch("stimulus has " + std::to_string(s.inputs.size()) + " input vectors for " +
                                std::to_string(s.cycles) + " cycles");
    }
    for (std::size_t c = 0; c < s.cycles; ++c) {
        if (s.inputs[c].size() != data.size()) {
            throw InterfaceMismatch("cycle " + std::to_string(c) + ": input width " +
                                    std::to_string(s.inputs[c].size()) + " != " + std::to_string(data.size()));
        }
    }
    if (const auto* t = std::get_if<TamperedKey>(&s.key_policy)) {
        for (const auto& [cycle, _] : t->overrides) {
            if (cycle >= s.cycles) throw InterfaceMismatch("override at cycle " + std::to_string(cycle) + " is past the end");
        }
    }

    const CompiledCircuit circuit(n);
    LaneSim sim(circuit, 1, kernels);
    sim.reset_state(init == InitMode::Zero ? Logic::Zero : Logic::X);
    for (NetId q : ports.counter_dffs) sim.fill(q, Logic::Zero);

    Trace trace;
    trace.init = init;
    for (std::size_t c = 0; c < s.cycles; ++c) {
        for (std::size_t i = 0; i < data.size(); ++i) sim.fill(data[i], s.inputs[c][i]);
        const auto key = key_at(s.key_policy, c);
        if (key) {
            if (ports.key_inputs.size() < 64 && (*key >> ports.key_inputs.size())) {
                throw InterfaceMismatch("key value " + std::to_string(*key) + " wider than the key bus");
            }
            for (std::size_t b = 0; b < ports.key_inputs.size(); ++b) {
                sim.fill(ports.key_inputs[b], from_bool((*key >> b) & 1U));
            }
        }
        sim.evaluate();
        std::vector<Logic> outs;
        outs.reserve(n.outputs.size());
        for (NetId o : n.outputs) outs.push_back(sim.get(o, 0));
        std::vector<Logic> seen;
        seen.reserve(watch.size());
        for (NetId w : watch) seen.push_back(sim.get(w, 0));
        trace.inputs.push_back(s.inputs[c]);
        trace.keys.push_back(key);
        trace.outputs.push_back(std::move(outs));
        trace.watched.push_back(std::move(seen));
        sim.clock();
    }
    return trace;
}

std::string trace_to_csv(const Netlist& n, const Trace& t, const LockPorts& ports) {
    const auto data = data_inputs(n, ports);
    const bool keyed = !ports.key_inputs.empty();
    std::ostringstream os;
    os << "cycle";
    for (NetId id : data) os << ',' << n.net_name(id);
    if (keyed) os << ",key";
    for (NetId id : n.outputs) os << ',' << n.net_name(id);
    os << '\n';
    for (std::size_t c = 0; c < t.cycles(); ++c) {
        os << c;
        for (Logic v : t.inputs[c]) os << ',' << to_char(v);
        if (keyed) {
            os << ',';
            if (t.keys[c]) os << to_binary(*t.keys[c], static_cast<unsigned>(ports.key_inputs.size()));
        }
        for (Logic v : t.outputs[c]) os << ',' << to_char(v);
        os << '\n';
    }
    return os.str();
}

std::vector<std::vector<Logic>> parse_stimulus(std::string_view text, std::size_t width) {
    std::vector<std::vector<Logic>> out;
    std::size_t line_no = 0;
    for (auto line : detail::lines(text)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.size() != width) {
            throw ParseError(line_no, "stimulus width " + std::to_string(line.size()) + " != " + std::to_string(width));
        }
        std::vector<Logic> row;
        for (char c : line) {
            auto v = logic_from_char(c);
            if (!v) throw ParseError(line_no, std::string("bad stimulus digit '") + c + "'");
            row.push_back(*v);
        }
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace mklock
