#include "mklock/netlist.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <deque>

#include "mklock/error.hpp"

namespace mklock {

namespace {

constexpr std::array<std::string_view, 8> kGateNames = {"AND", "NAND", "OR",  "NOR",
                                                        "XOR", "XNOR", "NOT", "BUF"};

}  // namespace

std::string_view to_string(GateKind kind) noexcept {
    return kGateNames[static_cast<std::size_t>(kind)];
}

std::optional<GateKind> gate_kind_from_string(std::string_view text) {
    std::string upper(text);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (upper == "BUFF") return GateKind::Buf;
    for (std::size_t i = 0; i < kGateNames.size(); ++i) {
        if (upper == kGateNames[i]) return static_cast<GateKind>(i);
    }
    return std::nullopt;
}

NetId NetTable::intern(std::string_view name) {
    if (auto it = ids_.find(name); it != ids_.end()) return it->second;
    const auto id = static_cast<NetId>(names_.size());
    names_.emplace_back(name);
    ids_.emplace(names_.back(), id);
    return id;
}

std::optional<NetId> NetTable::find(std::string_view name) const {
    if (auto it = ids_.find(name); it != ids_.end()) return it->second;
    return std::nullopt;
}

NetId NetTable::at(std::string_view name) const {
    if (auto id = find(name)) return *id;
    throw Error("unknown net: " + std::string(name));
}

bool Netlist::is_input(NetId id) const {
    return std::find(inputs.begin(), inputs.end(), id) != inputs.end();
}

std::vector<Violation> validate(const Netlist& n) {
    std::vector<Violation> out;
    const std::size_t count = n.net_count();
    auto name_of = [&](NetId id) {
        return id < count ? n.net_name(id) : "#" + std::to_string(id);
    };
    auto report = [&](std::string what, NetId id) {
        auto net = name_of(id);
        out.push_back({Severity::Error, std::move(what) + ": " + net, net});
    };

    std::vector<std::uint32_t> drivers(count, 0);
    std::vector<bool> read(count, false);
    std::vector<bool> is_output(count, false);
    auto bump = [&](NetId id) {
        if (id < count) ++drivers[id];
    };
    for (NetId id : n.inputs) bump(id);
    for (const auto& g : n.gates) bump(g.output);
    for (const auto& d : n.dffs) bump(d.output);

    for (const auto& g : n.gates) {
        const bool unary = is_unary(g.kind);
        if ((unary && g.fanins.size() != 1) || (!unary && g.fanins.size() < 2)) {
            report(std::string("bad arity for ") + std::string(to_string(g.kind)), g.output);
        }
        for (NetId f : g.fanins) {
            if (f >= count) {
                report("undefined fanin", f);
            } else {
                read[f] = true;
            }
        }
    }
    for (const auto& d : n.dffs) {
        if (d.input >= count) {
            report("undefined fanin", d.input);
        } else {
            read[d.input] = true;
        }
    }
    for (NetId id : n.outputs) {
        if (id >= count) {
            report("undefined output", id);
        } else {
            is_output[id] = true;
        }
    }
    for (NetId id = 0; id < count; ++id) {
        if (drivers[id] > 1) {
            report("duplicate driver", id);
        } else if (drivers[id] == 0) {
            if (read[id]) {
                report("undefined fanin", id);
            } else if (is_output[id]) {
                report("undriven output", id);
            } else {
                report("undriven net", id);
            }
        }
    }

    // Kahn over the combinational graph; anything left over sits on a cycle.
    std::vector<std::vector<std::size_t>> driver_gates(count);
    for (std::size_t i = 0; i < n.gates.size(); ++i) {
        if (n.gates[i].output < count) driver_gates[n.gates[i].output].push_back(i);
    }
    std::vector<std::size_t> indegree(n.gates.size(), 0);
    std::vector<std::vector<std::size_t>> readers(count);
    for (std::size_t i = 0; i < n.gates.size(); ++i) {
        for (NetId f : n.gates[i].fanins) {
            if (f >= count) continue;
            indegree[i] += driver_gates[f].size();
            readers[f].push_back(i);
        }
    }
    std::deque<std::size_t> ready;
    for (std::size_t i = 0; i < n.gates.size(); ++i) {
        if (indegree[i] == 0) ready.push_back(i);
    }
    std::size_t done = 0;
    while (!ready.empty()) {
        const auto i = ready.front();
        ready.pop_front();
        ++done;
        const NetId o = n.gates[i].output;
        if (o >= count) continue;
        for (std::size_t r : readers[o]) {
            if (--indegree[r] == 0) ready.push_back(r);
        }
    }
    if (done != n.gates.size()) {
        for (std::size_t i = 0; i < n.gates.size(); ++i) {
            if (indegree[i] != 0) {
                report("combinational cycle", n.gates[i].output);
                break;
            }
        }
    }
    return out;
}

std::vector<Violation> lint(const Netlist& n) {
    std::vector<bool> used(n.net_count(), false);
    for (const auto& g : n.gates) {
        for (NetId f : g.fanins) {
            if (f < used.size()) used[f] = true;
        }
    }
    for (const auto& d : n.dffs) {
        if (d.input < used.size()) used[d.input] = true;
    }
    for (NetId o : n.outputs) {
        if (o < used.size()) used[o] = true;
    }
    std::vector<Violation> out;
    auto check = [&](NetId id) {
        if (id < used.size() && !used[id]) {
            out.push_back({Severity::Warning, "dangling net: " + n.net_name(id), n.net_name(id)});
        }
    };
    for (const auto& g : n.gates) check(g.output);
    for (const auto& d : n.dffs) check(d.output);
    return out;
}

std::vector<std::size_t> topo_order(const Netlist& n) {
    const std::size_t count = n.net_count();
    std::vector<std::int64_t> driver(count, -1);
    for (std::size_t i = 0; i < n.gates.size(); ++i) {
        driver.at(n.gates[i].output) = static_cast<std::int64_t>(i);
    }
    std::vector<std::size_t> indegree(n.gates.size(), 0);
    std::vector<std::vector<std::size_t>> readers(count);
    for (std::size_t i = 0; i < n.gates.size(); ++i) {
        for (NetId f : n.gates[i].fanins) {
            if (driver.at(f) >= 0) {
                ++indegree[i];
                readers[f].push_back(i);
            }
        }
    }
    std::vector<std::size_t> order;
    order.reserve(n.gates.size());
    for (std::size_t i = 0; i < n.gates.size(); ++i) {
        if (indegree[i] == 0) order.push_back(i);
    }
    for (std::size_t head = 0; head < order.size(); ++head) {
        for (std::size_t r : readers[n.gates[order[head]].output]) {
            if (--indegree[r] == 0) order.push_back(r);
        }
    }
    if (order.size() != n.gates.size()) throw Error("combinational cycle in " + n.name);
    return order;
}

bool structurally_equal(const Netlist& a, const Netlist& b) {
    auto same_ids = [&](const std::vector<NetId>& x, const std::vector<NetId>& y) {
        if (x.size() != y.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (a.net_name(x[i]) != b.net_name(y[i])) return false;
        }
        return true;
    };
    if (!same_ids(a.inputs, b.inputs) || !same_ids(a.outputs, b.outputs)) return false;
    if (a.dffs.size() != b.dffs.size() || a.gates.size() != b.gates.size()) return false;
    for (std::size_t i = 0; i < a.dffs.size(); ++i) {
        if (a.net_name(a.dffs[i].output) != b.net_name(b.dffs[i].output) ||
            a.net_name(a.dffs[i].input) != b.net_name(b.dffs[i].input)) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.gates.size(); ++i) {
        const auto& ga = a.gates[i];
        const auto& gb = b.gates[i];
        if (ga.kind != gb.kind || a.net_name(ga.output) != b.net_name(gb.output) ||
            !same_ids(ga.fanins, gb.fanins)) {
            return false;
        }
    }
    return true;
}

}  // namespace mklock
