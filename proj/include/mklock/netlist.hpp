#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mklock {

using NetId = std::uint32_t;

enum class GateKind : std::uint8_t { And, Nand, Or, Nor, Xor, Xnor, Not, Buf };

[[nodiscard]] std::string_view to_string(GateKind kind) noexcept;
// Case-insensitive; "BUFF" is accepted as BUF.
[[nodiscard]] std::optional<GateKind> gate_kind_from_string(std::string_view text);
[[nodiscard]] constexpr bool is_unary(GateKind kind) noexcept {
    return kind == GateKind::Not || kind == GateKind::Buf;
}

struct Gate {
    NetId output;
    GateKind kind;
    std::vector<NetId> fanins;
};

struct Dff {
    NetId output;  // present state Q
    NetId input;   // next state D
};

// Bidirectional name <-> id table. Ids are dense and handed out in
// insertion order.
class NetTable {
public:
    NetId intern(std::string_view name);
    [[nodiscard]] std::optional<NetId> find(std::string_view name) const;
    [[nodiscard]] NetId at(std::string_view name) const;  // throws if absent
    [[nodiscard]] const std::string& name(NetId id) const { return names_.at(id); }
    [[nodiscard]] std::size_t size() const noexcept { return names_.size(); }
    [[nodiscard]] bool contains(std::string_view name) const { return find(name).has_value(); }

private:
    struct Hash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const noexcept {
            return std::hash<std::string_view>{}(s);
        }
    };
    std::vector<std::string> names_;
    std::unordered_map<std::string, NetId, Hash, std::equal_to<>> ids_;
};

// Gate-level sequential circuit. Fields are public so that transforms and
// tests can build invariant-breaking values; validate() is the gatekeeper.
struct Netlist {
    std::string name;
    std::vector<NetId> inputs;
    std::vector<NetId> outputs;
    std::vector<Gate> gates;
    std::vector<Dff> dffs;
    NetTable nets;

    [[nodiscard]] const std::string& net_name(NetId id) const { return nets.name(id); }
    [[nodiscard]] std::size_t net_count() const noexcept { return nets.size(); }
    [[nodiscard]] bool is_input(NetId id) const;
};

enum class Severity : std::uint8_t { Error, Warning };

struct Violation {
    Severity severity;
    std::string message;  // e.g. "duplicate driver: G5"
    std::string net;
};

// Errors only: the list is empty iff every Netlist invariant holds.
[[nodiscard]] std::vector<Violation> validate(const Netlist& n);
// Warning-level findings (dangling internal nets).
[[nodiscard]] std::vector<Violation> lint(const Netlist& n);

// Gate indices such that every gate follows the gates driving its fanins.
// Primary inputs and DFF outputs act as sources. Throws mklock::Error on a
// combinational cycle.
[[nodiscard]] std::vector<std::size_t> topo_order(const Netlist& n);

// Same nets, drivers and I/O order, compared by net name.
[[nodiscard]] bool structurally_equal(const Netlist& a, const Netlist& b);

[[nodiscard]] Netlist parse_bench(std::string_view text, std::string name = {});
[[nodiscard]] std::string write_bench(const Netlist& n);
[[nodiscard]] Netlist read_bench_file(const std::string& path);

}  // namespace mklock
