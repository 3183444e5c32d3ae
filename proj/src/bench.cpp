#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mklock/error.hpp"
#include "mklock/netlist.hpp"
#include "text_util.hpp"

namespace mklock {

namespace {

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](unsigned char x, unsigned char y) {
               return std::toupper(x) == std::toupper(y);
           });
}

// "KIND(arg, arg)" -> kind + args. Returns false on malformed syntax.
bool split_call(std::string_view text, std::string_view& kind, std::vector<std::string_view>& args) {
    const auto open = text.find('(');
    const auto close = text.rfind(')');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open) return false;
    if (!detail::trim(text.substr(close + 1)).empty()) return false;
    kind = detail::trim(text.substr(0, open));
    args.clear();
    auto inner = text.substr(open + 1, close - open - 1);
    if (detail::trim(inner).empty()) return true;
    std::size_t start = 0;
    while (true) {
        const auto comma = inner.find(',', start);
        auto arg = detail::trim(inner.substr(start, comma == std::string_view::npos ? inner.npos : comma - start));
        if (arg.empty()) return false;
        args.push_back(arg);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return true;
}

bool valid_net_name(std::string_view s) {
    if (s.empty()) return false;
    return std::none_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isspace(c) || c == '(' || c == ')' || c == ',' || c == '=' || c == '#';
    });
}

}  // namespace

Netlist parse_bench(std::string_view text, std::string name) {
    Netlist n;
    n.name = std::move(name);

    std::vector<std::size_t> driver_line;  // 0 = undriven
    std::vector<std::size_t> first_use;    // 0 = never read
    auto intern = [&](std::string_view net) {
        const NetId id = n.nets.intern(net);
        if (id >= driver_line.size()) {
            driver_line.resize(id + 1, 0);
            first_use.resize(id + 1, 0);
        }
        return id;
    };
    auto define = [&](std::string_view net, std::size_t line) {
        const NetId id = intern(net);
        if (driver_line[id] != 0) {
            throw ParseError(line, "duplicate driver: " + std::string(net) + " (first driven on line " +
                                       std::to_string(driver_line[id]) + ")");
        }
        driver_line[id] = line;
        return id;
    };
    auto use = [&](std::string_view net, std::size_t line) {
        const NetId id = intern(net);
        if (first_use[id] == 0) first_use[id] = line;
        return id;
    };

    std::vector<std::size_t> gate_line;
    std::vector<std::size_t> output_line;
    std::vector<std::string_view> args;
    std::size_t line_no = 0;
    for (auto raw : detail::lines(text)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        const auto line = detail::trim(raw);
        if (line.empty()) continue;

        std::string_view kind;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            if (!split_call(line, kind, args) || args.size() != 1 || !valid_net_name(args[0])) {
                throw ParseError(line_no, "syntax error: " + std::string(line));
            }
            if (iequals(kind, "INPUT")) {
                n.inputs.push_back(define(args[0], line_no));
            } else if (iequals(kind, "OUTPUT")) {
                const NetId id = use(args[0], line_no);
                if (std::find(n.outputs.begin(), n.outputs.end(), id) != n.outputs.end()) {
                    throw ParseError(line_no, "duplicate output: " + std::string(args[0]));
                }
                n.outputs.push_back(id);
                output_line.push_back(line_no);
            } else {
                throw ParseError(line_no, "unknown declaration: " + std::string(kind));
            }
            continue;
        }

        const auto lhs = detail::trim(line.substr(0, eq));
        if (!valid_net_name(lhs) || !split_call(line.substr(eq + 1), kind, args)) {
            throw ParseError(line_no, "syntax error: " + std::string(line));
        }
        for (auto a : args) {
            if (!valid_net_name(a)) throw ParseError(line_no, "bad net name: " + std::string(a));
        }
        if (iequals(kind, "DFF")) {
            if (args.size() != 1) throw ParseError(line_no, "DFF takes exactly one fanin");
            const NetId q = define(lhs, line_no);
            n.dffs.push_back({q, use(args[0], line_no)});
            continue;
        }
        const auto gk = gate_kind_from_string(kind);
        if (!gk) throw ParseError(line_no, "unknown gate kind: " + std::string(kind));
        if (is_unary(*gk) ? args.size() != 1 : args.size() < 2) {
            throw ParseError(line_no, "bad arity for " + std::string(to_string(*gk)) + ": " + std::string(lhs));
        }
        Gate g{define(lhs, line_no), *gk, {}};
        g.fanins.reserve(args.size());
        for (auto a : args) g.fanins.push_back(use(a, line_no));
        n.gates.push_back(std::move(g));
        gate_line.push_back(line_no);
    }

    for (NetId id = 0; id < n.net_count(); ++id) {
        if (driver_line[id] != 0) continue;
        if (first_use[id] != 0) {
            throw ParseError(first_use[id], "undefined fanin: " + n.net_name(id));
        }
        for (std::size_t i = 0; i < n.outputs.size(); ++i) {
            if (n.outputs[i] == id) throw ParseError(output_line[i], "undefined output: " + n.net_name(id));
        }
    }

    for (const auto& v : validate(n)) {
        if (v.message.starts_with("combinational cycle")) {
            std::size_t line = 0;
            for (std::size_t i = 0; i < n.gates.size(); ++i) {
                if (n.net_name(n.gates[i].output) == v.net) line = gate_line[i];
            }
            throw ParseError(line, v.message);
        }
        throw ParseError(0, v.message);
    }
    return n;
}

std::string write_bench(const Netlist& n) {
    std::ostringstream os;
    if (!n.name.empty()) os << "# " << n.name << '\n';
    os << "# " << n.inputs.size() << " inputs\n"
       << "# " << n.outputs.size() << " outputs\n"
       << "# " << n.dffs.size() << " D-type flipflops\n"
       << "# " << n.gates.size() << " gates\n\n";
    for (NetId id : n.inputs) os << "INPUT(" << n.net_name(id) << ")\n";
    os << '\n';
    for (NetId id : n.outputs) os << "OUTPUT(" << n.net_name(id) << ")\n";
    os << '\n';
    for (const auto& d : n.dffs) os << n.net_name(d.output) << " = DFF(" << n.net_name(d.input) << ")\n";
    if (!n.dffs.empty()) os << '\n';
    for (const auto& g : n.gates) {
        os << n.net_name(g.output) << " = " << to_string(g.kind) << '(';
        for (std::size_t i = 0; i < g.fanins.size(); ++i) {
            if (i) os << ", ";
            os << n.net_name(g.fanins[i]);
        }
        os << ")\n";
    }
    return os.str();
}

Netlist read_bench_file(const std::string& path) {
    return parse_bench(detail::read_file(path), std::filesystem::path(path).stem().string());
}

}  // namespace mklock
