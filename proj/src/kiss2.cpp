#include <algorithm>
#include <charconv>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>

#include "mklock/error.hpp"
#include "mklock/fsm.hpp"
#include "text_util.hpp"

namespace mklock {

namespace {

bool valid_pattern(std::string_view p, std::size_t width) {
    return p.size() == width &&
           std::all_of(p.begin(), p.end(), [](char c) { return c == '0' || c == '1' || c == '-'; });
}

std::size_t parse_count(std::string_view tok, std::size_t line, std::string_view what) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw ParseError(line, "bad " + std::string(what) + " count: " + std::string(tok));
    }
    return v;
}

}  // namespace

bool Fsm::has_state(std::string_view s) const {
    return std::find(states.begin(), states.end(), s) != states.end();
}

bool patterns_overlap(std::string_view a, std::string_view b) noexcept {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != '-' && b[i] != '-' && a[i] != b[i]) return false;
    }
    return true;
}

bool pattern_matches(std::string_view pattern, std::string_view bits) noexcept {
    return patterns_overlap(pattern, bits);
}

std::vector<std::string> validate(const Fsm& f) {
    std::vector<std::string> out;
    if (!f.has_state(f.reset_state)) out.push_back("reset state not declared: " + f.reset_state);
    std::set<std::string_view> seen;
    for (const auto& s : f.states) {
        if (!seen.insert(s).second) out.push_back("duplicate state: " + s);
    }
    std::unordered_map<std::string_view, std::vector<const Transition*>> by_state;
    for (const auto& t : f.transitions) {
        if (!valid_pattern(t.input, f.input_width)) out.push_back("bad input pattern: " + t.input);
        if (!valid_pattern(t.output, f.output_width)) out.push_back("bad output pattern: " + t.output);
        if (!seen.contains(t.from)) out.push_back("unknown state in transition: " + t.from);
        if (!seen.contains(t.to)) out.push_back("unknown state in transition: " + t.to);
        by_state[t.from].push_back(&t);
    }
    for (const auto& s : f.states) {
        const auto it = by_state.find(s);
        if (it == by_state.end()) continue;
        const auto& ts = it->second;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            for (std::size_t j = i + 1; j < ts.size(); ++j) {
                if (patterns_overlap(ts[i]->input, ts[j]->input)) {
                    out.push_back("nondeterministic transitions from " + s + ": " + ts[i]->input +
                                  " overlaps " + ts[j]->input);
                }
            }
        }
    }
    return out;
}

bool structurally_equal(const Fsm& a, const Fsm& b) {
    if (a.input_width != b.input_width || a.output_width != b.output_width ||
        a.reset_state != b.reset_state || a.transitions != b.transitions) {
        return false;
    }
    std::set<std::string> sa(a.states.begin(), a.states.end());
    std::set<std::string> sb(b.states.begin(), b.states.end());
    return sa == sb;
}

Fsm parse_kiss2(std::string_view text) {
    Fsm f;
    std::optional<std::size_t> in_w, out_w, p_count, s_count;
    std::optional<std::string> reset;
    std::size_t reset_line = 0;
    std::set<std::string, std::less<>> known;
    auto note_state = [&](std::string_view s) {
        if (known.insert(std::string(s)).second) f.states.emplace_back(s);
    };

    std::size_t line_no = 0;
    for (auto raw : detail::lines(text)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        const auto toks = detail::split_ws(raw);
        if (toks.empty()) continue;
        const auto head = toks[0];
        if (head.starts_with('.')) {
            if (head == ".e" || head == ".end" || head == ".end_kiss") break;
            if (head == ".start_kiss" || head == ".ilb" || head == ".ob" || head == ".type") continue;
            if (toks.size() != 2) throw ParseError(line_no, "malformed header: " + std::string(raw));
            if (head == ".i") {
                in_w = parse_count(toks[1], line_no, "input");
            } else if (head == ".o") {
                out_w = parse_count(toks[1], line_no, "output");
            } else if (head == ".p") {
                p_count = parse_count(toks[1], line_no, "transition");
            } else if (head == ".s") {
                s_count = parse_count(toks[1], line_no, "state");
            } else if (head == ".r") {
                reset = std::string(toks[1]);
                reset_line = line_no;
            } else {
                throw ParseError(line_no, "unknown header: " + std::string(head));
            }
            continue;
        }
        if (!in_w || !out_w) throw ParseError(line_no, "transition before .i/.o headers");
        if (toks.size() != 4) throw ParseError(line_no, "expected 'input from to output'");
        Transition t{std::string(toks[0]), std::string(toks[1]), std::string(toks[2]), std::string(toks[3])};
        if (!valid_pattern(t.input, *in_w)) throw ParseError(line_no, "bad input pattern: " + t.input);
        if (!valid_pattern(t.output, *out_w)) throw ParseError(line_no, "bad output pattern: " + t.output);
        note_state(t.from);
        note_state(t.to);
        f.transitions.push_back(std::move(t));
    }
    if (!in_w || !out_w) throw ParseError(0, "missing .i or .o header");
    f.input_width = *in_w;
    f.output_width = *out_w;
    if (p_count && *p_count != f.transitions.size()) {
        throw ParseError(0, ".p declares " + std::to_string(*p_count) + " transitions, found " +
                                std::to_string(f.transitions.size()));
    }
    if (s_count && *s_count != f.states.size()) {
        throw ParseError(0, ".s declares " + std::to_string(*s_count) + " states, found " +
                                std::to_string(f.states.size()));
    }
    if (reset) {
        if (!known.contains(*reset)) throw ParseError(reset_line, "unknown state in .r: " + *reset);
        f.reset_state = *reset;
    } else if (!f.states.empty()) {
        f.reset_state = f.states.front();
    } else {
        throw ParseError(0, "machine has no states");
    }
    if (auto problems = validate(f); !problems.empty()) throw ParseError(0, problems.front());
    return f;
}

std::string write_kiss2(const Fsm& f) {
    std::ostringstream os;
    os << ".i " << f.input_width << '\n'
       << ".o " << f.output_width << '\n'
       << ".p " << f.transitions.size() << '\n'
       << ".s " << f.states.size() << '\n'
       << ".r " << f.reset_state << '\n';
    for (const auto& t : f.transitions) {
        os << t.input << ' ' << t.from << ' ' << t.to << ' ' << t.output << '\n';
    }
    os << ".e\n";
    return os.str();
}

Fsm read_kiss2_file(const std::string& path) { return parse_kiss2(detail::read_file(path)); }

FsmRun simulate_fsm(const Fsm& f, const std::vector<std::string>& inputs) {
    std::unordered_map<std::string_view, std::vector<const Transition*>> by_state;
    for (const auto& t : f.transitions) by_state[t.from].push_back(&t);

    FsmRun run;
    run.outputs.reserve(inputs.size());
    run.states.reserve(inputs.size());
    std::string_view state = f.reset_state;
    for (std::size_t step = 0; step < inputs.size(); ++step) {
        const auto& x = inputs[step];
        if (x.size() != f.input_width) {
            throw InterfaceMismatch("input vector width " + std::to_string(x.size()) + " != " +
                                    std::to_string(f.input_width));
        }
        const Transition* hit = nullptr;
        if (auto it = by_state.find(state); it != by_state.end()) {
            for (const auto* t : it->second) {
                if (!pattern_matches(t->input, x)) continue;
                if (hit) throw Error("nondeterministic transitions from " + std::string(state));
                hit = t;
            }
        }
        if (!hit) {
            throw Error("no transition from " + std::string(state) + " on input " + x + " at step " +
                        std::to_string(step));
        }
        run.outputs.push_back(hit->output);
        run.states.push_back(hit->to);
        state = hit->to;
    }
    return run;
}

}  // namespace mklock
