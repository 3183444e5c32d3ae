#include "mklock/key_schedule.hpp"

#include <algorithm>
#include <sstream>

#include "mklock/error.hpp"
#include "mklock/random.hpp"
#include "text_util.hpp"

namespace mklock {

bool KeySchedule::is_constant() const noexcept {
    return std::adjacent_find(keys.begin(), keys.end(), std::not_equal_to<>{}) == keys.end();
}

unsigned log2_exact(std::size_t v) {
    if (!is_power_of_two(v)) throw ConfigError(std::to_string(v) + " is not a power of two");
    unsigned bits = 0;
    while ((std::size_t{1} << bits) < v) ++bits;
    return bits;
}

void check_schedule(const KeySchedule& s) {
    if (s.keys.size() < 2) throw ConfigError("k must be at least 2");
    if (s.key_bits < 1 || s.key_bits > kMaxKeyBits) {
        throw ConfigError("k_i must be in [1, " + std::to_string(kMaxKeyBits) + "]");
    }
    for (auto v : s.keys) {
        if (v >> s.key_bits) {
            throw ConfigError("key value " + std::to_string(v) + " does not fit in " +
                              std::to_string(s.key_bits) + " bits");
        }
    }
}

KeySchedule generate_key_schedule(std::size_t k, unsigned key_bits, std::uint64_t seed) {
    if (k < 2) throw ConfigError("k must be at least 2");
    if (key_bits < 1 || key_bits > kMaxKeyBits) {
        throw ConfigError("k_i must be in [1, " + std::to_string(kMaxKeyBits) + "]");
    }
    Rng rng(seed ^ 0x6b65797363686564ULL);
    KeySchedule s{key_bits, {}};
    s.keys.reserve(k);
    for (std::size_t i = 0; i < k; ++i) s.keys.push_back(rng.below(std::uint64_t{1} << key_bits));
    return s;
}

std::string to_binary(std::uint64_t value, unsigned bits) {
    std::string out(bits, '0');
    for (unsigned b = 0; b < bits; ++b) {
        if ((value >> b) & 1U) out[bits - 1 - b] = '1';
    }
    return out;
}

std::uint64_t from_binary(std::string_view bits) {
    if (bits.empty() || bits.size() > kMaxKeyBits) {
        throw ParseError(0, "bad key width: '" + std::string(bits) + "'");
    }
    std::uint64_t v = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') throw ParseError(0, "bad key digit in '" + std::string(bits) + "'");
        v = (v << 1) | static_cast<std::uint64_t>(c == '1');
    }
    return v;
}

namespace {

KeySchedule from_tokens(const std::vector<std::string_view>& toks, std::size_t first_line) {
    KeySchedule s;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        const auto line = first_line ? first_line + i : 0;
        try {
            s.keys.push_back(from_binary(toks[i]));
        } catch (const ParseError& e) {
            throw ParseError(line, e.what());
        }
        if (i == 0) {
            s.key_bits = static_cast<unsigned>(toks[i].size());
        } else if (toks[i].size() != s.key_bits) {
            throw ParseError(line, "key values must share one width");
        }
    }
    return s;
}

}  // namespace

KeySchedule parse_key_list(std::string_view csv) {
    std::vector<std::string_view> toks;
    std::size_t start = 0;
    while (start <= csv.size()) {
        auto comma = csv.find(',', start);
        if (comma == std::string_view::npos) comma = csv.size();
        toks.push_back(detail::trim(csv.substr(start, comma - start)));
        start = comma + 1;
    }
    auto s = from_tokens(toks, 0);
    check_schedule(s);
    return s;
}

std::string format_key_list(const KeySchedule& s) {
    std::string out;
    for (std::size_t i = 0; i < s.keys.size(); ++i) {
        if (i) out += ',';
        out += to_binary(s.keys[i], s.key_bits);
    }
    return out;
}

KeySchedule parse_schedule_file(std::string_view text) {
    std::vector<std::string_view> toks;
    std::size_t first = 0;
    std::size_t line_no = 0;
    for (auto line : detail::lines(text)) {
        ++line_no;
        line = detail::trim(line);
        if (line.empty()) continue;
        if (toks.empty()) first = line_no;
        else if (line_no != first + toks.size()) throw ParseError(line_no, "blank line inside schedule");
        toks.push_back(line);
    }
    auto s = from_tokens(toks, first);
    check_schedule(s);
    return s;
}

std::string write_schedule_file(const KeySchedule& s) {
    std::string out;
    for (auto v : s.keys) out += to_binary(v, s.key_bits) + '\n';
    return out;
}

}  // namespace mklock
