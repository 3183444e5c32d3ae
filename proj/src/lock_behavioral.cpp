#include "mklock/lock_behavioral.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "mklock/error.hpp"
#include "mklock/random.hpp"

namespace mklock {

std::string timed_state_name(std::string_view s, std::size_t t) {
    return std::string(s) + "@" + std::to_string(t);
}

std::vector<std::string> wrong_key_cubes(std::uint64_t key, unsigned key_bits) {
    const auto bits = to_binary(key, key_bits);
    std::vector<std::string> cubes;
    cubes.reserve(key_bits);
    for (unsigned j = 0; j < key_bits; ++j) {
        std::string cube = bits.substr(0, j);
        cube += bits[j] == '0' ? '1' : '0';
        cube.append(key_bits - j - 1, '-');
        cubes.push_back(std::move(cube));
    }
    return cubes;
}

std::string keyed_input(std::uint64_t key, unsigned key_bits, std::string_view x) {
    return to_binary(key, key_bits) + std::string(x);
}

const std::string& BehManifest::locked_state(std::string_view state, std::size_t time) const {
    for (const auto& e : state_map) {
        if (e.state == state && e.time == time) return e.locked_state;
    }
    throw Error("no locked state for " + std::string(state) + " at time " + std::to_string(time));
}

const std::string& BehManifest::wrongful_state(std::string_view state, std::size_t time,
                                               std::string_view input_pattern) const {
    for (const auto& e : wrongful_map) {
        if (e.state == state && e.time == time && e.input == input_pattern) return e.wrongful_state;
    }
    throw Error("no wrongful entry for " + std::string(state) + " at time " + std::to_string(time));
}

BehavioralLock lock_behavioral(const Fsm& f, const BehLockConfig& cfg) {
    if (cfg.k < 2) throw ConfigError("k must be at least 2");
    if (cfg.key_bits < 1 || cfg.key_bits > kMaxKeyBits) {
        throw ConfigError("k_i must be in [1, " + std::to_string(kMaxKeyBits) + "]");
    }
    if (auto problems = validate(f); !problems.empty()) throw ConfigError("input machine invalid: " + problems.front());
    KeySchedule schedule = cfg.explicit_schedule ? *cfg.explicit_schedule
                                                 : generate_key_schedule(cfg.k, cfg.key_bits, cfg.seed);
    check_schedule(schedule);
    if (schedule.period() != cfg.k || schedule.key_bits != cfg.key_bits) {
        throw ConfigError("explicit schedule does not match k=" + std::to_string(cfg.k) +
                          ", k_i=" + std::to_string(cfg.key_bits));
    }

    const std::size_t k = cfg.k;
    BehavioralLock out;
    Fsm& locked = out.fsm;
    BehManifest& m = out.manifest;
    m.schedule = schedule;
    locked.input_width = f.input_width + cfg.key_bits;
    locked.output_width = f.output_width;
    locked.reset_state = timed_state_name(f.reset_state, 0);

    std::set<std::string> names;
    for (std::size_t t = 0; t < k; ++t) {
        for (const auto& s : f.states) {
            auto name = timed_state_name(s, t);
            if (!names.insert(name).second) throw ConfigError("state name collision: " + name);
            m.state_map.push_back({s, t, name});
            locked.states.push_back(std::move(name));
        }
    }

    Rng rng(cfg.seed ^ 0x77726f6e6766756cULL);
    for (std::size_t t = 0; t < k; ++t) {
        const std::size_t next_t = (t + 1) % k;
        const auto correct_key = to_binary(schedule.keys[t], cfg.key_bits);
        const auto cubes = wrong_key_cubes(schedule.keys[t], cfg.key_bits);
        for (const auto& tr : f.transitions) {
            std::string wrongful = tr.to;
            if (f.states.size() > 1) {
                auto pick = rng.below(f.states.size() - 1);
                const auto correct_index = static_cast<std::size_t>(
                    std::find(f.states.begin(), f.states.end(), tr.to) - f.states.begin());
                if (pick >= correct_index) ++pick;
                wrongful = f.states[pick];
            }
            m.wrongful_map.push_back({tr.from, t, tr.input, wrongful});

            const auto from = timed_state_name(tr.from, t);
            locked.transitions.push_back({correct_key + tr.input, from, timed_state_name(tr.to, next_t), tr.output});
            for (const auto& cube : cubes) {
                locked.transitions.push_back({cube + tr.input, from, timed_state_name(wrongful, next_t), tr.output});
            }
        }
    }
    if (auto problems = validate(locked); !problems.empty()) {
        throw Error("internal: locked machine invalid: " + problems.front());
    }
    return out;
}

using ojson = nlohmann::ordered_json;

std::string write_beh_manifest(const BehManifest& m) {
    ojson j;
    j["format"] = "mklock-behavioral-manifest/1";
    j["k"] = m.schedule.period();
    j["k_i"] = m.schedule.key_bits;
    j["schedule"] = ojson::array();
    for (auto v : m.schedule.keys) j["schedule"].push_back(to_binary(v, m.schedule.key_bits));
    j["state_map"] = ojson::array();
    for (const auto& e : m.state_map) {
        j["state_map"].push_back({{"state", e.state}, {"time", e.time}, {"locked_state", e.locked_state}});
    }
    j["wrongful_map"] = ojson::array();
    for (const auto& e : m.wrongful_map) {
        j["wrongful_map"].push_back(
            {{"state", e.state}, {"time", e.time}, {"input", e.input}, {"wrongful_state", e.wrongful_state}});
    }
    return j.dump(2) + "\n";
}

BehManifest parse_beh_manifest(std::string_view text) {
    try {
        const auto j = ojson::parse(text);
        BehManifest m;
        m.schedule.key_bits = j.at("k_i").get<unsigned>();
        for (const auto& v : j.at("schedule")) m.schedule.keys.push_back(from_binary(v.get<std::string>()));
        check_schedule(m.schedule);
        for (const auto& e : j.at("state_map")) {
            m.state_map.push_back({e.at("state").get<std::string>(), e.at("time").get<std::size_t>(),
                                   e.at("locked_state").get<std::string>()});
        }
        for (const auto& e : j.at("wrongful_map")) {
            m.wrongful_map.push_back({e.at("state").get<std::string>(), e.at("time").get<std::size_t>(),
                                      e.at("input").get<std::string>(), e.at("wrongful_state").get<std::string>()});
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, std::string("malformed manifest: ") + e.what());
    }
}

}  // namespace mklock
