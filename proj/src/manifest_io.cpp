#include <json.hpp>

#include "mklock/error.hpp"
#include "mklock/lock_structural.hpp"

namespace mklock {

using ojson = nlohmann::ordered_json;

std::string write_manifest(const LockManifest& m) {
    ojson j;
    j["format"] = "mklock-structural-manifest/1";
    j["circuit"] = m.circuit;
    j["seed"] = m.seed;
    j["k"] = m.k();
    j["k_i"] = m.key_bits();
    j["layers"] = m.layers;
    j["schedule"] = ojson::array();
    for (auto v : m.schedule.keys) j["schedule"].push_back(to_binary(v, m.key_bits()));
    j["key_input_nets"] = m.key_input_nets;
    j["counter_state_nets"] = m.counter_state_nets;
    j["onehot_time_nets"] = m.onehot_time_nets;
    j["locked_ffs"] = ojson::array();
    for (const auto& ff : m.locked_ffs) {
        ojson f;
        f["ff_output_net"] = ff.ff_output_net;
        f["correct_d_net"] = ff.correct_d_net;
        f["mux_tree_output_net"] = ff.mux_tree_output_net;
        f["first_layer_nets"] = ff.first_layer_nets;
        f["wrongful_sources"] = ojson::array();
        for (const auto& s : ff.wrongful_sources) {
            f["wrongful_sources"].push_back({{"time", s.time}, {"key", to_binary(s.key, m.key_bits())}, {"net", s.net}});
        }
        j["locked_ffs"].push_back(std::move(f));
    }
    return j.dump(2) + "\n";
}

LockManifest parse_manifest(std::string_view text) {
    try {
        const auto j = ojson::parse(text);
        LockManifest m;
        m.circuit = j.at("circuit").get<std::string>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.layers = j.at("layers").get<unsigned>();
        m.schedule.key_bits = j.at("k_i").get<unsigned>();
        for (const auto& v : j.at("schedule")) {
            const auto s = v.get<std::string>();
            if (s.size() != m.schedule.key_bits) throw ParseError(0, "schedule entry width differs from k_i: " + s);
            m.schedule.keys.push_back(from_binary(s));
        }
        if (m.schedule.period() != j.at("k").get<std::size_t>()) throw ParseError(0, "schedule length differs from k");
        check_schedule(m.schedule);
        m.key_input_nets = j.at("key_input_nets").get<std::vector<std::string>>();
        m.counter_state_nets = j.at("counter_state_nets").get<std::vector<std::string>>();
        m.onehot_time_nets = j.at("onehot_time_nets").get<std::vector<std::string>>();
        for (const auto& f : j.at("locked_ffs")) {
            LockedFf ff;
            ff.ff_output_net = f.at("ff_output_net").get<std::string>();
            ff.correct_d_net = f.at("correct_d_net").get<std::string>();
            ff.mux_tree_output_net = f.at("mux_tree_output_net").get<std::string>();
            ff.first_layer_nets = f.at("first_layer_nets").get<std::vector<std::string>>();
            for (const auto& s : f.at("wrongful_sources")) {
                ff.wrongful_sources.push_back({s.at("time").get<std::size_t>(), from_binary(s.at("key").get<std::string>()),
                                               s.at("net").get<std::string>()});
            }
            m.locked_ffs.push_back(std::move(ff));
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, std::string("malformed manifest: ") + e.what());
    }
}

}  // namespace mklock
