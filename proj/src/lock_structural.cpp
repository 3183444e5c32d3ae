#include "mklock/lock_structural.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "mklock/error.hpp"
#include "mklock/random.hpp"

namespace mklock {

void check_config(const LockConfig& cfg) {
    if (cfg.k < 2 || !is_power_of_two(cfg.k)) {
        throw ConfigError("k must be a power of two >= 2 (got " + std::to_string(cfg.k) + ")");
    }
    if (cfg.key_bits < 1 || cfg.key_bits > kMaxKeyBits) {
        throw ConfigError("k_i must be in [1, " + std::to_string(kMaxKeyBits) + "]");
    }
    if (cfg.num_locked_ffs < 1) throw ConfigError("at least one flip-flop must be locked");
    if (cfg.explicit_schedule) {
        check_schedule(*cfg.explicit_schedule);
        if (cfg.explicit_schedule->period() != cfg.k || cfg.explicit_schedule->key_bits != cfg.key_bits) {
            throw ConfigError("explicit schedule does not match k=" + std::to_string(cfg.k) +
                              ", k_i=" + std::to_string(cfg.key_bits));
        }
    }
    if (cfg.explicit_targets && cfg.explicit_targets->size() != cfg.num_locked_ffs) {
        throw ConfigError("explicit targets list has " + std::to_string(cfg.explicit_targets->size()) +
                          " entries, expected " + std::to_string(cfg.num_locked_ffs));
    }
}

CounterSpec counter_spec(std::size_t k) { return {log2_exact(k), k, 0}; }

unsigned mux_tree_layers(std::size_t k) { return log2_exact(k) + 1; }

std::size_t mux2_per_locked_ff(std::size_t k, unsigned key_bits) {
    return k * ((std::size_t{1} << key_bits) - 1) + (k - 1);
}

const std::string& LockedFf::wrongful_net(std::size_t time, std::uint64_t key) const {
    auto it = std::lower_bound(wrongful_sources.begin(), wrongful_sources.end(), std::pair{time, key},
                               [](const WrongfulSlot& s, const std::pair<std::size_t, std::uint64_t>& p) {
                                   return std::pair{s.time, s.key} < p;
                               });
    if (it == wrongful_sources.end() || it->time != time || it->key != key) {
        throw Error("no wrongful slot for time " + std::to_string(time) + ", key " + std::to_string(key));
    }
    return it->net;
}

std::vector<std::size_t> select_lock_targets(const Netlist& n, std::size_t count, std::uint64_t seed,
                                             const std::optional<std::vector<std::string>>& explicit_targets) {
    if (n.dffs.empty()) throw ConfigError("netlist has no flip-flops to lock");
    if (count > n.dffs.size()) {
        throw ConfigError("cannot lock " + std::to_string(count) + " flip-flops, netlist has " +
                          std::to_string(n.dffs.size()));
    }
    std::vector<std::size_t> picked;
    if (explicit_targets) {
        for (const auto& name : *explicit_targets) {
            const auto id = n.nets.find(name);
            auto it = id ? std::find_if(n.dffs.begin(), n.dffs.end(), [&](const Dff& d) { return d.output == *id; })
                         : n.dffs.end();
            if (it == n.dffs.end()) throw ConfigError("unknown lock target: " + name);
            const auto idx = static_cast<std::size_t>(it - n.dffs.begin());
            if (std::find(picked.begin(), picked.end(), idx) != picked.end()) {
                throw ConfigError("duplicate lock target: " + name);
            }
            picked.push_back(idx);
        }
        return picked;
    }
    std::vector<std::size_t> all(n.dffs.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    Rng rng(seed ^ 0x7461726765747321ULL);
    rng.shuffle(all);
    all.resize(count);
    return all;
}

std::vector<WrongfulSource> wrongful_sources(const Netlist& n, std::size_t target_dff, std::size_t time,
                                             std::size_t count_needed, std::uint64_t seed) {
    if (n.dffs.empty()) throw ConfigError("netlist has no flip-flops");
    const NetId correct = n.dffs.at(target_dff).input;

    std::vector<NetId> others;
    std::set<NetId> seen{correct};
    for (std::size_t i = 0; i < n.dffs.size(); ++i) {
        if (i != target_dff && seen.insert(n.dffs[i].input).second) others.push_back(n.dffs[i].input);
    }
    Rng rng(seed ^ (0x9e3779b97f4a7c15ULL * (target_dff + 1)));
    rng.shuffle(others);

    std::vector<WrongfulSource> out;
    out.reserve(count_needed);
    if (others.empty()) {
        out.assign(count_needed, WrongfulSource{correct, true});
        return out;
    }
    if (others.size() >= count_needed) {
        const std::size_t base = time * count_needed;
        for (std::size_t j = 0; j < count_needed; ++j) out.push_back({others[(base + j) % others.size()], false});
        return out;
    }
    for (std::size_t j = 0; j < others.size(); ++j) out.push_back({others[(time + j) % others.size()], false});
    while (out.size() < count_needed) out.push_back({correct, true});
    return out;
}

namespace {

class Builder {
public:
    explicit Builder(Netlist& n) : n_(n) {}

    NetId fresh(const std::string& name) {
        if (n_.nets.contains(name)) throw ConfigError("net name collision: " + name);
        return n_.nets.intern(name);
    }

    NetId gate(const std::string& name, GateKind kind, std::vector<NetId> fanins) {
        const NetId out = fresh(name);
        n_.gates.push_back({out, kind, std::move(fanins)});
        return out;
    }

    // OR(AND(a, NOT s), AND(b, s)): s = 1 selects b.
    NetId mux2(const std::string& name, NetId a, NetId b, NetId s, NetId s_n) {
        const NetId lo = gate(name + "_a", GateKind::And, {a, s_n});
        const NetId hi = gate(name + "_b", GateKind::And, {b, s});
        return gate(name, GateKind::Or, {lo, hi});
    }

private:
    Netlist& n_;
};

std::string idx(std::string_view prefix, std::size_t i) { return std::string(prefix) + std::to_string(i); }

}  // namespace

StructuralLock lock_structural(const Netlist& original, const LockConfig& cfg) {
    check_config(cfg);
    if (auto v = validate(original); !v.empty()) throw ConfigError("input netlist invalid: " + v.front().message);
    if (original.dffs.empty()) throw ConfigError("netlist has no flip-flops to lock");

    const std::size_t k = cfg.k;
    const unsigned ki = cfg.key_bits;
    const unsigned width = log2_exact(k);
    const std::size_t data_width = std::size_t{1} << std::min(ki, 62U);
    if (ki > 30) throw ConfigError("k_i = " + std::to_string(ki) + " needs more than 2^30 MUXes per flip-flop");
    if (const std::size_t need = mux2_per_locked_ff(k, ki) * cfg.num_locked_ffs; need > cfg.max_added_mux2) {
        throw ConfigError("lock needs " + std::to_string(need) + " 2-to-1 MUXes, above the limit of " +
                          std::to_string(cfg.max_added_mux2));
    }

    const auto targets = select_lock_targets(original, cfg.num_locked_ffs, cfg.seed, cfg.explicit_targets);
    KeySchedule schedule = cfg.explicit_schedule ? *cfg.explicit_schedule : generate_key_schedule(k, ki, cfg.seed);

    StructuralLock out{original, {}};
    Netlist& n = out.netlist;
    LockManifest& m = out.manifest;
    m.circuit = original.name;
    m.seed = cfg.seed;
    m.schedule = schedule;
    m.layers = width + 1;
    Builder b(n);

    // Shared key bus.
    std::vector<NetId> key(ki), key_n(ki);
    for (unsigned i = 0; i < ki; ++i) {
        key[i] = b.fresh(idx("keyinput", i));
        n.inputs.push_back(key[i]);
        m.key_input_nets.push_back(n.net_name(key[i]));
    }
    for (unsigned i = 0; i < ki; ++i) key_n[i] = b.gate(idx("cl_key_n", i), GateKind::Not, {key[i]});

    // Modulo-k counter: binary incrementer over `width` flip-flops.
    std::vector<NetId> q(width), carry(width);
    for (unsigned i = 0; i < width; ++i) {
        q[i] = b.fresh(idx("cl_cnt_q", i));
        m.counter_state_nets.push_back(n.net_name(q[i]));
    }
    for (unsigned i = 0; i < width; ++i) {
        NetId d;
        if (i == 0) {
            d = b.gate("cl_cnt_d0", GateKind::Not, {q[0]});
            carry[0] = q[0];
        } else {
            d = b.gate(idx("cl_cnt_d", i), GateKind::Xor, {q[i], carry[i - 1]});
            if (i + 1 < width) carry[i] = b.gate(idx("cl_cnt_c", i), GateKind::And, {q[i], carry[i - 1]});
        }
        n.dffs.push_back({q[i], d});
    }

    // One-hot decode t_j = (counter == j).
    std::vector<NetId> q_n(width), onehot(k);
    for (unsigned i = 0; i < width; ++i) q_n[i] = b.gate(idx("cl_cnt_n", i), GateKind::Not, {q[i]});
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<NetId> lits;
        for (unsigned i = 0; i < width; ++i) lits.push_back(((j >> i) & 1U) ? q[i] : q_n[i]);
        onehot[j] = b.gate(idx("cl_t", j), width == 1 ? GateKind::Buf : GateKind::And, std::move(lits));
        m.onehot_time_nets.push_back(n.net_name(onehot[j]));
    }

    // Counter-driven selects for layers 2..m. A node at layer L covering
    // first-layer outputs [lo, hi) picks its bottom half [mid, hi) when the
    // counter is in that range.
    struct Select {
        NetId s, s_n;
    };
    std::vector<std::vector<Select>> selects;  // [layer - 2][position]
    for (std::size_t span = 2; span <= k; span *= 2) {
        const auto layer = selects.size() + 2;
        std::vector<Select> row;
        for (std::size_t lo = 0; lo < k; lo += span) {
            const std::size_t mid = lo + span / 2;
            const auto pos = lo / span;
            const auto base = "cl_sel" + std::to_string(layer) + "_" + std::to_string(pos);
            NetId s;
            if (span == 2) {
                s = onehot[mid];
            } else {
                std::vector<NetId> times(onehot.begin() + static_cast<std::ptrdiff_t>(mid),
                                         onehot.begin() + static_cast<std::ptrdiff_t>(lo + span));
                s = b.gate(base, GateKind::Or, std::move(times));
            }
            row.push_back({s, b.gate(base + "_n", GateKind::Not, {s})});
        }
        selects.push_back(std::move(row));
    }

    const std::size_t wrong_slots = data_width - 1;
    for (std::size_t f = 0; f < targets.size(); ++f) {
        const std::size_t dff_index = targets[f];
        const NetId correct = original.dffs[dff_index].input;
        const auto prefix = idx("cl_f", f);
        LockedFf rec;
        rec.ff_output_net = n.net_name(original.dffs[dff_index].output);
        rec.correct_d_net = n.net_name(correct);

        std::optional<NetId> complement;
        auto resolve = [&](const WrongfulSource& src) {
            if (!src.complement) return src.net;
            if (!complement) complement = b.gate(prefix + "_inv", GateKind::Not, {correct});
            return *complement;
        };

        std::vector<NetId> level_nets;
        for (std::size_t t = 0; t < k; ++t) {
            const auto sources = wrongful_sources(original, dff_index, t, wrong_slots, cfg.seed);
            std::vector<NetId> data(data_width);
            std::size_t next = 0;
            for (std::uint64_t v = 0; v < data_width; ++v) {
                if (v == schedule.keys[t]) {
                    data[v] = correct;
                } else {
                    data[v] = resolve(sources[next++]);
                    rec.wrongful_sources.push_back({t, v, n.net_name(data[v])});
                }
            }
            // 2^k_i-to-1 over the key bus, key bit 0 at the deepest level.
            const auto mux_name = prefix + "_k" + std::to_string(t);
            for (unsigned bit = 0; bit < ki; ++bit) {
                std::vector<NetId> up(data.size() / 2);
                for (std::size_t p = 0; p < up.size(); ++p) {
                    const auto name = bit + 1 == ki ? mux_name
                                                    : mux_name + "_" + std::to_string(bit) + "_" + std::to_string(p);
                    up[p] = b.mux2(name, data[2 * p], data[2 * p + 1], key[bit], key_n[bit]);
                }
                data = std::move(up);
            }
            level_nets.push_back(data.front());
            rec.first_layer_nets.push_back(mux_name);
        }

        for (std::size_t layer = 0; layer < selects.size(); ++layer) {
            std::vector<NetId> up(level_nets.size() / 2);
            for (std::size_t p = 0; p < up.size(); ++p) {
                const auto& sel = selects[layer][p];
                const auto name = up.size() == 1 ? prefix + "_d"
                                                 : prefix + "_u" + std::to_string(layer + 2) + "_" + std::to_string(p);
                up[p] = b.mux2(name, level_nets[2 * p], level_nets[2 * p + 1], sel.s, sel.s_n);
            }
            level_nets = std::move(up);
        }
        n.dffs[dff_index].input = level_nets.front();
        rec.mux_tree_output_net = n.net_name(level_nets.front());
        m.locked_ffs.push_back(std::move(rec));
    }

    if (auto v = validate(n); !v.empty()) throw Error("internal: locked netlist invalid: " + v.front().message);
    return out;
}

std::vector<std::string> audit_manifest(const Netlist& locked, const LockManifest& m) {
    std::vector<std::string> problems;
    auto need = [&](const std::string& net) -> std::optional<NetId> {
        auto id = locked.nets.find(net);
        if (!id) problems.push_back("manifest net missing from netlist: " + net);
        return id;
    };
    if (m.key_input_nets.size() != m.key_bits()) problems.push_back("key bus width differs from k_i");
    for (const auto& net : m.key_input_nets) {
        if (auto id = need(net); id && !locked.is_input(*id)) problems.push_back("key net is not an input: " + net);
    }
    for (const auto& net : m.counter_state_nets) {
        auto id = need(net);
        if (id && std::none_of(locked.dffs.begin(), locked.dffs.end(), [&](const Dff& d) { return d.output == *id; })) {
            problems.push_back("counter net is not a flip-flop output: " + net);
        }
    }
    if (m.onehot_time_nets.size() != m.k()) problems.push_back("one-hot net count differs from k");
    for (const auto& net : m.onehot_time_nets) need(net);
    if (m.k() >= 2 && is_power_of_two(m.k()) && m.layers != mux_tree_layers(m.k())) {
        problems.push_back("layer count differs from log2(k) + 1");
    }
    const std::size_t slots = m.k() * ((std::uint64_t{1} << m.key_bits()) - 1);
    for (const auto& ff : m.locked_ffs) {
        auto q = need(ff.ff_output_net);
        auto root = need(ff.mux_tree_output_net);
        need(ff.correct_d_net);
        for (const auto& net : ff.first_layer_nets) need(net);
        if (ff.wrongful_sources.size() != slots) problems.push_back("wrong slot count for " + ff.ff_output_net);
        for (const auto& s : ff.wrongful_sources) {
            need(s.net);
            if (s.net == ff.correct_d_net) problems.push_back("wrongful slot wired to correct net: " + s.net);
        }
        if (q && root) {
            auto it = std::find_if(locked.dffs.begin(), locked.dffs.end(), [&](const Dff& d) { return d.output == *q; });
            if (it == locked.dffs.end() || it->input != *root) {
                problems.push_back("flip-flop " + ff.ff_output_net + " is not driven by its MUX tree");
            }
        }
    }
    return problems;
}

}  // namespace mklock
