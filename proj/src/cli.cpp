#include "mklock/cli.hpp"

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mklock/analysis.hpp"
#include "mklock/error.hpp"
#include "mklock/fsm.hpp"
#include "mklock/lock_behavioral.hpp"
#include "mklock/lock_structural.hpp"
#include "mklock/random.hpp"
#include "mklock/simulator.hpp"
#include "text_util.hpp"

namespace mklock {

namespace {

using ojson = nlohmann::ordered_json;

// Analytic failure: exit 1 with this diagnostic on stderr.
struct AnalyticFailure {
    ojson diagnostic;
};

struct ScheduleArgs {
    std::string keys;
    std::string keys_file;

    [[nodiscard]] std::optional<KeySchedule> load() const {
        if (!keys.empty()) return parse_key_list(keys);
        if (!keys_file.empty()) return parse_schedule_file(detail::read_file(keys_file));
        return std::nullopt;
    }
};

void add_schedule_options(CLI::App* cmd, ScheduleArgs& s) {
    auto* inline_keys = cmd->add_option("--keys", s.keys, "Key schedule as comma-separated MSB-first binary values");
    auto* file_keys = cmd->add_option("--keys-file", s.keys_file, "Key schedule file, one binary value per line");
    inline_keys->excludes(file_keys);
}

InitMode parse_init(const std::string& s) { return s == "x" ? InitMode::X : InitMode::Zero; }

bool is_kiss2_path(const std::string& path) {
    const auto ext = std::filesystem::path(path).extension().string();
    return ext == ".kiss2" || ext == ".kiss";
}

void emit(std::ostream& out, const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        out << content;
    } else {
        detail::write_file(path, content);
    }
}

ojson verdict_json(const EquivVerdict& v, const Netlist* data_ports_of, const LockPorts& ports) {
    ojson j;
    j["equivalent"] = v.equivalent;
    j["work"] = v.work;
    if (v.counterexample) {
        const auto& c = *v.counterexample;
        ojson cj;
        cj["cycle"] = c.cycle;
        cj["output"] = c.output;
        cj["expected"] = std::string(1, to_char(c.expected));
        cj["actual"] = std::string(1, to_char(c.actual));
        if (data_ports_of) {
            ojson names = ojson::array();
            for (NetId id : data_inputs(*data_ports_of, ports)) names.push_back(data_ports_of->net_name(id));
            cj["inputs"] = names;
        }
        ojson rows = ojson::array();
        for (const auto& row : c.stimulus.inputs) {
            std::string s;
            for (Logic v : row) s += to_char(v);
            rows.push_back(s);
        }
        cj["stimulus"] = rows;
        j["counterexample"] = cj;
    }
    return j;
}

struct LockStrArgs {
    std::string in, out, manifest, targets;
    std::size_t k = 4;
    unsigned ki = 2;
    std::size_t ffs = 1;
    std::uint64_t seed = 0;
    ScheduleArgs schedule;
};

int cmd_lock_str(const LockStrArgs& a, std::ostream& out) {
    const Netlist original = read_bench_file(a.in);
    LockConfig cfg;
    cfg.k = a.k;
    cfg.key_bits = a.ki;
    cfg.num_locked_ffs = a.ffs;
    cfg.seed = a.seed;
    cfg.explicit_schedule = a.schedule.load();
    if (!a.targets.empty()) {
        std::vector<std::string> names;
        std::string cur;
        for (char c : a.targets + ",") {
            if (c == ',') {
                if (!cur.empty()) names.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        cfg.num_locked_ffs = names.size();
        cfg.explicit_targets = names;
    }
    const auto lock = lock_structural(original, cfg);
    emit(out, a.out, write_bench(lock.netlist));
    if (!a.manifest.empty()) detail::write_file(a.manifest, write_manifest(lock.manifest));
    return 0;
}

struct LockBehArgs {
    std::string in, out, manifest;
    std::size_t k = 4;
    unsigned ki = 4;
    std::uint64_t seed = 0;
    ScheduleArgs schedule;
};

int cmd_lock_beh(const LockBehArgs& a, std::ostream& out) {
    const Fsm original = read_kiss2_file(a.in);
    BehLockConfig cfg;
    cfg.k = a.k;
    cfg.key_bits = a.ki;
    cfg.seed = a.seed;
    cfg.explicit_schedule = a.schedule.load();
    const auto lock = lock_behavioral(original, cfg);
    emit(out, a.out, write_kiss2(lock.fsm));
    if (!a.manifest.empty()) detail::write_file(a.manifest, write_beh_manifest(lock.manifest));
    return 0;
}

struct KeyPolicyArgs {
    std::string manifest;
    ScheduleArgs schedule;
    std::string static_key;
    std::string tamper;  // cycle=value,... with binary values

    // Schedule from explicit keys, else from the manifest.
    [[nodiscard]] std::optional<KeySchedule> schedule_or_manifest(const std::optional<LockManifest>& m) const {
        if (auto s = schedule.load()) return s;
        if (m) return m->schedule;
        return std::nullopt;
    }

    [[nodiscard]] KeyPolicy policy(const std::optional<LockManifest>& m, const LockPorts& ports) const {
        if (ports.key_inputs.empty()) {
            if (!static_key.empty() || !tamper.empty() || !schedule.keys.empty() || !schedule.keys_file.empty()) {
                throw ConfigError("key options given for a netlist without key inputs");
            }
            return NoKey{};
        }
        if (!static_key.empty()) return StaticKey{from_binary(static_key)};
        auto s = schedule_or_manifest(m);
        if (!s) throw ConfigError("locked netlist needs --manifest, --keys, --keys-file or --static-key");
        if (tamper.empty()) return CorrectKey{*s};
        TamperedKey t{*s, {}};
        std::string cur;
        for (char c : tamper + ",") {
            if (c != ',') {
                cur += c;
                continue;
            }
            if (cur.empty()) continue;
            const auto eq = cur.find('=');
            if (eq == std::string::npos) throw ConfigError("tamper entry must be cycle=binary: " + cur);
            std::size_t cycle = 0;
            try {
                cycle = std::stoul(cur.substr(0, eq));
            } catch (const std::exception&) {
                throw ConfigError("bad tamper cycle: " + cur);
            }
            t.overrides[cycle] = from_binary(cur.substr(eq + 1));
            cur.clear();
        }
        return t;
    }
};

void add_key_policy_options(CLI::App* cmd, KeyPolicyArgs& k) {
    cmd->add_option("--manifest", k.manifest, "Lock manifest (key ports and schedule)");
    add_schedule_options(cmd, k.schedule);
    cmd->add_option("--static-key", k.static_key, "Hold one binary key value at every cycle");
    cmd->add_option("--tamper", k.tamper, "Override the key at given cycles: cycle=binary,...");
}

std::optional<LockManifest> load_manifest(const std::string& path) {
    if (path.empty()) return std::nullopt;
    return parse_manifest(detail::read_file(path));
}

LockPorts ports_for(const Netlist& n, const std::optional<LockManifest>& m) {
    return m ? lock_ports(n, *m) : infer_lock_ports(n);
}

struct SimArgs {
    std::string in, stimulus, out, init = "zero";
    std::size_t random_cycles = 0;
    std::uint64_t seed = 0;
    KeyPolicyArgs key;
};

int cmd_sim(const SimArgs& a, std::ostream& out) {
    const Netlist n = read_bench_file(a.in);
    const auto manifest = load_manifest(a.key.manifest);
    const LockPorts ports = ports_for(n, manifest);
    const auto data = data_inputs(n, ports);
    Stimulus s;
    if (!a.stimulus.empty()) {
        s.inputs = parse_stimulus(detail::read_file(a.stimulus), data.size());
    } else {
        Rng rng(a.seed);
        for (std::size_t c = 0; c < a.random_cycles; ++c) {
            std::vector<Logic> row(data.size());
            for (auto& v : row) v = from_bool(rng.next() & 1U);
            s.inputs.push_back(std::move(row));
        }
    }
    s.cycles = s.inputs.size();
    s.key_policy = a.key.policy(manifest, ports);
    const Trace t = simulate(n, s, parse_init(a.init), ports);
    emit(out, a.out, trace_to_csv(n, t, ports));
    return 0;
}

struct VerifyArgs {
    std::string orig, locked, mode = "exhaustive", init = "zero", out;
    std::size_t depth = 6, sequences = 1000, cycles = 64;
    std::size_t budget = kDefaultBudget;
    std::uint64_t seed = 1;
    KeyPolicyArgs key;
};

int cmd_verify_kiss2(const VerifyArgs& a, std::ostream& out) {
    const Fsm original = read_kiss2_file(a.orig);
    const Fsm locked = read_kiss2_file(a.locked);
    std::optional<KeySchedule> schedule = a.key.schedule.load();
    if (!schedule && !a.key.manifest.empty()) schedule = parse_beh_manifest(detail::read_file(a.key.manifest)).schedule;
    if (!schedule) throw ConfigError("locked machine needs --manifest, --keys or --keys-file");
    if (a.mode != "exhaustive") throw ConfigError("KISS2 verification supports --mode exhaustive only");
    ojson j;
    j["equivalent"] = fsm_equivalent_exhaustive(original, locked, *schedule, a.depth);
    j["depth"] = a.depth;
    const std::string text = j.dump(2) + "\n";
    emit(out, a.out, text);
    if (!j["equivalent"].get<bool>()) throw AnalyticFailure{j};
    return 0;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
    if (is_kiss2_path(a.orig) || is_kiss2_path(a.locked)) return cmd_verify_kiss2(a, out);
    const Netlist original = read_bench_file(a.orig);
    const Netlist locked = read_bench_file(a.locked);
    const auto manifest = load_manifest(a.key.manifest);
    const LockPorts ports = ports_for(locked, manifest);
    const KeyPolicy policy = a.key.policy(manifest, ports);
    EquivOptions o;
    o.init = parse_init(a.init);
    o.budget = a.budget;
    const EquivalenceChecker checker(original, locked, ports, o);
    const EquivVerdict v = a.mode == "random" ? checker.random(a.sequences, a.cycles, a.seed, policy)
                                              : checker.exhaustive(a.depth, policy);
    ojson j = verdict_json(v, &locked, ports);
    j["mode"] = a.mode;
    if (a.mode == "random") {
        j["sequences"] = a.sequences;
        j["cycles"] = a.cycles;
        j["seed"] = a.seed;
    } else {
        j["depth"] = a.depth;
    }
    emit(out, a.out, j.dump(2) + "\n");
    if (!v.equivalent) throw AnalyticFailure{j};
    return 0;
}

struct AttackArgs {
    std::string orig, locked, manifest, mode = "bruteforce", equivalence = "auto", init = "zero", out;
    std::size_t k = 0, depth = 8, sequences = 256, cycles = 64, budget = kDefaultBudget;
    unsigned ki = 0;
    std::uint64_t seed = 1;
};

int cmd_attack(const AttackArgs& a, std::ostream& out, std::ostream& err) {
    const Netlist oracle = read_bench_file(a.orig);
    const Netlist locked = read_bench_file(a.locked);
    const auto manifest = load_manifest(a.manifest);
    const LockPorts ports = ports_for(locked, manifest);
    std::size_t k = a.k;
    unsigned ki = a.ki;
    if (manifest) {
        if (!k) k = manifest->k();
        if (!ki) ki = manifest->key_bits();
    }
    if (!ki) ki = static_cast<unsigned>(ports.key_inputs.size());
    if (!k && ports.counter_dffs.size() < 64) k = std::size_t{1} << ports.counter_dffs.size();
    if (ki != ports.key_inputs.size()) {
        throw ConfigError("k_i = " + std::to_string(ki) + " but the netlist has " +
                          std::to_string(ports.key_inputs.size()) + " key inputs");
    }
    AttackOptions o;
    o.depth = a.depth;
    o.budget = a.budget;
    o.init = parse_init(a.init);
    o.random_sequences = a.sequences;
    o.random_cycles = a.cycles;
    o.seed = a.seed;
    if (a.equivalence == "exhaustive") o.exhaustive = true;
    if (a.equivalence == "random") o.exhaustive = false;
    const AttackResult r = a.mode == "static" ? static_key_attack(locked, ports, oracle, ki, o)
                                              : brute_force_attack(locked, ports, oracle, k, ki, o);
    emit(out, a.out, write_attack_result(r));
    err << "elapsed_seconds " << r.elapsed_seconds << '\n';
    return 0;
}

struct ReportArgs {
    std::string orig, locked, manifest, format = "json", out;
};

int cmd_report(const ReportArgs& a, std::ostream& out) {
    const Netlist original = read_bench_file(a.orig);
    const Netlist locked = read_bench_file(a.locked);
    const LockManifest m = parse_manifest(detail::read_file(a.manifest));
    const OverheadReport r = overhead_report(original, locked, m);
    emit(out, a.out, a.format == "csv" ? overhead_csv_header() + overhead_csv_row(r) : write_overhead_report(r));
    return 0;
}

const char* error_kind(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e)) return "parse_error";
    if (dynamic_cast<const InterfaceMismatch*>(&e)) return "interface_mismatch";
    if (dynamic_cast<const BudgetExceeded*>(&e)) return "budget_exceeded";
    if (dynamic_cast<const ConfigError*>(&e)) return "config_error";
    if (dynamic_cast<const Error*>(&e)) return "error";
    return "internal_error";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Time-based multi-key logic locking toolkit", "mklock"};
    app.require_subcommand(1);
    const auto init_check = CLI::IsMember({"zero", "x"});

    LockStrArgs ls;
    auto* lock_str = app.add_subcommand("lock-str", "Lock a .bench netlist with a counter-driven MUX tree");
    lock_str->add_option("--in", ls.in, "Input .bench netlist")->required()->check(CLI::ExistingFile);
    lock_str->add_option("--out", ls.out, "Locked .bench output (stdout when omitted)");
    lock_str->add_option("--manifest", ls.manifest, "Manifest output path");
    lock_str->add_option("--k", ls.k, "Number of key values (power of two)")->check(CLI::PositiveNumber);
    lock_str->add_option("--ki", ls.ki, "Bits per key value")->check(CLI::PositiveNumber);
    lock_str->add_option("--ffs", ls.ffs, "Number of flip-flops to lock")->check(CLI::PositiveNumber);
    lock_str->add_option("--targets", ls.targets, "Comma-separated flip-flop output nets to lock");
    lock_str->add_option("--seed", ls.seed, "Seed for target, schedule and wiring choices");
    add_schedule_options(lock_str, ls.schedule);

    LockBehArgs lb;
    auto* lock_beh = app.add_subcommand("lock-beh", "Lock a KISS2 state machine with time-indexed keys");
    lock_beh->add_option("--in", lb.in, "Input KISS2 machine")->required()->check(CLI::ExistingFile);
    lock_beh->add_option("--out", lb.out, "Locked KISS2 output (stdout when omitted)");
    lock_beh->add_option("--manifest", lb.manifest, "Manifest output path");
    lock_beh->add_option("--k", lb.k, "Number of key values")->check(CLI::PositiveNumber);
    lock_beh->add_option("--ki", lb.ki, "Bits per key value")->check(CLI::PositiveNumber);
    lock_beh->add_option("--seed", lb.seed, "Seed for schedule and wrongful states");
    add_schedule_options(lock_beh, lb.schedule);

    SimArgs sa;
    auto* sim = app.add_subcommand("sim", "Cycle-accurate 3-valued simulation to a CSV trace");
    sim->add_option("--in", sa.in, "Netlist to simulate")->required()->check(CLI::ExistingFile);
    auto* stim = sim->add_option("--stimulus", sa.stimulus, "Input vectors, one per line")->check(CLI::ExistingFile);
    auto* rnd = sim->add_option("--random", sa.random_cycles, "Simulate this many seeded random cycles");
    stim->excludes(rnd);
    sim->add_option("--seed", sa.seed, "Seed for --random");
    sim->add_option("--init", sa.init, "Initial flip-flop state")->check(init_check);
    sim->add_option("--out", sa.out, "CSV output (stdout when omitted)");
    add_key_policy_options(sim, sa.key);

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Bounded sequential equivalence of original and locked designs");
    verify->add_option("--orig", va.orig, "Original .bench or KISS2")->required()->check(CLI::ExistingFile);
    verify->add_option("--locked", va.locked, "Locked .bench or KISS2")->required()->check(CLI::ExistingFile);
    verify->add_option("--mode", va.mode, "exhaustive or random")->check(CLI::IsMember({"exhaustive", "random"}));
    verify->add_option("--depth", va.depth, "Sequence length for exhaustive mode")->check(CLI::PositiveNumber);
    verify->add_option("--sequences", va.sequences, "Random sequences")->check(CLI::PositiveNumber);
    verify->add_option("--cycles", va.cycles, "Cycles per random sequence")->check(CLI::PositiveNumber);
    verify->add_option("--seed", va.seed, "Seed for random mode");
    verify->add_option("--budget", va.budget, "Exhaustive state-expansion budget")->check(CLI::PositiveNumber);
    verify->add_option("--init", va.init, "Initial flip-flop state")->check(init_check);
    verify->add_option("--out", va.out, "Verdict output (stdout when omitted)");
    add_key_policy_options(verify, va.key);

    AttackArgs aa;
    auto* attack = app.add_subcommand("attack", "Enumerate key candidates against an oracle");
    attack->add_option("--orig", aa.orig, "Oracle (original) netlist")->required()->check(CLI::ExistingFile);
    attack->add_option("--locked", aa.locked, "Locked netlist")->required()->check(CLI::ExistingFile);
    attack->add_option("--manifest", aa.manifest, "Manifest, used for key ports, k and k_i");
    attack->add_option("--mode", aa.mode, "bruteforce or static")->check(CLI::IsMember({"bruteforce", "static"}));
    attack->add_option("--k", aa.k, "Number of key values")->check(CLI::PositiveNumber);
    attack->add_option("--ki", aa.ki, "Bits per key value")->check(CLI::PositiveNumber);
    attack->add_option("--equivalence", aa.equivalence, "auto, exhaustive or random")
        ->check(CLI::IsMember({"auto", "exhaustive", "random"}));
    attack->add_option("--depth", aa.depth, "Exhaustive equivalence depth")->check(CLI::PositiveNumber);
    attack->add_option("--sequences", aa.sequences, "Random equivalence sequences")->check(CLI::PositiveNumber);
    attack->add_option("--cycles", aa.cycles, "Random equivalence cycles")->check(CLI::PositiveNumber);
    attack->add_option("--seed", aa.seed, "Seed for random equivalence");
    attack->add_option("--budget", aa.budget, "Largest candidate count")->check(CLI::PositiveNumber);
    attack->add_option("--init", aa.init, "Initial flip-flop state")->check(init_check);
    attack->add_option("--out", aa.out, "Result output (stdout when omitted)");

    ReportArgs ra;
    auto* report = app.add_subcommand("report", "Gate, flip-flop and I/O overhead of a structural lock");
    report->add_option("--orig", ra.orig, "Original netlist")->required()->check(CLI::ExistingFile);
    report->add_option("--locked", ra.locked, "Locked netlist")->required()->check(CLI::ExistingFile);
    report->add_option("--manifest", ra.manifest, "Lock manifest")->required()->check(CLI::ExistingFile);
    report->add_option("--format", ra.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    report->add_option("--out", ra.out, "Report output (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (lock_str->parsed()) return cmd_lock_str(ls, out);
        if (lock_beh->parsed()) return cmd_lock_beh(lb, out);
        if (sim->parsed()) return cmd_sim(sa, out);
        if (verify->parsed()) return cmd_verify(va, out);
        if (attack->parsed()) return cmd_attack(aa, out, err);
        if (report->parsed()) return cmd_report(ra, out);
    } catch (const AnalyticFailure& f) {
        ojson j;
        j["status"] = "not_equivalent";
        j["detail"] = f.diagnostic;
        err << j.dump() << '\n';
        return 1;
    } catch (const ConfigError& e) {
        ojson j;
        j["status"] = error_kind(e);
        j["message"] = e.what();
        err << j.dump() << '\n';
        return 2;
    } catch (const std::exception& e) {
        ojson j;
        j["status"] = error_kind(e);
        j["message"] = e.what();
        if (const auto* pe = dynamic_cast<const ParseError*>(&e)) j["line"] = pe->line();
        err << j.dump() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace mklock
