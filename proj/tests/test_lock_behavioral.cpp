#include <gtest/gtest.h>

#include "mklock/analysis.hpp"
#include "mklock/error.hpp"
#include "mklock/lock_behavioral.hpp"
#include "support.hpp"

using namespace mklock;

namespace {

Fsm detector() { return read_kiss2_file(testsupport::kiss2_path("detector1001")); }

BehLockConfig detector_config() {
    BehLockConfig cfg;
    cfg.k = 4;
    cfg.key_bits = 4;
    cfg.seed = 5;
    cfg.explicit_schedule = parse_key_list("0001,0011,0010,0000");
    return cfg;
}

std::string bits(std::uint64_t x, std::size_t width) {
    std::string s;
    for (std::size_t i = 0; i < width; ++i) s += ((x >> i) & 1U) ? '1' : '0';
    return s;
}

}  // namespace

TEST(WrongKeyCubes, CoverEveryOtherValueExactlyOnce) {
    for (unsigned ki : {1u, 2u, 3u, 5u}) {
        for (std::uint64_t key = 0; key < (std::uint64_t{1} << ki); ++key) {
            const auto cubes = wrong_key_cubes(key, ki);
            EXPECT_EQ(cubes.size(), ki);
            for (std::uint64_t v = 0; v < (std::uint64_t{1} << ki); ++v) {
                int hits = 0;
                for (const auto& c : cubes) hits += pattern_matches(c, to_binary(v, ki));
                EXPECT_EQ(hits, v == key ? 0 : 1) << "ki=" << ki << " key=" << key << " v=" << v;
            }
        }
    }
}

TEST(BehavioralLock, DetectorShape) {
    const auto lock = lock_behavioral(detector(), detector_config());
    EXPECT_EQ(lock.fsm.states.size(), 16u);
    EXPECT_EQ(lock.fsm.input_width, 5u);
    EXPECT_EQ(lock.fsm.output_width, 1u);
    EXPECT_EQ(lock.fsm.reset_state, timed_state_name("A", 0));
    // One correct transition plus k_i wrong-key cubes per original
    // transition and time.
    EXPECT_EQ(lock.fsm.transitions.size(), 4u * 8u * (1u + 4u));
    EXPECT_TRUE(validate(lock.fsm).empty());
    EXPECT_EQ(keyed_input(3, 4, "1"), "00111");
}

TEST(BehavioralLock, CorrectKeyMatchesOriginalOnRandomRuns) {
    const Fsm f = detector();
    const auto lock = lock_behavioral(f, detector_config());
    Rng rng(1);
    for (int run = 0; run < 50; ++run) {
        std::vector<std::string> xs, keyed;
        for (std::size_t c = 0; c < 40; ++c) {
            xs.push_back(rng.next() & 1U ? "1" : "0");
            keyed.push_back(keyed_input(lock.manifest.schedule.at_cycle(c), 4, xs.back()));
        }
        const auto a = simulate_fsm(f, xs);
        const auto b = simulate_fsm(lock.fsm, keyed);
        EXPECT_EQ(a.outputs, b.outputs);
        for (std::size_t c = 0; c < xs.size(); ++c) {
            EXPECT_EQ(b.states[c], timed_state_name(a.states[c], (c + 1) % 4));
        }
    }
}

TEST(BehavioralLock, ExhaustiveEquivalenceOnCorpus) {
    for (const char* name : {"detector1001", "parity", "mod3", "traffic", "arbiter", "hold"}) {
        const Fsm f = read_kiss2_file(testsupport::kiss2_path(name));
        for (std::size_t k : {2u, 3u, 4u}) {
            BehLockConfig cfg;
            cfg.k = k;
            cfg.key_bits = 3;
            cfg.seed = k;
            const auto lock = lock_behavioral(f, cfg);
            EXPECT_TRUE(fsm_equivalent_exhaustive(f, lock.fsm, lock.manifest.schedule, 8)) << name << " k=" << k;
        }
    }
}

TEST(BehavioralLock, WrongKeyStepDivertsToWrongfulState) {
    const Fsm f = detector();
    const auto lock = lock_behavioral(f, detector_config());
    const auto& sched = lock.manifest.schedule;
    Rng rng(3);
    for (std::size_t step = 0; step < 8; ++step) {
        std::vector<std::string> xs;
        for (std::size_t c = 0; c <= step; ++c) xs.push_back(rng.next() & 1U ? "1" : "0");
        const auto ref = simulate_fsm(f, xs);
        for (std::uint64_t v = 0; v < 16; ++v) {
            if (v == sched.at_cycle(step)) continue;
            std::vector<std::string> keyed;
            for (std::size_t c = 0; c <= step; ++c) {
                keyed.push_back(keyed_input(c == step ? v : sched.at_cycle(c), 4, xs[c]));
            }
            const auto run = simulate_fsm(lock.fsm, keyed);
            const std::string from = step ? ref.states[step - 1] : f.reset_state;
            for (std::size_t c = 0; c < step; ++c) EXPECT_EQ(run.states[c], timed_state_name(ref.states[c], (c + 1) % 4));
            const auto& w = lock.manifest.wrongful_state(from, step % 4, xs[step]);
            EXPECT_NE(w, ref.states[step]);
            EXPECT_EQ(run.states[step], timed_state_name(w, (step + 1) % 4));
        }
    }
}

TEST(BehavioralLock, WrongKeysCorruptOutputs) {
    const Fsm f = detector();
    const auto lock = lock_behavioral(f, detector_config());
    const auto tamper = wrong_key_every_cycle(lock.manifest.schedule, 64, 9);
    EXPECT_GT(fsm_corruption_rate(f, lock.fsm, tamper, 200, 64, 1), 0.0);
    EXPECT_EQ(fsm_corruption_rate(f, lock.fsm, TamperedKey{lock.manifest.schedule, {}}, 200, 64, 1), 0.0);
}

TEST(BehavioralLock, RandomMachinesStayEquivalent) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Fsm f = testsupport::random_fsm(seed, 2 + seed % 5, 1 + seed % 2, 2);
        BehLockConfig cfg;
        cfg.k = 2 + seed % 4;
        cfg.key_bits = 1 + seed % 3;
        cfg.seed = seed;
        const auto lock = lock_behavioral(f, cfg);
        EXPECT_TRUE(validate(lock.fsm).empty());
        EXPECT_EQ(lock.fsm.states.size(), f.states.size() * cfg.k);
        EXPECT_TRUE(fsm_equivalent_exhaustive(f, lock.fsm, lock.manifest.schedule, 6)) << seed;
        // A different schedule of the same shape must not pass unless it is
        // identical on the first steps.
        KeySchedule other = lock.manifest.schedule;
        other.keys[0] ^= 1;
        bool some_wrong_path = false;
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << f.input_width); ++x) {
            const auto a = simulate_fsm(lock.fsm, {keyed_input(other.keys[0], cfg.key_bits, bits(x, f.input_width))});
            const auto b = simulate_fsm(lock.fsm, {keyed_input(lock.manifest.schedule.keys[0], cfg.key_bits,
                                                                bits(x, f.input_width))});
            some_wrong_path |= a.states[0] != b.states[0];
        }
        EXPECT_TRUE(some_wrong_path);
    }
}

TEST(BehavioralLock, ManifestRoundTrip) {
    const auto lock = lock_behavioral(detector(), detector_config());
    const std::string text = write_beh_manifest(lock.manifest);
    const BehManifest back = parse_beh_manifest(text);
    EXPECT_EQ(write_beh_manifest(back), text);
    EXPECT_EQ(back.locked_state("C", 2), timed_state_name("C", 2));
}

TEST(BehavioralLock, KissRoundTripOfLockedMachine) {
    const auto lock = lock_behavioral(detector(), detector_config());
    const std::string once = write_kiss2(lock.fsm);
    EXPECT_EQ(write_kiss2(parse_kiss2(once)), once);
}

TEST(BehavioralLock, SingleStateMachineKeepsItsState) {
    const Fsm f = read_kiss2_file(testsupport::kiss2_path("hold"));
    BehLockConfig cfg;
    cfg.k = 2;
    cfg.key_bits = 2;
    const auto lock = lock_behavioral(f, cfg);
    EXPECT_EQ(lock.fsm.states.size(), 2u);
    for (const auto& e : lock.manifest.wrongful_map) EXPECT_EQ(e.wrongful_state, "only");
}

TEST(BehavioralLock, ConfigErrors) {
    BehLockConfig cfg;
    cfg.k = 1;
    EXPECT_THROW((void)lock_behavioral(detector(), cfg), ConfigError);
    cfg.k = 4;
    cfg.key_bits = 0;
    EXPECT_THROW((void)lock_behavioral(detector(), cfg), ConfigError);
    cfg.key_bits = 2;
    cfg.explicit_schedule = parse_key_list("01,10,11");
    EXPECT_THROW((void)lock_behavioral(detector(), cfg), ConfigError);
}
