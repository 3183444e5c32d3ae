#include <gtest/gtest.h>

#include "mklock/error.hpp"
#include "mklock/fsm.hpp"
#include "mklock/key_schedule.hpp"
#include "support.hpp"

using namespace mklock;

namespace {

const char* kDetector = R"(.i 1
.o 1
.p 8
.s 4
.r A
0 A A 0
1 A B 0
0 B C 0
1 B B 0
0 C D 0
1 C B 0
0 D A 0
1 D B 1
.e
)";

std::size_t kiss_error_line(const std::string& text) {
    try {
        (void)parse_kiss2(text);
    } catch (const ParseError& e) {
        return e.line() + 1000;  // distinguish "threw with line 0" from "did not throw"
    }
    return 0;
}

}  // namespace

TEST(Kiss2, ParsesDetector) {
    const Fsm f = parse_kiss2(kDetector);
    EXPECT_EQ(f.input_width, 1u);
    EXPECT_EQ(f.output_width, 1u);
    EXPECT_EQ(f.states, (std::vector<std::string>{"A", "B", "C", "D"}));
    EXPECT_EQ(f.reset_state, "A");
    EXPECT_EQ(f.transitions.size(), 8u);
    EXPECT_TRUE(validate(f).empty());
}

TEST(Kiss2, DetectorFiresOn1001) {
    const Fsm f = parse_kiss2(kDetector);
    const auto run = simulate_fsm(f, {"1", "0", "0", "1", "0", "0", "1"});
    EXPECT_EQ(run.outputs, (std::vector<std::string>{"0", "0", "0", "1", "0", "0", "1"}));
    EXPECT_EQ(run.states.back(), "B");
}

TEST(Kiss2, ResetDefaultsToFirstState) {
    const Fsm f = parse_kiss2(".i 1\n.o 1\n0 s1 s2 0\n1 s1 s1 1\n- s2 s1 0\n");
    EXPECT_EQ(f.reset_state, "s1");
}

TEST(Kiss2, WriteParseIsFixedPoint) {
    const Fsm f = parse_kiss2(kDetector);
    const std::string once = write_kiss2(f);
    const Fsm again = parse_kiss2(once);
    EXPECT_TRUE(structurally_equal(f, again));
    EXPECT_EQ(write_kiss2(again), once);
}

TEST(Kiss2, RejectsNondeterminism) {
    EXPECT_NE(kiss_error_line(".i 1\n.o 1\n- A A 0\n1 A B 1\n0 B A 0\n"), 0u);
}

TEST(Kiss2, RejectsWrongCounts) {
    EXPECT_NE(kiss_error_line(".i 1\n.o 1\n.p 3\n0 A A 0\n1 A A 1\n"), 0u);
    EXPECT_NE(kiss_error_line(".i 1\n.o 1\n.s 3\n0 A A 0\n1 A A 1\n"), 0u);
}

TEST(Kiss2, RejectsBadPatternWithLine) {
    EXPECT_EQ(kiss_error_line(".i 2\n.o 1\n0 A A 0\n"), 1003u);
    EXPECT_EQ(kiss_error_line(".i 1\n.o 1\n0 A A 2\n"), 1003u);
}

TEST(Kiss2, RejectsUnknownReset) { EXPECT_NE(kiss_error_line(".i 1\n.o 1\n.r Z\n0 A A 0\n"), 0u); }

TEST(Kiss2, PatternHelpers) {
    EXPECT_TRUE(patterns_overlap("1-0", "110"));
    EXPECT_FALSE(patterns_overlap("1-0", "0--"));
    EXPECT_TRUE(pattern_matches("1-", "10"));
    EXPECT_FALSE(pattern_matches("1-", "00"));
}

TEST(Kiss2, SimulateThrowsWhenIncomplete) {
    const Fsm f = parse_kiss2(".i 1\n.o 1\n1 A A 0\n");
    EXPECT_THROW((void)simulate_fsm(f, {"0"}), Error);
}

TEST(Kiss2, CorpusRoundTrips) {
    for (const char* name : {"detector1001", "parity", "mod3", "traffic", "hold", "arbiter"}) {
        const Fsm f = read_kiss2_file(testsupport::kiss2_path(name));
        EXPECT_TRUE(validate(f).empty()) << name;
        const std::string once = write_kiss2(f);
        EXPECT_EQ(write_kiss2(parse_kiss2(once)), once) << name;
    }
}

TEST(Kiss2, RandomMachinesRoundTrip) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Fsm f = testsupport::random_fsm(seed, 1 + seed % 6, 1 + seed % 3, 1 + seed % 2);
        ASSERT_TRUE(validate(f).empty());
        EXPECT_TRUE(structurally_equal(f, parse_kiss2(write_kiss2(f))));
    }
}

TEST(KeySchedule, BinaryIsMsbFirst) {
    EXPECT_EQ(to_binary(1, 2), "01");
    EXPECT_EQ(to_binary(6, 3), "110");
    EXPECT_EQ(from_binary("110"), 6u);
    EXPECT_THROW((void)from_binary("12"), ParseError);
}

TEST(KeySchedule, KeyListRoundTrip) {
    const KeySchedule s = parse_key_list("01,11,10,00");
    EXPECT_EQ(s.key_bits, 2u);
    EXPECT_EQ(s.keys, (std::vector<std::uint64_t>{1, 3, 2, 0}));
    EXPECT_EQ(format_key_list(s), "01,11,10,00");
    EXPECT_FALSE(s.is_constant());
    EXPECT_TRUE(parse_key_list("11,11,11,11").is_constant());
    EXPECT_EQ(s.at_cycle(5), 3u);
}

TEST(KeySchedule, RejectsMixedWidthsAndShortSchedules) {
    EXPECT_THROW((void)parse_key_list("01,1"), Error);
    EXPECT_THROW((void)parse_key_list("01"), ConfigError);
}

TEST(KeySchedule, FileRoundTrip) {
    const KeySchedule s = parse_key_list("001,111,010");
    const std::string text = write_schedule_file(s);
    EXPECT_EQ(text, "001\n111\n010\n");
    EXPECT_EQ(parse_schedule_file(text), s);
}

TEST(KeySchedule, GenerationIsSeededAndInRange) {
    const auto a = generate_key_schedule(8, 5, 42);
    EXPECT_EQ(a, generate_key_schedule(8, 5, 42));
    EXPECT_EQ(a.period(), 8u);
    for (auto v : a.keys) EXPECT_LT(v, 32u);
    EXPECT_NE(a, generate_key_schedule(8, 5, 43));
}

TEST(KeySchedule, Log2Exact) {
    EXPECT_EQ(log2_exact(1), 0u);
    EXPECT_EQ(log2_exact(16), 4u);
    EXPECT_THROW((void)log2_exact(12), ConfigError);
}
