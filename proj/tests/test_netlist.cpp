#include <gtest/gtest.h>

#include <algorithm>

#include "mklock/error.hpp"
#include "mklock/netlist.hpp"
#include "support.hpp"

using namespace mklock;

namespace {

const char* kS27 = R"(# s27
INPUT(G0)
INPUT(G1)
INPUT(G2)
INPUT(G3)
OUTPUT(G17)
G5 = DFF(G10)
G6 = DFF(G11)
G7 = DFF(G13)
G14 = NOT(G0)
G17 = NOT(G11)
G8 = AND(G14, G6)
G15 = OR(G12, G8)
G16 = OR(G3, G8)
G9 = NAND(G16, G15)
G10 = NOR(G14, G11)
G11 = NOR(G5, G9)
G12 = NOR(G1, G7)
G13 = NOR(G2, G12)
)";

std::size_t parse_error_line(const std::string& text) {
    try {
        (void)parse_bench(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

std::string parse_error_text(const std::string& text) {
    try {
        (void)parse_bench(text);
    } catch (const ParseError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(Bench, ParsesS27Counts) {
    const Netlist n = parse_bench(kS27, "s27");
    EXPECT_EQ(n.inputs.size(), 4u);
    EXPECT_EQ(n.outputs.size(), 1u);
    EXPECT_EQ(n.dffs.size(), 3u);
    EXPECT_EQ(n.gates.size(), 10u);
    EXPECT_TRUE(validate(n).empty());
    EXPECT_EQ(n.net_name(n.outputs[0]), "G17");
}

TEST(Bench, GateKindsAreCaseInsensitive) {
    const Netlist n = parse_bench("input(a)\ninput(b)\noutput(y)\nz = buff(a)\ny = Xnor(z, b)\n");
    ASSERT_EQ(n.gates.size(), 2u);
    EXPECT_EQ(n.gates[0].kind, GateKind::Buf);
    EXPECT_EQ(n.gates[1].kind, GateKind::Xnor);
}

TEST(Bench, AcceptsCrlfAndComments) {
    const Netlist n = parse_bench("INPUT(a)\r\nOUTPUT(y) # out\r\n# only a comment\r\ny = NOT(a)\r\n");
    EXPECT_EQ(n.gates.size(), 1u);
}

TEST(Bench, WriteParseIsFixedPoint) {
    const Netlist n = parse_bench(kS27, "s27");
    const std::string once = write_bench(n);
    const Netlist again = parse_bench(once, "s27");
    EXPECT_TRUE(structurally_equal(n, again));
    EXPECT_EQ(write_bench(again), once);
}

TEST(Bench, UndefinedFaninReportsFirstUse) {
    const std::string text = "INPUT(a)\nOUTPUT(y)\nz = NOT(a)\ny = AND(z, nowhere)\n";
    EXPECT_EQ(parse_error_line(text), 4u);
    EXPECT_NE(parse_error_text(text).find("undefined fanin: nowhere"), std::string::npos);
}

TEST(Bench, DuplicateDriverReportsSecondLine) {
    const std::string text = "INPUT(a)\nOUTPUT(y)\ny = NOT(a)\ny = BUF(a)\n";
    EXPECT_EQ(parse_error_line(text), 4u);
    EXPECT_NE(parse_error_text(text).find("duplicate driver: y"), std::string::npos);
}

TEST(Bench, DriverOnInputIsDuplicate) {
    EXPECT_EQ(parse_error_line("INPUT(a)\nOUTPUT(a)\na = NOT(a)\n"), 3u);
}

TEST(Bench, UnknownGateKind) {
    const std::string text = "INPUT(a)\nOUTPUT(y)\ny = MAJ(a, a, a)\n";
    EXPECT_EQ(parse_error_line(text), 3u);
    EXPECT_NE(parse_error_text(text).find("unknown gate kind: MAJ"), std::string::npos);
}

TEST(Bench, CombinationalCycleHasLine) {
    const std::string text = "INPUT(a)\nOUTPUT(y)\ny = AND(a, z)\nz = NOT(y)\n";
    EXPECT_GE(parse_error_line(text), 3u);
    EXPECT_NE(parse_error_text(text).find("combinational cycle"), std::string::npos);
}

TEST(Bench, CycleThroughFlipFlopIsFine) {
    const Netlist n = parse_bench("INPUT(a)\nOUTPUT(y)\nq = DFF(y)\ny = XOR(a, q)\n");
    EXPECT_TRUE(validate(n).empty());
}

TEST(Bench, BadArity) {
    EXPECT_EQ(parse_error_line("INPUT(a)\nOUTPUT(y)\ny = NOT(a, a)\n"), 3u);
    EXPECT_EQ(parse_error_line("INPUT(a)\nOUTPUT(y)\ny = AND(a)\n"), 3u);
}

TEST(Bench, SyntaxError) { EXPECT_EQ(parse_error_line("INPUT(a)\nOUTPUT(y)\ny NOT a\n"), 3u); }

TEST(Validate, ReportsEveryBrokenInvariant) {
    Netlist n = parse_bench(kS27, "s27");
    EXPECT_TRUE(validate(n).empty());

    Netlist dup = n;
    dup.gates.push_back(dup.gates.front());
    auto v = validate(dup);
    ASSERT_FALSE(v.empty());
    EXPECT_NE(v.front().message.find("duplicate driver"), std::string::npos);

    Netlist undriven = n;
    undriven.gates.erase(std::remove_if(undriven.gates.begin(), undriven.gates.end(),
                                        [&](const Gate& g) { return undriven.net_name(g.output) == "G17"; }),
                         undriven.gates.end());
    v = validate(undriven);
    ASSERT_FALSE(v.empty());
    EXPECT_NE(v.front().message.find("G17"), std::string::npos);

    Netlist arity = n;
    arity.gates.front().fanins.push_back(arity.gates.front().fanins.front());
    EXPECT_FALSE(validate(arity).empty());
}

TEST(Validate, LintFlagsDanglingNets) {
    const Netlist n = parse_bench("INPUT(a)\nOUTPUT(y)\ny = NOT(a)\nunused = BUF(a)\n");
    EXPECT_TRUE(validate(n).empty());
    const auto w = lint(n);
    ASSERT_EQ(w.size(), 1u);
    EXPECT_EQ(w[0].severity, Severity::Warning);
    EXPECT_EQ(w[0].net, "unused");
}

TEST(TopoOrder, FaninsComeFirst) {
    const Netlist n = parse_bench(kS27, "s27");
    const auto order = topo_order(n);
    ASSERT_EQ(order.size(), n.gates.size());
    std::vector<bool> ready(n.net_count(), false);
    for (NetId i : n.inputs) ready[i] = true;
    for (const auto& d : n.dffs) ready[d.output] = true;
    for (std::size_t gi : order) {
        for (NetId f : n.gates[gi].fanins) EXPECT_TRUE(ready[f]) << n.net_name(f);
        ready[n.gates[gi].output] = true;
    }
}

TEST(StructuralEquality, DetectsChangedDriver) {
    const Netlist a = parse_bench(kS27, "s27");
    Netlist b = a;
    EXPECT_TRUE(structurally_equal(a, b));
    b.gates[0].kind = GateKind::Buf;
    EXPECT_FALSE(structurally_equal(a, b));
}

TEST(Bench, CorpusRoundTrips) {
    for (const char* name : {"s27", "s13207", "b20"}) {
        const Netlist n = read_bench_file(testsupport::bench_path(name));
        EXPECT_TRUE(validate(n).empty()) << name;
        const std::string once = write_bench(n);
        EXPECT_EQ(write_bench(parse_bench(once, n.name)), once) << name;
    }
}

TEST(Bench, RandomNetlistsRoundTrip) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Netlist n = testsupport::random_netlist(seed, 1 + seed % 5, seed % 4, 5 + seed % 20, 1 + seed % 3);
        ASSERT_TRUE(validate(n).empty());
        const std::string once = write_bench(n);
        EXPECT_TRUE(structurally_equal(n, parse_bench(once, n.name)));
    }
}
