#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mklock/cli.hpp"
#include "support.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "mklock");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = mklock::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("mklock_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    // Locks s27 with the fixed schedule into locked.bench and lock.json.
    void lock_s27(const std::string& keys = "01,11,10,00") {
        const auto r = run({"lock-str", "--in", s27_, "--out", path("locked.bench"), "--manifest", path("lock.json"),
                            "--k", "4", "--ki", "2", "--seed", "7", "--keys", keys});
        ASSERT_EQ(r.code, 0) << r.err;
    }

    fs::path dir_;
    std::string s27_ = testsupport::bench_path("s27");
};

}  // namespace

TEST_F(Cli, LockVerifyAttackReport) {
    lock_s27();
    auto v = run({"verify", "--orig", s27_, "--locked", path("locked.bench"), "--manifest", path("lock.json"),
                  "--depth", "6"});
    EXPECT_EQ(v.code, 0) << v.err;
    EXPECT_NE(v.out.find("\"equivalent\": true"), std::string::npos);

    v = run({"verify", "--orig", s27_, "--locked", path("locked.bench"), "--manifest", path("lock.json"), "--mode",
             "random", "--sequences", "200", "--cycles", "32"});
    EXPECT_EQ(v.code, 0) << v.err;

    v = run({"verify", "--orig", s27_, "--locked", path("locked.bench"), "--manifest", path("lock.json"),
             "--static-key", "01"});
    EXPECT_EQ(v.code, 1);
    EXPECT_NE(v.err.find("\"status\":\"not_equivalent\""), std::string::npos);
    EXPECT_NE(v.out.find("\"counterexample\""), std::string::npos);

    const auto a = run({"attack", "--orig", s27_, "--locked", path("locked.bench"), "--manifest", path("lock.json")});
    EXPECT_EQ(a.code, 0) << a.err;
    EXPECT_NE(a.out.find("\"01,11,10,00\""), std::string::npos);
    EXPECT_NE(a.err.find("elapsed_seconds"), std::string::npos);

    const auto s = run({"attack", "--orig", s27_, "--locked", path("locked.bench"), "--mode", "static"});
    EXPECT_EQ(s.code, 0) << s.err;

    const auto r = run({"report", "--orig", s27_, "--locked", path("locked.bench"), "--manifest", path("lock.json"),
                        "--format", "csv"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.substr(0, 8), "circuit,");
}

TEST_F(Cli, OutputsAreByteDeterministic) {
    lock_s27();
    const std::string first = slurp(path("locked.bench")) + slurp(path("lock.json"));
    const auto again = run({"lock-str", "--in", s27_, "--k", "4", "--ki", "2", "--seed", "7", "--keys", "01,11,10,00"});
    EXPECT_EQ(again.out, slurp(path("locked.bench")));
    lock_s27();
    EXPECT_EQ(slurp(path("locked.bench")) + slurp(path("lock.json")), first);

    const auto a1 = run({"attack", "--orig", s27_, "--locked", path("locked.bench"), "--manifest", path("lock.json")});
    const auto a2 = run({"attack", "--orig", s27_, "--locked", path("locked.bench"), "--manifest", path("lock.json")});
    EXPECT_EQ(a1.out, a2.out);
}

TEST_F(Cli, SimulationWithKeys) {
    lock_s27();
    {
        std::ofstream f(path("stim.txt"));
        f << "0101\n1010\n1100\n1110\n";
    }
    const auto plain = run({"sim", "--in", s27_, "--stimulus", path("stim.txt"), "--init", "x"});
    ASSERT_EQ(plain.code, 0) << plain.err;
    EXPECT_EQ(plain.out.substr(0, plain.out.find('\n')), "cycle,G0,G1,G2,G3,G17");
    const auto locked = run({"sim", "--in", path("locked.bench"), "--stimulus", path("stim.txt"), "--manifest",
                             path("lock.json"), "--init", "x"});
    ASSERT_EQ(locked.code, 0) << locked.err;
    EXPECT_NE(locked.out.find("key"), std::string::npos);
    const auto rnd = run({"sim", "--in", s27_, "--random", "10", "--seed", "3"});
    EXPECT_EQ(rnd.code, 0);
    EXPECT_EQ(std::count(rnd.out.begin(), rnd.out.end(), '\n'), 11);
}

TEST_F(Cli, BehavioralLockAndVerify) {
    const std::string det = testsupport::kiss2_path("detector1001");
    const auto l = run({"lock-beh", "--in", det, "--out", path("det.kiss2"), "--manifest", path("det.json"), "--k", "4",
                        "--ki", "4", "--keys", "0001,0011,0010,0000"});
    ASSERT_EQ(l.code, 0) << l.err;
    const auto v = run({"verify", "--orig", det, "--locked", path("det.kiss2"), "--manifest", path("det.json"),
                        "--depth", "8"});
    EXPECT_EQ(v.code, 0) << v.err;
    const auto w = run({"verify", "--orig", det, "--locked", path("det.kiss2"), "--keys", "0001,0011,0010,0001",
                        "--depth", "8"});
    EXPECT_EQ(w.code, 1);
}

TEST_F(Cli, ExitCodes) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"lock-str"}).code, 2);
    EXPECT_EQ(run({"lock-str", "--in", s27_, "--k", "3"}).code, 2);
    EXPECT_EQ(run({"lock-str", "--in", s27_, "--keys", "01", "--keys-file", s27_}).code, 2);
    EXPECT_EQ(run({"verify", "--orig", s27_, "--locked", s27_, "--mode", "fuzzy"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
    {
        std::ofstream f(path("bad.bench"));
        f << "INPUT(a)\nOUTPUT(z)\nz = FOO(a)\n";
    }
    const auto bad = run({"sim", "--in", path("bad.bench"), "--random", "2"});
    EXPECT_EQ(bad.code, 1);
    EXPECT_NE(bad.err.find("\"line\":3"), std::string::npos);
}
