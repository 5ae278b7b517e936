#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "duosim/trace.hpp"

using namespace duosim;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result cli(std::vector<std::string> args) {
    args.insert(args.begin(), "duosim");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("duosim_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    fs::path dir_;
};

}  // namespace

TEST_F(CliTest, RunWritesAllRounds) {
    const auto r = cli({"run", "--scheme", "defection-free", "--loss", "quadratic", "--rounds", "200",
                        "--seed", "7", "--out", path("t.csv")});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    const Trace t = read_trace(path("t.csv"));
    EXPECT_EQ(t.records.size(), 201u);
    EXPECT_EQ(t.config.seed, 7u);
}

TEST_F(CliTest, CompleteThenAudit) {
    ASSERT_EQ(cli({"run", "--scheme", "complete", "--rounds", "1000", "--out", path("c.csv")}).code, kExitOk);
    const auto r = cli({"audit", path("c.csv")});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("terminal_utilities"), std::string::npos);
    const Trace t = read_trace(path("c.csv"));
    EXPECT_LE(std::max(t.records.back().u_l, t.records.back().u_h), 1e-3);
}

TEST_F(CliTest, MissingOutIsConfigError) {
    const auto r = cli({"run", "--scheme", "complete"});
    EXPECT_EQ(r.code, kExitConfig);
    EXPECT_NE(r.err.find("--out"), std::string::npos);
}

TEST_F(CliTest, BadFlagsAreConfigErrors) {
    EXPECT_EQ(cli({"run", "--scheme", "sideways", "--out", path("x.csv")}).code, kExitConfig);
    EXPECT_EQ(cli({"run", "--rounds", "0", "--out", path("x.csv")}).code, kExitConfig);
    EXPECT_EQ(cli({"run", "--config", path("missing.json"), "--out", path("x.csv")}).code, kExitConfig);
    EXPECT_EQ(cli({"frobnicate"}).code, kExitConfig);
    EXPECT_EQ(cli({}).code, kExitConfig);
    EXPECT_EQ(cli({"audit", path("missing.csv")}).code, kExitConfig);
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
    {
        std::ofstream f(path("cfg.json"));
        f << R"({"scheme":"one-sided-low","rounds":40,"seed":3,"format":"json","out":")" << path("from_cfg.json")
          << "\"}";
    }
    auto r = cli({"run", "--config", path("cfg.json")});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    Trace t = read_trace(path("from_cfg.json"));
    EXPECT_EQ(t.config.scheme, Scheme::one_sided_low);
    EXPECT_EQ(t.records.size(), 41u);

    r = cli({"run", "--config", path("cfg.json"), "--rounds", "10", "--format", "csv", "--out", path("o.csv")});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    t = read_trace(path("o.csv"));
    EXPECT_EQ(t.records.size(), 11u);
    EXPECT_EQ(t.config.seed, 3u);
}

TEST_F(CliTest, AuditFlagsTamperedTrace) {
    ASSERT_EQ(cli({"run", "--rounds", "50", "--out", path("d.csv")}).code, kExitOk);
    Trace t = read_trace(path("d.csv"));
    t.records[10].u_h -= 0.01;
    write_trace(t, path("bad.csv"), TraceFormat::csv);
    const auto r = cli({"audit", path("bad.csv")});
    EXPECT_EQ(r.code, kExitAudit);
    EXPECT_NE(r.err.find("round 10"), std::string::npos) << r.err;
}

TEST_F(CliTest, NashAndTildeB) {
    auto r = cli({"nash", "--ql0", "0.6", "--qh0", "0.6", "--qhmax", "1"});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_NE(r.out.find("q_l* 0.4244"), std::string::npos) << r.out;
    EXPECT_EQ(cli({"nash", "--ql0", "0.7", "--qh0", "0.6"}).code, kExitConfig);
    r = cli({"tilde-b"});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_NE(r.out.find("tilde_b 1.0"), std::string::npos) << r.out;
    EXPECT_EQ(cli({"--help"}).code, kExitOk);
}

TEST_F(CliTest, LogisticRun) {
    const auto r = cli({"run", "--loss", "logistic", "--dim", "3", "--rounds", "50", "--out", path("l.json"),
                        "--format", "json"});
    EXPECT_NE(r.code, kExitConfig) << r.err;
    EXPECT_TRUE(fs::exists(path("l.json")));
}
