#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run(const std::string &args) {
    std::string cmd = std::string(SSDEC_CLI_PATH) + " " + args + " 2>&1";
    RunResult r;
    FILE *pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        return r;
    }
    std::array<char, 4096> buf;
    while (std::fgets(buf.data(), buf.size(), pipe)) {
        r.out += buf.data();
    }
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path temp_dir(const std::string &name) {
    auto dir = fs::temp_directory_path() / ("ssdec_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t line_count(const std::string &s) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST(Cli, CodeInfoToric4d) {
    auto r = run("code-info --toric D=4 i=2 L=3");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("n=486 k=6 d=9"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("invariants:"), std::string::npos);
}

TEST(Cli, CodeInfoHgp4dSeed) {
    auto r = run("code-info --hgp4d " + std::string(SSDEC_TEST_DATA_DIR) + "/seed_10_6_3.txt");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("n=20625 k=1441"), std::string::npos) << r.out;
}

TEST(Cli, CodeInfoInvalidDegreeExitsTwo) {
    auto r = run("code-info --toric D=3 i=3 L=3");
    EXPECT_EQ(r.code, 2) << r.out;
    EXPECT_FALSE(r.out.empty());
}

TEST(Cli, CodeInfoBruteForce) {
    auto r = run("code-info --code toric2d --L 3 --brute-force");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("n=18 k=2 d=3"), std::string::npos) << r.out;
}

TEST(Cli, SimulateZeroNoise) {
    auto dir = temp_dir("zero");
    auto out = dir / "z.csv";
    auto r = run("simulate --code toric3d --L 3 --p 0 --trials 10 --out " + out.string() + " --quiet");
    EXPECT_EQ(r.code, 0) << r.out;
    auto csv = slurp(out);
    EXPECT_EQ(line_count(csv), 2u);
    EXPECT_NE(csv.find(",10,0,"), std::string::npos) << csv;
    fs::remove_all(dir);
}

TEST(Cli, SimulateResumeAppendsNoDuplicates) {
    auto dir = temp_dir("resume");
    auto out = dir / "r.csv";
    std::string args = "simulate --code toric3d --L 3 --p 0.01,0.03 --trials 20 --seed 9 --quiet --out " + out.string();
    ASSERT_EQ(run(args).code, 0);
    auto first = slurp(out);
    ASSERT_EQ(run(args).code, 0);
    EXPECT_EQ(slurp(out), first);
    EXPECT_EQ(line_count(first), 3u);
    fs::remove_all(dir);
}

TEST(Cli, SimulateConfigFileWithOverride) {
    auto dir = temp_dir("config");
    auto cfg = dir / "run.cfg";
    std::ofstream(cfg) << "# campaign\ncode = toric3d\nL = 3\np = 0.02\ntrials = 15\nseed = 4\n";
    auto a = run("simulate --config " + cfg.string() + " --quiet --out " + (dir / "a.csv").string());
    EXPECT_EQ(a.code, 0) << a.out;
    auto b = run("simulate --config " + cfg.string() + " --trials 25 --quiet --out " + (dir / "b.csv").string());
    EXPECT_EQ(b.code, 0) << b.out;
    EXPECT_NE(slurp(dir / "a.csv").find(",15,"), std::string::npos);
    EXPECT_NE(slurp(dir / "b.csv").find(",25,"), std::string::npos);
    std::ofstream(dir / "bad.cfg") << "colour = blue\n";
    EXPECT_EQ(run("simulate --config " + (dir / "bad.cfg").string()).code, 2);
    fs::remove_all(dir);
}

TEST(Cli, SimulateEchoesToStdout) {
    auto r = run("simulate --code toric3d --L 3 --p 0.01 --trials 5");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("code_name,D,i,L"), std::string::npos) << r.out;
}

TEST(Cli, TwoStageWithoutMetachecksExitsTwo) {
    auto r = run("simulate --code toric2d --L 3 --p 0.01 --trials 5 --two-stage");
    EXPECT_EQ(r.code, 2) << r.out;
}

TEST(Cli, UnknownFlagExitsTwo) {
    EXPECT_EQ(run("simulate --bogus").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
}

TEST(Cli, AnalyzeEmptyCsvExitsTwo) {
    auto dir = temp_dir("empty");
    std::ofstream(dir / "e.csv").close();
    EXPECT_EQ(run("analyze " + (dir / "e.csv").string()).code, 2);
    EXPECT_EQ(run("analyze --in " + (dir / "missing.csv").string()).code, 1);
    fs::remove_all(dir);
}

TEST(Cli, AnalyzeSimulatedCampaign) {
    auto dir = temp_dir("analyze");
    auto csv = dir / "c.csv";
    ASSERT_EQ(run("simulate --code toric3d --L 3,4 --p 0.03,0.06 --trials 30 --quiet --out " + csv.string()).code, 0);
    auto r = run("analyze --in " + csv.string() + " --out " + (dir / "a.json").string() + " --bootstrap 20");
    EXPECT_EQ(r.code, 0) << r.out;
    auto json = slurp(dir / "a.json");
    EXPECT_NE(json.find("threshold_estimates"), std::string::npos);
    EXPECT_NE(json.find("psus_sequence"), std::string::npos);
    EXPECT_NE(json.find("fits"), std::string::npos);
    fs::remove_all(dir);
}

TEST(Cli, ExperimentUnderflow) {
    auto r = run("experiment underflow --x-min 0 --x-max 20 --step 1");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(line_count(r.out), 22u) << r.out;
}

TEST(Cli, ExperimentBpLocality) {
    auto dir = temp_dir("loc");
    auto r = run("experiment bp-locality --L 9 --l 1,4 --out " + (dir / "l.csv").string());
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_FALSE(slurp(dir / "l.csv").empty());
    fs::remove_all(dir);
}

TEST(Cli, ExperimentHalfCubeCensus) {
    auto r = run("experiment half-cube-census --L 3 --p 0.01 --trials 20");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("with_half_cube_failed"), std::string::npos) << r.out;
}

TEST(Cli, HelpListsEveryDocumentedFlag) {
    auto top = run("--help");
    EXPECT_EQ(top.code, 0);
    for (const char *sub : {"code-info", "simulate", "analyze", "experiment"}) {
        EXPECT_NE(top.out.find(sub), std::string::npos) << sub;
    }
    auto sim = run("simulate --help");
    for (const char *flag : {"--code", "--L", "--p", "--rounds", "--trials", "--seed", "--workers", "--osd", "--bp",
                             "--no-metachecks", "--two-stage", "--out", "--config"}) {
        EXPECT_NE(sim.out.find(flag), std::string::npos) << flag;
    }
    auto info = run("code-info --help");
    for (const char *flag : {"--toric", "--hgp4d"}) {
        EXPECT_NE(info.out.find(flag), std::string::npos) << flag;
    }
    auto loc = run("experiment bp-locality --help");
    for (const char *flag : {"--L", "--p", "--max-iters", "--l", "--out"}) {
        EXPECT_NE(loc.out.find(flag), std::string::npos) << flag;
    }
    EXPECT_NE(run("experiment underflow --help").out.find("--out"), std::string::npos);
    EXPECT_NE(run("experiment --help").out.find("half-cube-census"), std::string::npos);
}
