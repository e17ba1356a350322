#include "defmut/scenarios.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace defmut;

namespace {

struct Outcome {
    int status = -1;
    std::string out;
};

// Runs the command-line tool with stderr discarded.
Outcome cli(const std::string& args) {
    std::string cmd = std::string(DEFMUT_CLI_PATH) + " " + args + " 2>/dev/null";
    Outcome r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) throw std::runtime_error("popen failed");
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
    int raw = pclose(p);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

class Scratch {
  public:
    Scratch() : dir_(std::filesystem::temp_directory_path() / ("defmut_cli_" + std::to_string(::getpid()))) {
        std::filesystem::create_directories(dir_);
    }
    ~Scratch() { std::filesystem::remove_all(dir_); }
    std::string file(const std::string& name) const { return (dir_ / name).string(); }

  private:
    std::filesystem::path dir_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST(Cli, PeriodOfTheUndeformedLynessMap) {
    Outcome r = cli("period A2 --set a=1 --set b=1 --seed 1,1");
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "period 5\n");
    Outcome none = cli("period A2 --set a=2 --set b=3 --seed 1,1 --max 20");
    EXPECT_EQ(none.status, 1);
}

TEST(Cli, LaurentCheckOfTheThreeNodeTauSystem) {
    Outcome r = cli("laurent-check tausys-A3 --depth 4");
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("all Laurent to depth 4"), std::string::npos);
    EXPECT_EQ(cli("laurent-check A2 --map recurrence --depth 4").status, 1);
}

TEST(Cli, ScenarioReportFileMatchesTheLibrary) {
    Scratch tmp;
    std::string path = tmp.file("report.json");
    Outcome r = cli("scenario A4 --set a1=2 --set a4=3 --steps 11 --out " + path);
    EXPECT_EQ(r.status, 0);
    Json j = Json::parse(slurp(path));
    EXPECT_TRUE(j["passed"].get<bool>());
    EXPECT_EQ(j["orbit"]["points"].size(), 12u);
    RunOptions o;
    o.set = {{"a1", 2}, {"a4", 3}};
    o.steps = 11;
    EXPECT_EQ(j.dump(), run_scenario(ScenarioRegistry::builtin(), "A4", o).to_json().dump());
}

TEST(Cli, ParallelRunsMatchSerialRuns) {
    Outcome serial = cli("scenario A2 qrt sg-4-1 --format json");
    Outcome parallel = cli("scenario A2 qrt sg-4-1 --format json --jobs 3");
    EXPECT_EQ(serial.status, 0);
    EXPECT_EQ(serial.out, parallel.out);
    EXPECT_EQ(Json::parse(serial.out).size(), 3u);
}

TEST(Cli, OrbitCsvRoundTripsThroughVerifyIntegral) {
    Scratch tmp;
    std::string path = tmp.file("orbit.csv");
    Outcome o = cli("orbit A3-reduced --set c=2 --set d=3 --set e=2 --seed 1,1 --steps 8 --format csv --out " + path);
    ASSERT_EQ(o.status, 0);
    const std::string k1 = "\"(y*w+w+d)*(y+d*w+c)/(y*w)\"";
    Outcome good = cli("verify-integral A3-reduced --set c=2 --set d=3 --set e=2 --expr " + k1 + " --orbit " + path);
    EXPECT_EQ(good.status, 0);
    EXPECT_NE(good.out.find("constant 30"), std::string::npos);
    Outcome bad = cli("verify-integral A3-reduced --set c=2 --set d=3 --set e=2 --expr \"y+w\" --orbit " + path);
    EXPECT_EQ(bad.status, 1);
}

TEST(Cli, SymbolicVerification) {
    EXPECT_EQ(cli("verify-form A3").status, 0);
    EXPECT_EQ(cli("verify-form A3 --map mu2-control").status, 1);
    const std::string k1 = "\"(y*w+w+d)*(y+d*w+c)/(y*w)\"";
    EXPECT_EQ(cli("verify-integral A3-reduced --set c=2 --set e=2 --expr " + k1).status, 0);
    EXPECT_EQ(cli("verify-integral A3-reduced --set c=2 --set e=3 --expr " + k1).status, 1);
}

TEST(Cli, SearchIntegralExitReflectsSolvability) {
    const std::string support = "\"y^2*w,y*w^2,y*w,y,w,w^2,1\"";
    Outcome on = cli("search-integral A3-reduced --set c=2 --set e=2 --support " + support +
                 " --den-fixed \"y*w\" --free-constant --gauge 0 --format json");
    ASSERT_EQ(on.status, 0);
    EXPECT_TRUE(Json::parse(on.out)["solvable"].get<bool>());
    Outcome off = cli("search-integral A3-reduced --set c=2 --set e=3 --support " + support + " --den-fixed \"y*w\"");
    EXPECT_EQ(off.status, 1);
    EXPECT_EQ(off.out, "unsolvable\n");
}

TEST(Cli, MatrixTools) {
    Outcome m = cli("mutate --rows \"[[0,1],[-1,0]]\" --at 1 --format json");
    ASSERT_EQ(m.status, 0);
    EXPECT_EQ(Json::parse(m.out)["rows"], Json::parse("[[0,-1],[1,0]]"));
    Outcome named = cli("mutate A3 --matrix B --at 1,2,3 --format json");
    EXPECT_EQ(Json::parse(named.out)["rows"], Json::parse("[[0,1,0],[-1,0,1],[0,-1,0]]"));
    Outcome dot = cli("quiver-dot sg-2-2");
    EXPECT_EQ(dot.status, 0);
    EXPECT_EQ(dot.out.rfind("digraph", 0), 0u);
}

TEST(Cli, TauAndPadicOutputs) {
    Outcome tau = cli("tau-run tausys-A3 --steps 3 --format csv");
    ASSERT_EQ(tau.status, 0);
    EXPECT_EQ(tau.out.rfind("seq,index,value\n", 0), 0u);
    Outcome pad = cli("padic-report A3-reduced --steps 6 --format json");
    ASSERT_EQ(pad.status, 0);
    Json j = Json::parse(pad.out);
    EXPECT_EQ(j["factorizations"].size(), 7u);
    EXPECT_TRUE(j.contains("patterns"));
    Outcome csv = cli("padic-report A3-reduced --steps 6 --format csv");
    EXPECT_EQ(csv.out.rfind("prime,variable,", 0), 0u);
}

TEST(Cli, ListNamesEveryScenario) {
    Outcome r = cli("list --format json");
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(Json::parse(r.out).size(), ScenarioRegistry::builtin().ids().size());
}

TEST(Cli, UsageErrorsExitWithTwo) {
    EXPECT_EQ(cli("").status, 2);
    EXPECT_EQ(cli("bogus").status, 2);
    EXPECT_EQ(cli("scenario nope").status, 2);
    EXPECT_EQ(cli("scenario A2 --set zz=1").status, 2);
    EXPECT_EQ(cli("scenario A2 --set a").status, 2);
    EXPECT_EQ(cli("scenario A2 --set a=1.5").status, 2);
    EXPECT_EQ(cli("period A2 --seed 1,2,3").status, 2);
    EXPECT_EQ(cli("orbit A2 --format dot").status, 2);
    EXPECT_EQ(cli("mutate --rows \"[[0,1],[-1,0]]\" --at 3").status, 2);
    EXPECT_EQ(cli("--help").status, 0);
    EXPECT_EQ(cli("scenario --help").status, 0);
}
