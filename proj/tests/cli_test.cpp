#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

int run(const std::string& args)
{
    std::string cmd = std::string(ALH_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json load(const fs::path& p) { return json::parse(slurp(p)); }

class Cli : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir = fs::temp_directory_path() / ("alh_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }
    std::string at(const std::string& name) const { return (dir / name).string(); }
    fs::path dir;
};

} // namespace

TEST_F(Cli, ThetaPositive)
{
    ASSERT_EQ(run("theta --alpha 2 --kmax 2 --out " + at("t.json")), 0);
    json j = load(at("t.json"));
    EXPECT_EQ(j["schema"], 1);
    EXPECT_EQ(j["entries"][0]["k"], 1);
    EXPECT_EQ(j["entries"][0]["expression"], "v1*exp(v2) + 1/2*v1^2");
}

TEST_F(Cli, ThetaNegative)
{
    ASSERT_EQ(run("theta --alpha 0 --kmin -2 --kmax -1 --out " + at("t.json")), 0);
    json j = load(at("t.json"));
    ASSERT_EQ(j["entries"].size(), 2u);
    EXPECT_EQ(j["entries"][1]["expression"], "(-v1)/(v1 - exp(v2))^2");
}

TEST_F(Cli, ThetaMethodsAgree)
{
    ASSERT_EQ(run("theta --method residue --alpha 1 --kmax 2 --out " + at("res.json")), 0);
    ASSERT_EQ(run("theta --method recursion --alpha 1 --kmax 2 --out " + at("rec.json")), 0);
    EXPECT_EQ(load(at("res.json"))["entries"], load(at("rec.json"))["entries"]);
    ASSERT_EQ(run("theta --method both --alpha 0 --kmin -3 --kmax -1 --out " + at("both.json")), 0);
    EXPECT_EQ(load(at("both.json"))["agree"], true);
}

TEST_F(Cli, VerifyBacklund)
{
    ASSERT_EQ(run("verify --suite backlund --out " + at("v.json")), 0);
    json j = load(at("v.json"));
    EXPECT_EQ(j["pass"], true);
    EXPECT_EQ(j["total"], 3);
}

TEST_F(Cli, SimulateZeroStepsEchoesState)
{
    std::ofstream(at("init.json")) << R"({"P": [1, 1, 1, 1], "Q": [2, 3, 2.5, 2]})";
    ASSERT_EQ(run("simulate --init " + at("init.json") + " --steps 0 --csv " + at("s.csv")), 0);
    json m = load(at("s.csv") + ".manifest.json");
    EXPECT_EQ(m["final_state"]["Q"], json::parse("[2, 3, 2.5, 2]"));
    std::string csv = slurp(at("s.csv"));
    EXPECT_EQ(csv.substr(0, csv.find('\n')), R"(t,"H_{2,-1}","H_{2,0}","H_{2,1}","H_{2,2}","H_{2,3}","H_{0,-1}","H_{0,-2}",defect)");
}

TEST_F(Cli, SimulateNearPole)
{
    std::ofstream(at("init.json")) << R"({"P": [1.0, 1.5, 0.7], "Q": [2.0, 1.0, 2.5]})";
    ASSERT_EQ(run("simulate --flow t0m1 --init " + at("init.json") + " --csv " + at("s.csv")), 2);
    json m = load(at("s.csv") + ".manifest.json");
    EXPECT_EQ(m["status"], "numerical-guard");
    EXPECT_EQ(m["site"], 1);
}

TEST_F(Cli, DefaultRunConserves)
{
    ASSERT_EQ(run("simulate --csv " + at("s.csv")), 0);
    json m = load(at("s.csv") + ".manifest.json");
    EXPECT_LT(m["max_relative_drift"].get<double>(), 1e-8);
    EXPECT_EQ(m["manifest"]["seeds"][0], 12345);
}

TEST_F(Cli, UsageErrors)
{
    EXPECT_EQ(run(""), 3);
    EXPECT_EQ(run("frobnicate"), 3);
    EXPECT_EQ(run("verify --suite nonsense"), 3);
    EXPECT_EQ(run("simulate --flow t99"), 3);
    EXPECT_EQ(run("theta --alpha 1 --kmin 0 --kmax 1 --method residue"), 3);
}

TEST_F(Cli, RepeatedRunsAreIdentical)
{
    for (const char* tag : {"a", "b"}) {
        std::string t(tag);
        ASSERT_EQ(run("simulate --steps 200 --cadence 20 --seed 7 --csv " + at("sim.csv") + " --manifest " + at("m" + t + ".json")), 0);
        fs::rename(at("sim.csv"), at("sim_" + t + ".csv"));
    }
    EXPECT_EQ(slurp(at("sim_a.csv")), slurp(at("sim_b.csv")));
    EXPECT_EQ(slurp(at("ma.json")), slurp(at("mb.json")));
}
