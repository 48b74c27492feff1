#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using dcesim::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result cli(std::vector<std::string> args) {
    args.insert(args.begin(), "dcesim");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::vector<std::string>> rows;
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::temp_directory_path() /
              ("dcesim_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }
    std::string path(const std::string& name) const { return (dir / name).string(); }

    fs::path dir;
};

}  // namespace

TEST_F(CliTest, SimulateWritesSpectrumAndManifest) {
    const auto r = cli({"simulate", "--mass", "2", "--kmax", "4", "--tmax", "20", "--sample-dt", "5", "--jobs",
                        "1", "--out", path("run.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = read_csv(path("run.csv"));
    ASSERT_EQ(rows.size(), 6u);
    const std::vector<std::string> header{"t",   "N_1", "N_2", "N_3", "N_4", "N_total",
                                          "d_1", "d_2", "d_3", "d_4", "period_aligned"};
    EXPECT_EQ(rows[0], header);
    EXPECT_EQ(std::stod(rows[1][0]), 0.0);
    EXPECT_EQ(std::stod(rows[5][0]), 20.0);
    EXPECT_EQ(rows[1][10], "1");

    const auto manifest = nlohmann::json::parse(slurp(path("run.manifest.json")));
    EXPECT_EQ(manifest.at("status").get<std::string>(), "ok");
    EXPECT_EQ(manifest.at("config").at("cutoff").get<int>(), 4);
    double max_d = 0.0;
    for (std::size_t j = 1; j < rows.size(); ++j)
        for (int k = 6; k <= 9; ++k) max_d = std::max(max_d, std::abs(std::stod(rows[j][k])));
    EXPECT_EQ(manifest.at("residuals").at("max_abs_d_k_leading_5").get<double>(), max_d);
    EXPECT_GT(std::stod(rows[5][1]), 0.0);
}

TEST_F(CliTest, RerunIsByteIdentical) {
    const std::vector<std::string> base{"simulate", "--mass", "0.7", "--kmax", "5", "--tmax", "10", "--sample-dt", "2"};
    auto a = base, b = base;
    a.insert(a.end(), {"--jobs", "1", "--out", path("a.csv")});
    b.insert(b.end(), {"--jobs", "3", "--out", path("b.csv")});
    ASSERT_EQ(cli(a).code, 0);
    ASSERT_EQ(cli(b).code, 0);
    EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
}

TEST_F(CliTest, StaticCavityProducesNoParticles) {
    const auto r = cli({"simulate", "--mass", "1", "--epsilon", "0", "--kmax", "4", "--tmax", "10", "--sample-dt",
                        "5", "--out", path("static.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = read_csv(path("static.csv"));
    for (std::size_t j = 1; j < rows.size(); ++j)
        for (int n = 1; n <= 5; ++n) EXPECT_EQ(std::stod(rows[j][n]), 0.0);
}

TEST_F(CliTest, CavityGeometrySetsMass) {
    const auto r = cli({"simulate", "--cavity", "11,11,1,1", "--kmax", "3", "--tmax", "1", "--sample-dt", "1",
                        "--out", path("cav.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto manifest = nlohmann::json::parse(slurp(path("cav.manifest.json")));
    const double expect = std::numbers::pi * std::sqrt(2.0) / 11.0;
    EXPECT_NEAR(manifest.at("config").at("mass").get<double>(), expect, 1e-12);
    EXPECT_NEAR(expect, 0.404, 1e-3);
}

TEST_F(CliTest, UsageErrors) {
    EXPECT_EQ(cli({"simulate", "--mass", "1", "--epsilon", "0.5", "--out", path("x.csv")}).code, 2);
    EXPECT_EQ(cli({"simulate", "--mass", "1", "--cavity", "1,1,1,1", "--out", path("x.csv")}).code, 2);
    EXPECT_EQ(cli({"simulate", "--mass", "1", "--omega", "3", "--resonant-n", "2", "--out", path("x.csv")}).code, 2);
    EXPECT_EQ(cli({"simulate", "--mass", "1", "--bogus"}).code, 2);
    EXPECT_EQ(cli({"simulate", "--mass-exact-coupling", "1,3", "--out", path("x.csv")}).code, 2);
    EXPECT_EQ(cli({"simulate", "--mass", "1", "--stepper", "euler", "--out", path("x.csv")}).code, 2);
    EXPECT_EQ(cli({}).code, 2);
    EXPECT_EQ(cli({"--help"}).code, 0);
    EXPECT_FALSE(fs::exists(path("x.csv")));
}

TEST_F(CliTest, ConfigFileAndFlagPrecedence) {
    {
        std::ofstream cfg(path("run.ini"));
        cfg << "mass=3.5\nkmax=4\ntmax=4\nsample-dt=2\n";
    }
    const auto r = cli({"simulate", "--config", path("run.ini"), "--kmax", "3", "--out", path("c.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto manifest = nlohmann::json::parse(slurp(path("c.manifest.json")));
    EXPECT_EQ(manifest.at("config").at("mass").get<double>(), 3.5);
    EXPECT_EQ(manifest.at("config").at("cutoff").get<int>(), 3);
    EXPECT_EQ(manifest.at("config").at("t_max").get<double>(), 4.0);
}

TEST_F(CliTest, SweepKeepsGridOrder) {
    const auto r = cli({"sweep", "--mass-grid", "2.0,0.7,3.5", "--t-eval", "20", "--kmax", "4", "--out",
                        path("sweep.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = read_csv(path("sweep.csv"));
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"M", "N_resonant", "sinh_prediction", "exact_coupling_flag",
                                                 "coupled_partner"}));
    EXPECT_EQ(std::stod(rows[1][0]), 2.0);
    EXPECT_EQ(std::stod(rows[2][0]), 0.7);
    EXPECT_EQ(std::stod(rows[3][0]), 3.5);
    for (std::size_t j = 1; j < 4; ++j) EXPECT_GT(std::stod(rows[j][1]), 0.0);
    EXPECT_TRUE(fs::exists(path("sweep.manifest.json")));
}

TEST_F(CliTest, SweepRangeSyntax) {
    const auto r = cli({"sweep", "--mass-grid", "1:1.2:0.1", "--t-eval", "5", "--kmax", "3", "--out",
                        path("range.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = read_csv(path("range.csv"));
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_NEAR(std::stod(rows[3][0]), 1.2, 1e-12);
    EXPECT_EQ(cli({"sweep", "--mass-grid", "1:0.5:0.1", "--out", path("bad.csv")}).code, 2);
}

TEST_F(CliTest, CouplingsFiveModeChain) {
    const auto r = cli({"couplings", "--mass-exact-coupling", "1,7", "--max-mode", "30", "--csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("k,branch,l_tilde,l,detuning,class"), std::string::npos);
    EXPECT_NE(r.out.find("1,-,7,7,"), std::string::npos);
    EXPECT_NE(r.out.find(",12,"), std::string::npos);
    EXPECT_NE(r.out.find("weak"), std::string::npos);
}

TEST_F(CliTest, CouplingsWriteManifest) {
    const auto r = cli({"couplings", "--mass", "0.7", "--out", path("cp.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = read_csv(path("cp.csv"));
    ASSERT_GE(rows.size(), 2u);
    EXPECT_EQ(rows[1][0], "1");
    EXPECT_EQ(rows[1][3], "3");
    EXPECT_NEAR(std::stod(rows[1][2]), 3.065, 1e-3);
    EXPECT_EQ(rows[1][5], "weak");
    EXPECT_TRUE(fs::exists(path("cp.manifest.json")));
}

TEST_F(CliTest, ValidateOracle) {
    const auto r = cli({"validate", "--preset", "oracle"});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    EXPECT_NE(r.out.find("PASS"), std::string::npos);
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
    EXPECT_EQ(cli({"validate", "--preset", "nope"}).code, 2);
    const auto list = cli({"validate", "--list"});
    EXPECT_EQ(list.code, 0);
    EXPECT_NE(list.out.find("fig9"), std::string::npos);
}
