// Command-line tests: golden cases (see golden_cases.hpp) and output
// properties. Set MIXLAW_REGENERATE_GOLDEN=1 to rewrite the expected files.

#include <algorithm>
#include <cmath>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include <mixlaw/mixlaw.hpp>

#include "golden_cases.hpp"

namespace fs = std::filesystem;
using mixlaw::test::read_file;
using mixlaw::test::run_cli;

namespace {

const fs::path golden_dir = MIXLAW_GOLDEN_DIR;

class Golden : public ::testing::TestWithParam<std::string>
{};

} // namespace

TEST_P(Golden, MatchesExpected)
{
    const bool regenerate = std::getenv("MIXLAW_REGENERATE_GOLDEN") != nullptr;
    const auto r = mixlaw::test::run_golden_case(golden_dir, GetParam(), regenerate);
    if (regenerate)
        GTEST_SKIP() << "regenerated " << GetParam();
    EXPECT_TRUE(r.passed) << "expected:\n" << r.expected << "\nactual:\n" << r.actual;
}

INSTANTIATE_TEST_SUITE_P(Cli, Golden, ::testing::ValuesIn(mixlaw::test::case_names(golden_dir)),
                         [](const auto& info) { return info.param; });

TEST(Cli, SweepIsByteIdenticalAcrossRuns)
{
    const fs::path dir = fs::temp_directory_path() / "mixlaw_sweep_test";
    fs::create_directories(dir);
    std::vector<std::string> bytes;
    for (int i = 0; i < 2; ++i) {
        const fs::path file = dir / ("run" + std::to_string(i) + ".csv");
        const auto o = run_cli({"sweep", "--var", "p", "--from", "-5", "--to", "5", "--steps", "101", "--phase",
                                "0.3:1.7", "--phase", "0.7:40", "--output", file.string()});
        ASSERT_EQ(o.code, 0) << o.err;
        EXPECT_TRUE(o.out.empty());
        bytes.push_back(read_file(file));
    }
    fs::remove_all(dir);
    EXPECT_EQ(bytes[0], bytes[1]);
    EXPECT_EQ(bytes[0].back(), '\n');
    EXPECT_EQ(bytes[0].find('\r'), std::string::npos);
}

TEST(Cli, SweepOverPIsMonotoneWithGeometricMidpoint)
{
    const auto o = run_cli({"sweep", "--var", "p", "--from", "-5", "--to", "5", "--steps", "101", "--phase", "0.5:1",
                            "--phase", "0.5:4"});
    ASSERT_EQ(o.code, 0);
    std::istringstream in(o.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "p,value,flags");
    std::vector<double> ps, values;
    while (std::getline(in, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        ps.push_back(std::stod(line.substr(0, c1)));
        values.push_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
    }
    ASSERT_EQ(values.size(), 101u);
    for (std::size_t i = 1; i < values.size(); ++i)
        EXPECT_GE(values[i], values[i - 1]);
    EXPECT_EQ(ps[50], 0.0);
    EXPECT_EQ(values[50], 2.0);
    EXPECT_GT(values.front(), 1.0);
    EXPECT_LT(values.back(), 4.0);
}

TEST(Cli, SweepOverTIsProportional)
{
    const auto o = run_cli({"sweep", "--var", "t", "--list", "1e-3,1,1e3", "--p", "2", "--phase", "0.5:1", "--phase",
                            "0.5:4"});
    ASSERT_EQ(o.code, 0);
    std::istringstream in(o.out);
    std::string line;
    std::getline(in, line);
    std::vector<double> ratio;
    while (std::getline(in, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        ratio.push_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)) / std::stod(line.substr(0, c1)));
    }
    ASSERT_EQ(ratio.size(), 3u);
    for (double r : ratio)
        EXPECT_LE(std::abs(r - ratio[1]) / ratio[1], 1e-15);
}

TEST(Cli, PrintedValuesRoundTrip)
{
    const auto o = run_cli({"mix", "--p", "-0.37", "--phase", "0.13:2.9", "--phase", "0.5:0.071", "--phase",
                            "0.37:1234.5"});
    ASSERT_EQ(o.code, 0);
    const std::vector<double> vals{2.9, 0.071, 1234.5};
    const double library = mixlaw::power_mean(-0.37, {0.13, 0.5, 0.37}, vals).value;
    EXPECT_EQ(std::stod(o.out.substr(0, o.out.find('\n'))), library);
}

TEST(Cli, ConfigFileWithFlagOverride)
{
    const fs::path file = fs::temp_directory_path() / "mixlaw_config_test.toml";
    std::ofstream(file) << "[mix]\np = \"2\"\nphase = [\"0.5:1\", \"0.5:7\"]\n";
    const auto from_config = run_cli({"--config", file.string(), "mix"});
    const auto overridden = run_cli({"--config", file.string(), "mix", "--p", "1"});
    fs::remove(file);
    EXPECT_EQ(from_config.code, 0);
    EXPECT_EQ(from_config.out.substr(0, 2), "5\n");
    EXPECT_EQ(overridden.out.substr(0, 2), "4\n");
}

TEST(Cli, HelpForEverySubcommand)
{
    for (const char* cmd : {"mix", "invert", "fit", "check", "sweep"}) {
        const auto o = run_cli({cmd, "--help"});
        EXPECT_EQ(o.code, 0) << cmd;
        EXPECT_NE(o.out.find("Usage"), std::string::npos) << cmd;
    }
}
