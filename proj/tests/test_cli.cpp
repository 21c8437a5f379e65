#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <gtest/gtest.h>

#include "json.hpp"

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(JACOBI_ASYM_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
        rows.push_back(cells);
    }
    return rows;
}

std::string fits_footer(const std::string& text) {
    const auto pos = text.find("# fits ");
    if (pos == std::string::npos) return {};
    return text.substr(pos + 7, text.find('\n', pos) - pos - 7);
}

} // namespace

TEST(CliSpectrum, ExactSolvableCase) {
    const auto r = run("spectrum --g 0.6 --c1 0.3 --c2 0.3 --n 0:10 --tol 1e-8");
    ASSERT_EQ(r.code, 0);
    const auto rows = csv_rows(r.out);
    ASSERT_EQ(rows.size(), 12u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"n", "lambda", "truncation_N", "est_error", "converged"}));
    for (int n = 0; n <= 10; ++n) {
        EXPECT_EQ(std::stoi(rows[n + 1][0]), n);
        EXPECT_NEAR(std::stod(rows[n + 1][1]), n - 0.36 + 0.3, 1e-7);
        EXPECT_EQ(rows[n + 1][4], "true");
    }
}

TEST(CliSpectrum, ZeroCouplingIsExact) {
    const auto r = run("spectrum --g 0 --c1 0 --c2 0 --n 0:15");
    ASSERT_EQ(r.code, 0);
    const auto rows = csv_rows(r.out);
    for (int n = 0; n <= 15; ++n) EXPECT_EQ(std::stod(rows[n + 1][1]), static_cast<double>(n));
}

TEST(CliSpectrum, NumbersUseLowercaseExponent) {
    const auto r = run("spectrum --n 0:2");
    ASSERT_EQ(r.code, 0);
    const auto rows = csv_rows(r.out);
    EXPECT_NE(rows[1][1].find('e'), std::string::npos);
    EXPECT_EQ(rows[1][1].find('E'), std::string::npos);
}

TEST(CliSpectrum, InvalidRangeIsUsageError) {
    EXPECT_EQ(run("spectrum --n 5:3").code, 1);
    EXPECT_EQ(run("spectrum --n abc").code, 1);
    EXPECT_EQ(run("spectrum --tol 1").code, 1);
    EXPECT_EQ(run("spectrum --tol 1e-13").code, 1);
    EXPECT_EQ(run("spectrum --format xml").code, 1);
    EXPECT_EQ(run("").code, 1);
}

TEST(CliSpectrum, UsageMessageMentionsRange) {
    const std::string cmd = std::string(JACOBI_ASYM_CLI) + " spectrum --n 5:3 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    ASSERT_NE(pipe, nullptr);
    std::string text;
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) text.append(buf.data(), got);
    pclose(pipe);
    EXPECT_NE(text.find("--n"), std::string::npos);
    EXPECT_NE(text.find("Usage"), std::string::npos);
}

TEST(CliSpectrum, JsonSchema) {
    const auto r = run("spectrum --n 0:3 --format json");
    ASSERT_EQ(r.code, 0);
    const auto doc = nlohmann::json::parse(r.out);
    for (const char* key : {"config", "rows", "fits", "checks"}) EXPECT_TRUE(doc.contains(key)) << key;
    EXPECT_EQ(doc["rows"].size(), 4u);
    EXPECT_EQ(doc["config"]["command"], "spectrum");
    EXPECT_TRUE(doc["rows"][0].contains("lambda"));
    EXPECT_TRUE(doc["rows"][0].contains("truncation_n"));
}

TEST(CliSpectrum, DeterministicOutputFiles) {
    const std::string a = ::testing::TempDir() + "/spec_a.csv", b = ::testing::TempDir() + "/spec_b.csv";
    ASSERT_EQ(run("spectrum --g 0.7 --c1 0.2 --c2 -0.1 --n 0:40 --out " + a).code, 0);
    ASSERT_EQ(run("spectrum --g 0.7 --c1 0.2 --c2 -0.1 --n 0:40 --out " + b).code, 0);
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    EXPECT_FALSE(sa.str().empty());
    EXPECT_EQ(sa.str(), sb.str());
}

TEST(CliDefaults, DumpsResolvedConfig) {
    const auto r = run("asymptotics --defaults");
    ASSERT_EQ(r.code, 0);
    const auto c = nlohmann::json::parse(r.out);
    EXPECT_EQ(c["g"], 0.5);
    EXPECT_EQ(c["c1"], 1.0);
    EXPECT_EQ(c["c2"], 0.0);
    EXPECT_EQ(c["n_lo"], 8);
    EXPECT_EQ(c["n_hi"], 512);
    EXPECT_EQ(c["tol"], 1e-8);
    const auto v = nlohmann::json::parse(run("verify --defaults").out);
    EXPECT_EQ(v["smax"], 20);
    EXPECT_EQ(v["xgrid"], "0.1:100:200");
    EXPECT_EQ(v["nmax"], 100000);
}

TEST(CliAsymptotics, DefaultInstanceDecay) {
    const auto r = run("asymptotics");
    ASSERT_EQ(r.code, 0);
    const auto rows = csv_rows(r.out);
    ASSERT_EQ(rows.size(), 506u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"n", "lambda", "first_order", "diag_corr", "r1", "r2", "s_n",
                                                 "s_n_tail_bound"}));
    const auto fits = nlohmann::json::parse(fits_footer(r.out));
    EXPECT_GE(fits["abs_r1"]["alpha"].get<double>(), 1.0 / 16.0);
    EXPECT_TRUE(fits.contains("abs_r2"));
    EXPECT_GE(fits["s_n"]["alpha"].get<double>(), 1.0 / 16.0);
}

TEST(CliAsymptotics, EqualShiftsCollapse) {
    const auto r = run("asymptotics --g 0.8 --c1 0.4 --c2 0.4 --n 0:50 --tol 1e-9");
    ASSERT_EQ(r.code, 0);
    const auto rows = csv_rows(r.out);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(std::abs(std::stod(rows[i][4])), 1e-8);
}

TEST(CliAsymptotics, SyntheticInjectionFit) {
    const auto r = run("asymptotics --synthetic 3:0.25 --n 1:1000");
    ASSERT_EQ(r.code, 0);
    const auto fits = nlohmann::json::parse(fits_footer(r.out));
    EXPECT_NEAR(fits["s_n"]["alpha"].get<double>(), 0.25, 1e-10);
    EXPECT_NEAR(fits["s_n"]["c"].get<double>(), 3.0, 1e-9);
    EXPECT_EQ(run("asymptotics --synthetic 3").code, 1);
}

TEST(CliVerify, DefaultGridPasses) {
    const auto r = run("verify");
    EXPECT_EQ(r.code, 0) << r.out;
    const auto rows = csv_rows(r.out);
    ASSERT_GE(rows.size(), 8u);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i][1], "PASS") << rows[i][0];
}

TEST(CliVerify, ZeroCouplingSkipsOffsetDecay) {
    const auto r = run("verify --g 0 --format json");
    EXPECT_EQ(r.code, 0);
    const auto doc = nlohmann::json::parse(r.out);
    bool seen = false;
    for (const auto& c : doc["checks"])
        if (c["check"] == "offset_decay") {
            seen = true;
            EXPECT_EQ(c["status"], "SKIPPED(g=0)");
        }
    EXPECT_TRUE(seen);
}

TEST(CliVerify, NegatedBoundFails) {
    const auto r = run("verify --bound-scale -1 --format json");
    EXPECT_EQ(r.code, 3);
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_EQ(doc["checks"][0]["check"], "bessel_bound");
    EXPECT_EQ(doc["checks"][0]["status"], "FAIL");
}

TEST(CliOracle, AgreementAtModerateCoupling) {
    const auto r = run("oracle --g 0.7 --cap 20 --format json");
    ASSERT_EQ(r.code, 0);
    const auto doc = nlohmann::json::parse(r.out);
    ASSERT_EQ(doc["checks"].size(), 3u);
    for (const auto& c : doc["checks"]) EXPECT_LT(c["max_deviation"].get<double>(), 1e-10) << c["check"];
}

TEST(CliOracle, ZeroCouplingExact) {
    const auto doc = nlohmann::json::parse(run("oracle --g 0 --format json").out);
    for (const auto& c : doc["checks"]) EXPECT_EQ(c["max_deviation"].get<double>(), 0.0);
}

TEST(CliOracle, CapTooLarge) { EXPECT_EQ(run("oracle --cap 40").code, 1); }
