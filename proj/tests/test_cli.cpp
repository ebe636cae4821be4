#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cli.hpp"
#include "io.hpp"

using namespace kgring;
using nlohmann::ordered_json;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

const std::vector<std::string> hulthen_flags{"--M", "1", "--b", "1", "--alpha", "1", "--A", "2", "--C0", "0",
                                             "--beta", "0", "--beta-prime", "0", "--m", "0", "--N-max", "0",
                                             "--nr-max", "0"};

std::vector<std::string> cat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("kgring_test_" + name);
}

// splits one CSV line without quoted fields
std::vector<std::string> csv_fields(const std::string& line) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.push_back("");
    return f;
}

} // namespace

TEST(FormatDouble, SeventeenDigitsAndRoundTrip) {
    EXPECT_EQ(io::fmt_double(0.1), "0.10000000000000001");
    EXPECT_EQ(io::fmt_double(2.0), "2.0");
    EXPECT_EQ(io::fmt_double(1e-9), "1.0000000000000001e-09");
    EXPECT_EQ(io::fmt_double(std::nan("")), "null");
    const double x = (-1.0 + std::sqrt(7.0)) / 4.0;
    EXPECT_EQ(std::stod(io::fmt_double(x)), x);
}

TEST(Cli, SpectrumReferenceRoot) {
    const CliRun r = run(cat({"spectrum"}, cat(hulthen_flags, {"--format", "json"})));
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = ordered_json::parse(r.out);
    ASSERT_EQ(doc["states"].size(), 1u);
    EXPECT_NEAR(doc["states"][0]["E"].get<double>(), 0.4114378277661476, 1e-14);
    EXPECT_TRUE(doc["states"][0]["admissible"].get<bool>());
    EXPECT_TRUE(doc["states"][0]["rejection_reason"].is_null());
    EXPECT_EQ(r.out.back(), '\n');
}

TEST(Cli, FreeCaseRejectedOnly) {
    const CliRun r = run({"spectrum", "--alpha", "1", "--A", "0", "--C0", "0"});
    ASSERT_EQ(r.code, 0);
    const auto doc = ordered_json::parse(r.out);
    EXPECT_TRUE(doc["states"].empty());
    ASSERT_EQ(doc["rejected"].size(), 2u);
    EXPECT_EQ(doc["rejected"][0]["rejection_reason"].get<std::string>(), "sqrt_c ≤ 0");
}

TEST(Cli, DeterministicOutput) {
    const auto args = cat({"spectrum"}, cat(hulthen_flags, {"--A", "40", "--nr-max", "2", "--N-max", "1"}));
    EXPECT_EQ(run(args).out, run(args).out);
}

TEST(Cli, CsvAndJsonCarrySameNumbers) {
    const auto base = cat({"spectrum", "--alpha", "2", "--A", "8", "--nr-max", "2", "--N-max", "1", "--m-max", "1"},
                          {});
    const CliRun j = run(cat(base, {"--format", "json"}));
    const CliRun c = run(cat(base, {"--format", "csv"}));
    ASSERT_EQ(j.code, 0);
    ASSERT_EQ(c.code, 0);
    const auto doc = ordered_json::parse(j.out);
    std::vector<ordered_json> records;
    for (const auto& s : doc["states"]) records.push_back(s);
    for (const auto& s : doc["rejected"]) records.push_back(s);

    std::istringstream lines(c.out);
    std::string header;
    std::getline(lines, header);
    const auto cols = csv_fields(header);
    ASSERT_EQ(cols, io::state_columns());
    std::string line;
    std::size_t row = 0;
    while (std::getline(lines, line)) {
        ASSERT_LT(row, records.size());
        const auto fields = csv_fields(line);
        ASSERT_EQ(fields.size(), cols.size()) << line;
        for (std::size_t k = 0; k < cols.size(); ++k) {
            const std::string expect = io::csv_cell(records[row][cols[k]]);
            EXPECT_EQ(fields[k], expect) << cols[k];
        }
        ++row;
    }
    EXPECT_EQ(row, records.size());
    EXPECT_EQ(c.out.find('\r'), std::string::npos);
}

TEST(Cli, WavefunctionRoundTrip) {
    const auto spec_path = temp_file("spectrum.json");
    const CliRun s = run(cat({"spectrum", "--alpha", "2", "--A", "8", "--nr-max", "1", "--out", spec_path.string()}, {}));
    ASSERT_EQ(s.code, 0) << s.err;
    std::ifstream f(spec_path);
    const auto doc = ordered_json::parse(f);
    ASSERT_EQ(doc["states"].size(), 2u);
    for (int idx = 0; idx < 2; ++idx) {
        const CliRun w = run({"wavefunction", "--input", spec_path.string(), "--state-index", std::to_string(idx), "--grid",
                           "0.1:5:11"});
        ASSERT_EQ(w.code, 0) << w.err;
        const auto wd = ordered_json::parse(w.out);
        EXPECT_EQ(wd["state"], doc["states"][idx]);
        EXPECT_EQ(wd["grid"].size(), 11u);
    }
    std::filesystem::remove(spec_path);
}

TEST(Cli, WavefunctionAngularTable) {
    const CliRun w = run({"wavefunction", "--alpha", "2", "--A", "40", "--beta", "0.4", "--beta-prime", "0.5", "--m", "1", "--N", "1",
                       "--part", "angular", "--grid", "0.1:3:5", "--format", "csv"});
    ASSERT_EQ(w.code, 0) << w.err;
    EXPECT_EQ(w.out.substr(0, w.out.find('\n')), "theta,Theta");
}

TEST(Cli, AngularCommand) {
    const CliRun r = run({"angular", "--m", "1", "--eta", "1.8", "--beta", "0.4", "--beta-prime", "0.5", "--N-max", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = ordered_json::parse(r.out);
    ASSERT_EQ(doc["solutions"].size(), 3u);
    EXPECT_NEAR(doc["solutions"][1]["lambda"].get<double>(), 7.8865264962788195, 1e-13);
}

TEST(Cli, PotentialScan) {
    const CliRun r = run({"potential-scan", "--alpha", "2", "--A", "8", "--grid", "0.1:2:4", "--format", "csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream lines(r.out);
    std::string l;
    int n = 0;
    while (std::getline(lines, l)) ++n;
    EXPECT_EQ(n, 5);
}

TEST(Cli, UsageErrors) {
    for (const std::vector<std::string>& args :
         std::vector<std::vector<std::string>>{{},
                                               {"spectrum", "--bogus"},
                                               {"spectrum", "--A", "nan"},
                                               {"spectrum", "--format", "xml"},
                                               {"spectrum", "--energy-window", "0.1"},
                                               {"spectrum", "--m", "0", "--m-max", "1"},
                                               {"wavefunction", "--input", "/nonexistent/file.json"},
                                               {"potential-scan", "--grid", "1:0:5"},
                                               {"verify", "--suite", "12"}}) {
        const CliRun r = run(args);
        EXPECT_EQ(r.code, 1) << (args.empty() ? "" : args[0]);
        const auto e = ordered_json::parse(r.err);
        EXPECT_EQ(e["error"], "usage");
    }
}

TEST(Cli, DomainErrorsHaveDistinctExitCode) {
    const CliRun r = run({"angular", "--beta", "3", "--m", "0"});
    EXPECT_EQ(r.code, 2);
    const auto e = ordered_json::parse(r.err);
    EXPECT_EQ(e["error"], "domain");
    EXPECT_EQ(e["kind"], "ring_too_strong");
    EXPECT_EQ(run({"spectrum", "--b", "-1"}).code, 2);
    EXPECT_EQ(run({"wavefunction", "--A", "0"}).code, 2);
}

TEST(Cli, HelpExitsCleanly) {
    const CliRun r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("spectrum"), std::string::npos);
}

TEST(Cli, VerifySubsetPasses) {
    const CliRun r = run({"verify", "--suite", "1,2,6,8"});
    EXPECT_EQ(r.code, 0) << r.out;
    const auto doc = ordered_json::parse(r.out);
    EXPECT_TRUE(doc["passed"].get<bool>());
    EXPECT_EQ(doc["criteria"].size(), 4u);
}
