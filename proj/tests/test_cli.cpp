// Copyright 2026 The fermicert Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "fermicert/cli.hpp"

namespace fermicert {
namespace {

namespace fs = std::filesystem;

const std::string kFixtures = FERMICERT_FIXTURE_DIR;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "fermicert");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("fermicert_cli_test_" + name);
  fs::remove_all(dir);
  return dir.string();
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

TEST(CliParse, Fractions) {
  EXPECT_DOUBLE_EQ(parse_fraction("1/3"), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(parse_fraction("-2/8"), -0.25);
  EXPECT_DOUBLE_EQ(parse_fraction("0.5"), 0.5);
  EXPECT_THROW(parse_fraction("1/0"), ConfigError);
  EXPECT_THROW(parse_fraction("abc"), ConfigError);
  EXPECT_THROW(parse_fraction("1/3x"), ConfigError);
}

TEST(CliParse, Subsets) {
  EXPECT_EQ(parse_subsets("1,2;2,3", 3, 2), (std::vector<SiteTuple>{{1, 2}, {2, 3}}));
  EXPECT_EQ(parse_subsets("all-k-subsets", 3, 2).size(), 3u);
  EXPECT_THROW(parse_subsets("1,x", 3, 2), ConfigError);
}

TEST(CliParse, SingleSiteDiagonal) {
  const auto s = single_site_from_diag({"1/2", "0", "0", "1/2"});
  EXPECT_EQ(s.shape.modes_per_site, 2);
  EXPECT_DOUBLE_EQ(s.mat(3, 3).real(), 0.5);
  EXPECT_THROW(single_site_from_diag({"1", "0", "0"}), ConfigError);
}

TEST(Cli, HelpDocumentsOutputs) {
  const auto r = invoke({"--help"});
  EXPECT_EQ(r.code, kExitPass);
  EXPECT_NE(r.out.find("gs_bound.csv"), std::string::npos);
  EXPECT_NE(r.out.find("FERMICERT_MODE_CAP"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(invoke({}).code, kExitUsage);
  EXPECT_EQ(invoke({"verify-lemma3", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(invoke({"verify-lemma3", "--family", "nonsense"}).code, kExitUsage);
}

TEST(Cli, FlatCirculantSpectrum) {
  const auto dir = scratch("flat");
  const auto r = invoke({"rdm-spectrum", "-V", "6", "-a", "0.5", "-o", dir});
  ASSERT_EQ(r.code, kExitPass) << r.out;
  const auto rows = read_csv(dir + "/rdm_spectrum.csv");
  ASSERT_EQ(rows.size(), 7u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i][3], "5.000000000000e-01");
  EXPECT_TRUE(fs::exists(dir + "/report.txt"));
}

TEST(Cli, NonPositiveMuIsEvaluatedAsOperatorByLemma3) {
  const auto dir = scratch("mu1");
  const auto r = invoke({"verify-lemma3", "--family", "mu", "--V", "6", "--p", "1", "--mu", "1", "--k", "2", "-o", dir});
  ASSERT_EQ(r.code, kExitPass) << r.out;
  EXPECT_NE(r.out.find("input is not a state"), std::string::npos);
  const auto rows = read_csv(dir + "/lemma3.csv");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][4], "2.679491924311e-01");  // tan(pi/12)
  EXPECT_EQ(rows[1][5], "7.698003589195e-01");  // 8/(sqrt3 V)
}

TEST(Cli, NonPositiveMuRejectedWhereAStateIsNeeded) {
  const auto dir = scratch("mu1_strict");
  const auto r = invoke({"check-invariance", "-V", "6", "--mu", "1", "-o", dir});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.out.find("not a valid state"), std::string::npos);
  EXPECT_EQ(invoke({"check-invariance", "-V", "6", "--mu", "1", "--unchecked", "-o", dir}).code, kExitPass);
  EXPECT_EQ(invoke({"verify-theorem1", "-V", "6", "--mu", "1", "--seed", "1", "-o", dir}).code, kExitUsage);
}

TEST(Cli, SpecStyleFlags) {
  const auto dir = scratch("flags");
  EXPECT_EQ(invoke({"rdm-spectrum", "--V", "6", "--a", "0.5", "--b", "0", "-o", dir}).code, kExitPass);
}

TEST(Cli, SeedRequiredForOptimizers) {
  EXPECT_EQ(invoke({"verify-theorem1", "-V", "6", "-o", scratch("noseed")}).code, kExitUsage);
  EXPECT_EQ(invoke({"gs-bound", "-o", scratch("noseed2")}).code, kExitUsage);
  EXPECT_EQ(invoke({"all", "-o", scratch("noseed3")}).code, kExitUsage);
}

TEST(Cli, MissingAndMalformedFixtures) {
  const auto dir = scratch("fixtures");
  EXPECT_EQ(invoke({"check-invariance", "--family", "file", "--state-file", kFixtures + "/does_not_exist.txt", "-o", dir})
                .code,
            kExitUsage);
  fs::create_directories(dir);
  std::ofstream(dir + "/bad.txt") << "1 0 (1,9)\n";
  EXPECT_EQ(invoke({"check-invariance", "--family", "file", "--state-file", dir + "/bad.txt", "-o", dir}).code,
            kExitUsage);
  // matrix of the wrong size for the requested shape
  EXPECT_EQ(invoke({"check-invariance", "--family", "file", "--state-file", kFixtures + "/pair_state_p2.txt",
                    "--state-format", "matrix", "-V", "3", "-o", dir})
                .code,
            kExitUsage);
}

TEST(Cli, FixtureStates) {
  const auto dir = scratch("states");
  EXPECT_EQ(invoke({"check-invariance", "--family", "file", "--state-file", kFixtures + "/mu_v6_half.txt", "-V", "6",
                    "-o", dir})
                .code,
            kExitPass);
  EXPECT_EQ(invoke({"check-invariance", "--family", "file", "--state-file", kFixtures + "/not_invariant_v3.txt",
                    "--state-format", "matrix", "-V", "3", "-o", dir})
                .code,
            kExitFail);
}

TEST(Cli, ResourceCapExitCode) {
  EXPECT_EQ(invoke({"rdm-spectrum", "--from-state", "-V", "13", "-o", scratch("cap")}).code, kExitResource);
}

TEST(Cli, NegativeControlFails) {
  const auto dir = scratch("pair");
  const auto r = invoke({"gs-bound", "--hamiltonian", "pair", "-V", "6", "--seed", "1", "-o", dir});
  EXPECT_EQ(r.code, kExitFail);
  EXPECT_NE(r.out.find("precondition failed"), std::string::npos);
}

TEST(Cli, TemplateFileWithExplicitSubsets) {
  const auto dir = scratch("template");
  const auto r = invoke({"gs-bound", "--hamiltonian", "file", "--template-file", kFixtures + "/hopping_template.txt",
                         "--subsets", "1,2;2,3;1,3", "-V", "3", "--seed", "2", "-o", dir});
  ASSERT_EQ(r.code, kExitPass) << r.out;
  const auto rows = read_csv(dir + "/gs_bound.csv");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][0], "file");
  EXPECT_EQ(rows[1].back(), "certified");
}

TEST(Cli, ConfigFile) {
  const auto dir = scratch("config");
  fs::create_directories(dir);
  std::ofstream(dir + "/run.toml") << "[rdm-spectrum]\nsites = [4, 5]\na = 0.25\nout = \"" << dir << "/out\"\n";
  const auto r = invoke({"--config", dir + "/run.toml", "rdm-spectrum"});
  ASSERT_EQ(r.code, kExitPass) << r.out << r.err;
  const auto rows = read_csv(dir + "/out/rdm_spectrum.csv");
  EXPECT_EQ(rows.size(), 10u);
  EXPECT_EQ(rows[1][3], "2.500000000000e-01");
}

TEST(Cli, CsvsAreDeterministic) {
  const auto a = scratch("det_a"), b = scratch("det_b");
  for (const auto& dir : {a, b})
    ASSERT_EQ(invoke({"verify-theorem1", "-V", "6", "--mu", "0.5", "-k", "2", "3", "--seed", "5", "--restarts", "2",
                      "--iters", "100", "-o", dir})
                  .code,
              kExitPass);
  EXPECT_EQ(read_file(a + "/theorem1.csv"), read_file(b + "/theorem1.csv"));
}

}  // namespace
}  // namespace fermicert
