#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "qeswkb_tools/cli.hpp"

namespace fs = std::filesystem;
using namespace qeswkb::tools;

namespace {

struct Result {
  int rc;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "qeswkb");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int rc = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {rc, out.str(), err.str()};
}

std::vector<std::vector<std::string>> rows(const std::string& text, char sep = ',') {
  std::vector<std::vector<std::string>> table;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, sep)) cells.push_back(cell);
    table.push_back(cells);
  }
  return table;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qeswkb_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

const std::vector<std::string> kMorseArgs = {"morse", "--a", "1", "--b", "8", "--alpha", "1.41421356",
                                             "--N", "0", "--n-max", "5"};

}  // namespace

TEST(Cli, MorseExactAgainstNumeric) {
  const Result r = cli(kMorseArgs);
  ASSERT_EQ(r.rc, kExitOk) << r.err;
  const auto t = rows(r.out);
  ASSERT_EQ(t.size(), 7u);
  EXPECT_EQ(t[0][0], "n");
  EXPECT_EQ(t[0][1], "E_exact");
  EXPECT_EQ(t[0][2], "E_numeric");
  EXPECT_EQ(t[0][3], "abs_diff");
  for (std::size_t i = 1; i < t.size(); ++i) {
    EXPECT_LT(std::abs(std::stod(t[i][1]) - std::stod(t[i][2])), 1e-8);
    EXPECT_LT(std::stod(t[i][3]), 1e-8);
  }
  EXPECT_NEAR(std::stod(t[2][1]), 0.5 * 1.41421356 * (16.0 - 1.41421356), 1e-12);
}

TEST(Cli, WkbTableForSexticNZero) {
  const Result r = cli({"wkb", "--family", "sextic_reduced", "--N", "0", "--n-max", "50"});
  ASSERT_EQ(r.rc, kExitOk) << r.err;
  const auto t = rows(r.out);
  ASSERT_EQ(t.size(), 52u);
  EXPECT_EQ(t[0].back(), "gamma");
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double g = std::stod(t[i].back());
    EXPECT_GT(g, 0.0);
    EXPECT_LT(g, 0.2);
  }
  EXPECT_NEAR(std::stod(t[4].back()), 0.013944, 2e-3 * 0.013944);
}

TEST(Cli, UsageErrorsNameTheOffendingFlag) {
  Result r = cli({"spectrum", "--n-max", "500"});
  EXPECT_EQ(r.rc, kExitUsage);
  EXPECT_NE(r.err.find("--n-max"), std::string::npos) << r.err;
  r = cli({"spectrum", "--format", "xml"});
  EXPECT_EQ(r.rc, kExitUsage);
  EXPECT_NE(r.err.find("--format"), std::string::npos) << r.err;
  r = cli({"spectrum", "--bogus", "1"});
  EXPECT_EQ(r.rc, kExitUsage);
  EXPECT_NE(r.err.find("--bogus"), std::string::npos) << r.err;
  r = cli({"spectrum", "--tol", "1e-20"});
  EXPECT_EQ(r.rc, kExitUsage);
  r = cli({});
  EXPECT_EQ(r.rc, kExitUsage);
  r = cli({"spectrum", "--family", "quartic"});
  EXPECT_EQ(r.rc, kExitUsage);
  EXPECT_NE(r.err.find("quartic"), std::string::npos) << r.err;
  r = cli({"fit-gamma", "--n-max", "10"});
  EXPECT_EQ(r.rc, kExitUsage);
  r = cli({"spectrum", "--config", "/nonexistent/qeswkb.cfg"});
  EXPECT_EQ(r.rc, kExitUsage);
}

TEST(Cli, ComputationErrorsExitWithCode3) {
  const Result r = cli({"spectrum", "--family", "morse", "--a", "1", "--b", "8", "--alpha", "1.41421356", "--n-max", "9"});
  EXPECT_EQ(r.rc, kExitComputation);
  EXPECT_FALSE(r.err.empty());
  EXPECT_EQ(cli({"qes", "--N", "0.5"}).rc, kExitComputation);
}

TEST(Cli, ConfigFileMatchesFlags) {
  const fs::path dir = scratch("config");
  fs::create_directories(dir);
  const fs::path cfg = dir / "morse.cfg";
  std::ofstream(cfg) << "family=morse\na=1\nb=8\nalpha=1.41421356\nN=0\n";
  const Result a = cli({"morse", "--config", cfg.string(), "--n-max", "5"});
  const Result b = cli(kMorseArgs);
  ASSERT_EQ(a.rc, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);

  // Flags override the file.
  const Result c = cli({"morse", "--config", cfg.string(), "--b", "6", "--n-max", "3"});
  ASSERT_EQ(c.rc, kExitOk) << c.err;
  EXPECT_NE(c.out, b.out);

  const fs::path bad = dir / "bad.cfg";
  std::ofstream(bad) << "family=morse\nthis line is broken\n";
  const Result d = cli({"morse", "--config", bad.string()});
  EXPECT_EQ(d.rc, kExitUsage);
  EXPECT_NE(d.err.find("bad.cfg"), std::string::npos) << d.err;
  fs::remove_all(dir);
}

TEST(Cli, OutputIsDeterministicAndTsvWorks) {
  const std::vector<std::string> args{"spectrum", "--N", "0.25", "--n-max", "8"};
  const Result a = cli(args);
  const Result b = cli(args);
  ASSERT_EQ(a.rc, kExitOk);
  EXPECT_EQ(a.out, b.out);
  auto tsv_args = args;
  tsv_args.insert(tsv_args.end(), {"--format", "tsv"});
  const Result t = cli(tsv_args);
  ASSERT_EQ(t.rc, kExitOk);
  const auto table = rows(t.out, '\t');
  ASSERT_EQ(table.size(), 10u);
  EXPECT_EQ(table[0][0], "n");
  EXPECT_EQ(table[0][1], "E_n");
}

TEST(Cli, FilesInOutputDirectory) {
  const fs::path dir = scratch("files");
  Result r = cli({"susy", "--N", "2", "--out", dir.string()});
  ASSERT_EQ(r.rc, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(dir / "partner.csv"));
  EXPECT_TRUE(fs::exists(dir / "partner.txt"));
  const auto t = rows(slurp(dir / "intertwining.csv"));
  ASSERT_EQ(t.size(), 4u);
  EXPECT_EQ(t[1][4], "1");  // the seed is annihilated
  for (std::size_t i = 2; i < t.size(); ++i) EXPECT_LT(std::stod(t[i][2]), 1e-8);

  r = cli({"qes", "--N", "3", "--out", dir.string()});
  ASSERT_EQ(r.rc, kExitOk) << r.err;
  EXPECT_EQ(rows(slurp(dir / "qes_residuals.csv")).size(), 5u);
  EXPECT_TRUE(fs::exists(dir / "qes.txt"));
  fs::remove_all(dir);
}

TEST(Cli, FitCommandsReport) {
  const fs::path dir = scratch("fit");
  const Result r = cli({"fit-energy", "--N", "0", "--n-max", "50", "--out", dir.string()});
  ASSERT_EQ(r.rc, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(dir / "energy_params_refit.txt"));
  EXPECT_TRUE(fs::exists(dir / "energy_params_published.txt"));
  fs::remove_all(dir);
}
