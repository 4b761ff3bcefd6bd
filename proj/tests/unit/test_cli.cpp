#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = gnbp::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() /
                   ("gnbp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double value_after(const std::string& text, const std::string& key) {
  const auto pos = text.find(key);
  if (pos == std::string::npos) return NAN;
  return std::stod(text.substr(pos + key.size()));
}

const std::string kGalaxy = std::string(GNBP_DATA_DIR) + "/galaxy.csv";

TEST(Cli, HelpListsSubcommands) {
  const auto r = run_cli({"--help"});
  EXPECT_EQ(r.code, 0);
  for (const char* sub : {"simulate-prior", "pmf", "fit", "prior-partitions", "summarize", "export-figures"}) {
    EXPECT_NE(r.out.find(sub), std::string::npos) << sub;
  }
  EXPECT_EQ(run_cli({}).code, gnbp::cli::kUsageError);
}

TEST(Cli, SimulatePriorMeanClusters) {
  const auto r = run_cli({"simulate-prior", "--mass", "1", "--a", "0", "--expected-m", "100",
                          "--n-draws", "100000"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(value_after(r.out, "mean_l = "), 4.615, 0.05);
  EXPECT_NEAR(value_after(r.out, "expected_l = "), 4.6151, 1e-4);
}

TEST(Cli, RejectsInvalidParameters) {
  EXPECT_EQ(run_cli({"simulate-prior", "--a", "1.5", "--p", "0.5"}).code, gnbp::cli::kUsageError);
  EXPECT_EQ(run_cli({"simulate-prior", "--p", "1.5"}).code, gnbp::cli::kUsageError);
  EXPECT_EQ(run_cli({"simulate-prior", "--mass", "-1", "--p", "0.5"}).code, gnbp::cli::kUsageError);
  EXPECT_EQ(run_cli({"pmf", "--kind", "nonsense"}).code, gnbp::cli::kUsageError);
  EXPECT_EQ(run_cli({"fit", "--data", kGalaxy, "--variant", "nrmi", "--a", "-1"}).code,
            gnbp::cli::kUsageError);
  EXPECT_EQ(run_cli({"fit", "--data", kGalaxy, "--bogus"}).code, gnbp::cli::kUsageError);
}

TEST(Cli, SeedDeterminism) {
  const auto dir = scratch_dir();
  for (const char* name : {"a.csv", "b.csv"}) {
    const auto r = run_cli({"simulate-prior", "--mass", "2", "--a", "0.3", "--p", "0.7", "--n-draws",
                            "500", "--seed", "7", "--out", (dir / name).string()});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
  EXPECT_FALSE(slurp(dir / "a.csv").empty());

  for (const char* name : {"t1.jsonl", "t2.jsonl"}) {
    const auto r = run_cli({"fit", "--data", kGalaxy, "--iterations", "60", "--burn-in", "20",
                            "--grid-points", "99", "--seed", "7", "--out", (dir / name).string()});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  EXPECT_EQ(slurp(dir / "t1.jsonl"), slurp(dir / "t2.jsonl"));
  fs::remove_all(dir);
}

TEST(Cli, ClusterNumberPmfSumsToOne) {
  const auto dir = scratch_dir();
  const auto path = dir / "pmf.csv";
  const auto r = run_cli({"pmf", "--kind", "cluster-number", "--m", "100", "--mass", "1", "--a", "0.9",
                          "--variant", "gnbp", "--expected-m", "100", "--out", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(slurp(path));
  std::string line;
  std::getline(in, line);
  double total = 0.0;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    total += std::stod(line.substr(line.find(',') + 1));
    ++rows;
  }
  EXPECT_EQ(rows, 101);
  EXPECT_NEAR(total, 1.0, 1e-9);
  fs::remove_all(dir);
}

TEST(Cli, DatasetErrorsExitTwo) {
  const auto dir = scratch_dir();
  std::ofstream(dir / "bad.csv") << "x\n1.0\nNaN\n";
  const auto r = run_cli({"fit", "--data", (dir / "bad.csv").string(), "--iterations", "10",
                          "--burn-in", "2"});
  EXPECT_EQ(r.code, gnbp::cli::kUsageError);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
  EXPECT_EQ(run_cli({"fit", "--data", (dir / "missing.csv").string()}).code, gnbp::cli::kUsageError);
  fs::remove_all(dir);
}

TEST(Cli, FitZeroDiscountAndSummary) {
  const auto dir = scratch_dir();
  const auto r = run_cli({"fit", "--data", kGalaxy, "--a", "0", "--iterations", "300", "--burn-in",
                          "100", "--seed", "2", "--out", (dir / "t.csv").string(), "--summary",
                          (dir / "s.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto summary = nlohmann::json::parse(slurp(dir / "s.json"));
  EXPECT_EQ(summary.at("records"), 200);
  EXPECT_DOUBLE_EQ(summary.at("mean_discount").get<double>(), 0.0);

  const auto again = run_cli({"summarize", "--trace", (dir / "t.csv").string()});
  ASSERT_EQ(again.code, 0) << again.err;
  EXPECT_DOUBLE_EQ(nlohmann::json::parse(again.out).at("posterior_mean_l").get<double>(),
                   summary.at("posterior_mean_l").get<double>());
  fs::remove_all(dir);
}

TEST(Cli, ToyDataPosteriorMode) {
  const auto dir = scratch_dir();
  std::ofstream(dir / "toy.csv") << "x\n-50\n0\n50\n";
  // Unit kernel variance, so the points are 50 standard deviations apart.
  std::ofstream(dir / "toy.cfg") << "learn_hypers = false\nprecision = 1\nbase_mean = 0\n"
                                    "base_precision = 1e-4\n";
  const auto r = run_cli({"fit", "--data", (dir / "toy.csv").string(), "--config",
                          (dir / "toy.cfg").string(), "--a", "0", "--mass", "learn",
                          "--iterations", "4000", "--burn-in", "1000", "--seed", "3", "--summary",
                          (dir / "s.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto hist = nlohmann::json::parse(slurp(dir / "s.json")).at("l_histogram");
  std::string mode;
  double best = -1.0;
  for (const auto& [k, v] : hist.items()) {
    if (v.get<double>() > best) {
      best = v.get<double>();
      mode = k;
    }
  }
  EXPECT_EQ(mode, "3");
  fs::remove_all(dir);
}

TEST(Cli, MultipleChains) {
  const auto dir = scratch_dir();
  const auto r = run_cli({"fit", "--data", kGalaxy, "--iterations", "40", "--burn-in", "10",
                          "--grid-points", "99", "--chains", "2", "--out", (dir / "t.jsonl").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "t_chain0.jsonl"));
  EXPECT_TRUE(fs::exists(dir / "t_chain1.jsonl"));
  EXPECT_NE(slurp(dir / "t_chain0.jsonl"), slurp(dir / "t_chain1.jsonl"));
  fs::remove_all(dir);
}

TEST(Cli, PriorPartitionsContrast) {
  auto hist = [](const std::string& m) {
    const auto r = run_cli({"prior-partitions", "--m", m, "--j", "20", "--p", "0.9", "--mass", "1",
                            "--a", "0.5", "--iterations", "6000", "--burn-in", "1000", "--seed", "4"});
    EXPECT_EQ(r.code, 0) << r.err;
    return r.out;
  };
  EXPECT_NE(hist("20"), hist("100"));
  EXPECT_EQ(run_cli({"prior-partitions", "--m", "5", "--j", "6", "--p", "0.5"}).code,
            gnbp::cli::kUsageError);
}

TEST(Cli, ExportFigures) {
  const auto dir = scratch_dir();
  const auto r = run_cli({"export-figures", "--which", "fig3", "--which", "fig2", "--out-dir", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(slurp(dir / "fig3_gnbp.csv"));
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "n_k,a=-4,a=-2,a=0,a=0.25,a=0.5");
  EXPECT_TRUE(fs::exists(dir / "fig2_reparam.csv"));
  EXPECT_EQ(run_cli({"export-figures", "--which", "fig9", "--out-dir", dir.string()}).code,
            gnbp::cli::kUsageError);
  fs::remove_all(dir);
}

}  // namespace
