// Copyright 2026 The ndotomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli/commands.h"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ndotomo/checkpoint.h"
#include "ndotomo/report.h"

namespace ndotomo::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ndotomo_cli_test_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run_cli(args, out_, err_);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }
  static std::size_t line_count(const std::string& p) {
    const std::string s = slurp(p);
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, GenWritesNineBasesOfRecords) {
  ASSERT_EQ(run({"gen", "--target", "bell", "--p-dep", "0.5", "--n-samples", "1000", "--seed", "7",
                 "--out", path("d.txt")}),
            kExitOk)
      << err_.str();
  EXPECT_EQ(line_count(path("d.txt")), 9001u);  // version header + 9 x 1000 records
  EXPECT_NE(err_.str().find("purity 0.4375"), std::string::npos) << err_.str();
}

TEST_F(CliTest, GenIsDeterministic) {
  ASSERT_EQ(run({"gen", "--target", "psi_i", "--n-samples", "100", "--out", path("a.txt")}), kExitOk);
  ASSERT_EQ(run({"gen", "--target", "psi_i", "--n-samples", "100", "--out", path("b.txt")}), kExitOk);
  EXPECT_EQ(slurp(path("a.txt")), slurp(path("b.txt")));
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({"gen", "--target", "bell"}), kExitUsage);
  EXPECT_EQ(run({"gen", "--target", "ghz", "--out", path("x")}), kExitUsage);
  EXPECT_EQ(run({"gen", "--p-dep", "2", "--out", path("x")}), kExitUsage);
  EXPECT_EQ(run({"gen", "--bases", "ZZZ", "--out", path("x")}), kExitUsage);
  EXPECT_EQ(run({"gen", "--target", "file", "--out", path("x")}), kExitUsage);
  EXPECT_EQ(run({}), kExitUsage);
  EXPECT_EQ(run({"bogus"}), kExitUsage);
  EXPECT_EQ(run({"--help"}), kExitOk);
  EXPECT_NE(out_.str().find("sweep"), std::string::npos);
}

TEST_F(CliTest, RuntimeFailuresExitOne) {
  EXPECT_EQ(run({"train", "--data", path("missing.txt"), "--out-model", path("m.json")}),
            kExitFailure);
  std::ofstream(path("bad.txt")) << "ZZ 01\nXQ 00\n";
  EXPECT_EQ(run({"train", "--data", path("bad.txt"), "--out-model", path("m.json")}), kExitFailure);
  EXPECT_NE(err_.str().find("line 2"), std::string::npos) << err_.str();
}

TEST_F(CliTest, TrainThenEval) {
  ASSERT_EQ(run({"gen", "--n-samples", "50", "--out", path("d.txt")}), kExitOk);
  ASSERT_EQ(run({"train", "--data", path("d.txt"), "--epochs", "3", "--reference", "bell",
                 "--out-model", path("m.json"), "--out-report", path("r.csv")}),
            kExitOk)
      << err_.str();
  EXPECT_NE(err_.str().find("epoch 3/3"), std::string::npos);
  EXPECT_EQ(line_count(path("r.csv")), 4u + 3u);

  // Against its own materialized state the fidelity is one.
  write_density(materialize(load_checkpoint(fs::path(path("m.json")))), fs::path(path("self.txt")));
  ASSERT_EQ(run({"eval", "--model", path("m.json"), "--reference", "file", "--reference-file",
                 path("self.txt")}),
            kExitOk)
      << err_.str();
  const std::string report = out_.str();
  EXPECT_EQ(report.rfind("# ndotomo eval v1\n", 0), 0u);
  EXPECT_NE(report.find("fidelity,1.0000000000"), std::string::npos) << report;
  std::istringstream blocks(report);
  const ComplexMatrix m = read_matrix_blocks(blocks);
  EXPECT_EQ(m.rows(), 4);
  EXPECT_EQ(m.cols(), 4);
}

TEST_F(CliTest, TrainIsDeterministic) {
  ASSERT_EQ(run({"gen", "--n-samples", "30", "--out", path("d.txt")}), kExitOk);
  for (const char* name : {"a", "b"}) {
    ASSERT_EQ(run({"train", "--data", path("d.txt"), "--epochs", "2", "--seed", "4", "--quiet",
                   "--out-model", path(std::string(name) + ".json"), "--out-report",
                   path(std::string(name) + ".csv")}),
              kExitOk);
  }
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
}

TEST_F(CliTest, ConfigFileSuppliesDefaults) {
  std::ofstream(path("cfg.ini")) << "[gen]\nn-samples=5\nbases=ZZ,XX\n";
  ASSERT_EQ(run({"--config", path("cfg.ini"), "gen", "--out", path("d.txt")}), kExitOk)
      << err_.str();
  EXPECT_EQ(line_count(path("d.txt")), 11u);
}

TEST_F(CliTest, SweepRowsAndSummary) {
  ASSERT_EQ(run({"sweep", "--p-dep-list", "0.5", "--ns-list", "1000", "--n-aux-list", "2",
                 "--repeats", "5", "--max-updates", "20", "--maxlik-iters", "50", "--seed", "3",
                 "--out-csv", path("s.csv")}),
            kExitOk)
      << err_.str();
  std::ifstream in(path("s.csv"));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "# ndotomo sweep v1");
  std::getline(in, line);
  EXPECT_EQ(line,
            "kind,p_dep,n_s,n_aux,repeat,seed,fidelity_ndo,fidelity_maxlik,nll_best,"
            "fidelity_ndo_std,fidelity_maxlik_std,nll_best_std,status");
  int runs = 0, summaries = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 12) << line;
    if (line.rfind("run,", 0) == 0) {
      EXPECT_NE(line.find("," + std::to_string(3 + runs) + ","), std::string::npos) << line;
      ++runs;
    }
    if (line.rfind("summary,", 0) == 0) ++summaries;
  }
  EXPECT_EQ(runs, 5);
  EXPECT_EQ(summaries, 1);
}

TEST_F(CliTest, SweepIndependentOfJobCount) {
  SweepOptions opts;
  opts.p_dep_list = {0.0, 1.0};
  opts.ns_list = {50};
  opts.n_aux_list = {1};
  opts.repeats = 2;
  opts.train.max_updates = 10;
  opts.maxlik_iters = 20;
  opts.jobs = 1;
  const auto serial = run_sweep(opts, nullptr);
  opts.jobs = 3;
  const auto parallel = run_sweep(opts, nullptr);
  std::ostringstream a, b;
  write_sweep_csv(serial, a);
  write_sweep_csv(parallel, b);
  EXPECT_EQ(a.str(), b.str());
}

TEST_F(CliTest, SweepRecordsFailuresAndContinues) {
  SweepOptions opts;
  opts.p_dep_list = {0.0};
  opts.ns_list = {20};
  opts.n_aux_list = {1};
  opts.repeats = 2;
  opts.train.max_updates = 5;
  opts.train.batch_size = 0;  // every row fails inside train
  opts.maxlik_iters = 5;
  const auto rows = run_sweep(opts, nullptr);
  ASSERT_EQ(rows.size(), 2u);
  for (const SweepRow& r : rows) {
    EXPECT_NE(r.status.find("error"), std::string::npos);
    EXPECT_FALSE(r.fidelity_ndo.has_value());
  }
  std::ostringstream csv;
  write_sweep_csv(rows, csv);
  EXPECT_NE(csv.str().find("2 failed"), std::string::npos);
}

}  // namespace
}  // namespace ndotomo::cli
