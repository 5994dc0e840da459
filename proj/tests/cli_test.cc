//
// Copyright 2026 The tsdp Authors.
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
//

#include "cli.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "tsdp/config_io.h"

namespace tsdp {
namespace {

using ::testing::HasSubstr;
using ::testing::SizeIs;
using ::testing::StartsWith;

constexpr char kWorConfig[] = R"(
N = 320
L = 40
L_C = 3
L_F = 1
lambda = 1
Lambda = 32
sigma = 1
top_level = wor
bottom_level = wr
bound = tight
)";

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::path(::testing::TempDir()) /
           ::testing::UnitTest::GetInstance()->current_test_info()->name();
    std::filesystem::create_directories(dir_);
    config_ = WriteFile("wor.cfg", kWorConfig);
    unsetenv("TSDP_OUTPUT_DIR");
  }
  void TearDown() override {
    unsetenv("TSDP_OUTPUT_DIR");
    std::filesystem::remove_all(dir_);
  }

  std::string WriteFile(const std::string& name, const std::string& text) {
    const std::filesystem::path path = dir_ / name;
    std::ofstream(path) << text;
    return path.string();
  }

  int Run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    args.insert(args.begin(), "tsdp");
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    return RunCli(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  std::filesystem::path dir_;
  std::string config_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, ProfileRowMatchesLibrary) {
  ASSERT_EQ(Run({"profile", "--config", config_, "--alpha",
                 "2.718281828459045"}),
            kExitOk)
      << err_.str();
  auto table = ParseCsv(out_.str());
  ASSERT_TRUE(table.ok()) << table.status();
  ASSERT_THAT(table->rows, SizeIs(1));
  const CurveRow& row = table->rows[0];
  EXPECT_EQ(row.scheme, "wor_wr_lambda1_tight");
  EXPECT_EQ(row.bound_kind, "tight");
  EXPECT_NEAR(row.epsilon, 1, 1e-15);

  auto config = ParseRunConfig(kWorConfig);
  ASSERT_TRUE(config.ok());
  auto profile = BuildRunProfile(*config);
  ASSERT_TRUE(profile.ok());
  EXPECT_DOUBLE_EQ(row.delta, profile->Evaluate(std::exp(1.0)));
}

TEST_F(CliTest, DefaultAlphaGridHas200Rows) {
  ASSERT_EQ(Run({"profile", "--config", config_}), kExitOk) << err_.str();
  auto table = ParseCsv(out_.str());
  ASSERT_TRUE(table.ok());
  EXPECT_THAT(table->rows, SizeIs(200));
}

TEST_F(CliTest, EmptyAlphaListIsConfigError) {
  EXPECT_EQ(Run({"profile", "--config", config_, "--alpha", ""}),
            kExitConfigError);
  EXPECT_THAT(err_.str(), HasSubstr("--alpha"));
}

TEST_F(CliTest, UnavailableBoundNamesAlternatives) {
  EXPECT_EQ(Run({"profile", "--config", config_, "--sweep", "lambda=2"}),
            kExitConfigError);
  EXPECT_THAT(err_.str(), HasSubstr("available bounds: upper, lower"));
}

TEST_F(CliTest, MissingConfigIsConfigError) {
  EXPECT_EQ(Run({"profile", "--config", (dir_ / "nope.cfg").string()}),
            kExitConfigError);
}

TEST_F(CliTest, ComposeCsvHeaderAndJsonAgree) {
  ASSERT_EQ(Run({"compose", "--config", config_, "--steps", "1,10",
                 "--epsilon", "0.5,1"}),
            kExitOk)
      << err_.str();
  const std::string csv = out_.str();
  EXPECT_THAT(csv, StartsWith(std::string(kCsvHeader) + "\n"));
  auto from_csv = ParseCsv(csv);
  ASSERT_TRUE(from_csv.ok());
  EXPECT_THAT(from_csv->rows, SizeIs(4));

  ASSERT_EQ(Run({"compose", "--config", config_, "--steps", "1,10",
                 "--epsilon", "0.5,1", "--format", "json"}),
            kExitOk);
  auto from_json = ParseJson(out_.str());
  ASSERT_TRUE(from_json.ok()) << from_json.status();
  EXPECT_EQ(*from_csv, *from_json);
  // More steps leak more.
  EXPECT_GT(from_csv->rows[2].delta, from_csv->rows[0].delta);
}

TEST_F(CliTest, SweepExpandsLabels) {
  ASSERT_EQ(Run({"compose", "--config", config_, "--epsilon", "1", "--sweep",
                 "lambda=2,4", "--sweep", "bound=lower"}),
            kExitOk)
      << err_.str();
  auto table = ParseCsv(out_.str());
  ASSERT_TRUE(table.ok());
  ASSERT_THAT(table->rows, SizeIs(2));
  EXPECT_EQ(table->rows[0].scheme, "wor_wr_lambda1_tight[lambda=2][bound=lower]");
  EXPECT_EQ(table->rows[1].scheme, "wor_wr_lambda1_tight[lambda=4][bound=lower]");
  EXPECT_EQ(table->rows[0].bound_kind, "optimistic_lower");
}

TEST_F(CliTest, CompareTakesSeveralConfigs) {
  const std::string det =
      WriteFile("det.cfg", std::string(kWorConfig) + "top_level = deterministic\n");
  ASSERT_EQ(Run({"compare", "--config", config_, "--config", det, "--epochs",
                 "1", "--epsilon", "1"}),
            kExitOk)
      << err_.str();
  auto table = ParseCsv(out_.str());
  ASSERT_TRUE(table.ok());
  EXPECT_THAT(table->rows, SizeIs(2));
}

TEST_F(CliTest, CalibrateRoundTrips) {
  ASSERT_EQ(Run({"calibrate", "--config", config_, "--epsilon", "1",
                 "--delta", "1e-5", "--steps", "10"}),
            kExitOk)
      << err_.str();
  std::istringstream lines(out_.str());
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  EXPECT_EQ(header, "scheme,sigma,epsilon,delta,compositions");
  std::vector<std::string> fields;
  std::stringstream ss(row);
  for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
  ASSERT_THAT(fields, SizeIs(5));
  const double sigma = std::stod(fields[1]);

  ASSERT_EQ(Run({"compose", "--config", config_, "--steps", "10",
                 "--epsilon", fields[2], "--sweep",
                 "sigma=" + fields[1]}),
            kExitOk)
      << err_.str();
  auto table = ParseCsv(out_.str());
  ASSERT_TRUE(table.ok());
  EXPECT_GT(sigma, 1);
  EXPECT_LE(table->rows[0].delta, 1e-5 * (1 + 1e-6));
  EXPECT_GT(table->rows[0].delta, 0.5e-5);
}

TEST_F(CliTest, UnreachableCalibrationExitCode) {
  EXPECT_EQ(Run({"calibrate", "--config", config_, "--epsilon", "1e-6",
                 "--delta", "1e-12", "--steps", "1000"}),
            kExitUnattainable);
  EXPECT_THAT(err_.str(), HasSubstr("not reachable"));
}

TEST_F(CliTest, OutputDirectoryFromEnvironment) {
  setenv("TSDP_OUTPUT_DIR", dir_.c_str(), 1);
  ASSERT_EQ(Run({"profile", "--config", config_, "--alpha", "1,2"}), kExitOk);
  EXPECT_TRUE(out_.str().empty());
  EXPECT_TRUE(std::filesystem::exists(dir_ / "profile.csv"));

  ASSERT_EQ(Run({"profile", "--config", config_, "--alpha", "1,2", "--format",
                 "json", "--out", "mine.json"}),
            kExitOk);
  std::ifstream file(dir_ / "mine.json");
  std::stringstream text;
  text << file.rdbuf();
  auto table = ParseJson(text.str());
  ASSERT_TRUE(table.ok()) << table.status();
  EXPECT_THAT(table->rows, SizeIs(2));
}

TEST_F(CliTest, VerifyPasses) {
  EXPECT_EQ(Run({"verify", "--budget", "100000"}), kExitOk) << out_.str();
  EXPECT_THAT(out_.str(), HasSubstr("verification passed"));
}

TEST_F(CliTest, UnknownSubcommandFails) {
  EXPECT_NE(Run({"frobnicate"}), kExitOk);
}

}  // namespace
}  // namespace tsdp
