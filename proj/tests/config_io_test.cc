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

#include "tsdp/config_io.h"

#include <cmath>
#include <limits>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace tsdp {
namespace {

using ::testing::HasSubstr;

constexpr char kWorConfig[] = R"(
# Paper-scale setup
N = 320
L = 40
L_C = 3
L_F = 1   # forecast window
Lambda = 32
sigma = 1
top_level = wor
bottom_level = wr
)";

TEST(ParseRunConfigTest, ReadsAllFields) {
  auto config = ParseRunConfig(kWorConfig);
  ASSERT_TRUE(config.ok()) << config.status();
  EXPECT_EQ(config->scheme.num_sequences, 320);
  EXPECT_EQ(config->scheme.lengths, std::vector<int64_t>{40});
  EXPECT_EQ(config->scheme.top_level, TopLevel::kWithoutReplacement);
  EXPECT_EQ(config->bound, BoundRequest::kTight);
  EXPECT_EQ(config->label, "wor_wr_lambda1_tight");

  auto full = ParseRunConfig(R"(
label = mine
N = 10
L = 12, 20
L_C = 2
L_F = 2
lambda = 2
Lambda = 4
sigma = 0.5
top_level = deterministic
bottom_level = poisson
relation = user
w = 3
v = 1.5
dims = 2
bound = upper
)");
  ASSERT_TRUE(full.ok()) << full.status();
  EXPECT_EQ(full->label, "mine");
  EXPECT_EQ(full->scheme.lengths, (std::vector<int64_t>{12, 20}));
  EXPECT_EQ(full->scheme.relation.kind, RelationKind::kUser);
  EXPECT_EQ(full->scheme.relation.w, 3);
  EXPECT_EQ(*full->scheme.relation.magnitude, 1.5);
  EXPECT_EQ(full->scheme.relation.input_dims, 2);
  EXPECT_EQ(full->bound, BoundRequest::kUpper);
}

TEST(ParseRunConfigTest, Augmentation) {
  auto config = ParseRunConfig(std::string(kWorConfig) +
                               "v = 1\nsigma_C = 0\nsigma_F = inf\nbound = upper\n");
  ASSERT_TRUE(config.ok()) << config.status();
  ASSERT_TRUE(config->scheme.augmentation.has_value());
  EXPECT_TRUE(std::isinf(config->scheme.augmentation->sigma_forecast));
  EXPECT_TRUE(BuildRunProfile(*config).ok());
}

TEST(ParseRunConfigTest, Blackbox) {
  auto config = ParseRunConfig(
      "scheme = blackbox\nN_total = 10000\nLambda = 1000\ngroup = 16\n"
      "sigma = 1\nbound = lower\n");
  ASSERT_TRUE(config.ok()) << config.status();
  EXPECT_EQ(config->label, "blackbox_group16");
  auto profile = BuildRunProfile(*config);
  ASSERT_TRUE(profile.ok());
  EXPECT_EQ(profile->bound_kind(), BoundKind::kOptimisticLower);
  EXPECT_EQ(*CompositionsPerEpoch(*config, *profile), 10);
  EXPECT_THAT(ParseRunConfig("scheme = blackbox\nN_total = 100\nLambda = 10\n"
                             "group = 200\n")
                  .status()
                  .message(),
              HasSubstr("group"));
}

TEST(ParseRunConfigTest, FieldLevelErrors) {
  EXPECT_THAT(ParseRunConfig("N = abc\n").status().message(), HasSubstr("N:"));
  EXPECT_THAT(ParseRunConfig("colour = red\n").status().message(),
              HasSubstr("colour: unknown key"));
  EXPECT_THAT(ParseRunConfig("just text\n").status().message(),
              HasSubstr("line 1"));
  EXPECT_THAT(
      ParseRunConfig(std::string(kWorConfig) + "top_level = sometimes\n")
          .status()
          .message(),
      HasSubstr("top_level"));
  EXPECT_THAT(ParseRunConfig(std::string(kWorConfig) + "sigma = -1\n")
                  .status()
                  .message(),
              HasSubstr("sigma"));
  EXPECT_THAT(ParseRunConfig(std::string(kWorConfig) + "label = a,b\n")
                  .status()
                  .message(),
              HasSubstr("label"));
  EXPECT_EQ(LoadRunConfig("/nonexistent/file.cfg").status().code(),
            absl::StatusCode::kNotFound);
}

TEST(ApplyOverrideTest, RevalidatesAndKeepsOriginalOnError) {
  RunConfig config = *ParseRunConfig(kWorConfig);
  ASSERT_TRUE(ApplyOverride(config, "lambda", "2").ok());
  EXPECT_EQ(config.scheme.subsequences_per_sequence, 2);
  EXPECT_FALSE(ApplyOverride(config, "lambda", "64").ok());
  EXPECT_EQ(config.scheme.subsequences_per_sequence, 2);
}

TEST(CompositionsPerEpochTest, FollowsScope) {
  RunConfig config = *ParseRunConfig(kWorConfig);
  EXPECT_EQ(*CompositionsPerEpoch(config, *BuildRunProfile(config)), 10);
  ASSERT_TRUE(ApplyOverride(config, "top_level", "deterministic").ok());
  EXPECT_EQ(*CompositionsPerEpoch(config, *BuildRunProfile(config)), 1);
}

CurveTable SampleTable() {
  CurveTable table;
  table.rows = {
      {"b", 1, 0.1, 1.0 / 3, "tight"},
      {"a", 10, 2.5e-300, 0.1 + 0.2, "optimistic_lower"},
      {"a", 2, 1e-3, 4.9406564584124654e-324, "pessimistic_upper"},
      {"a", 2, std::numeric_limits<double>::infinity(), 0, "tight"},
  };
  table.Sort();
  return table;
}

TEST(CurveTableTest, SortsByLabelStepEpsilon) {
  const CurveTable table = SampleTable();
  EXPECT_EQ(table.rows[0].scheme, "a");
  EXPECT_EQ(table.rows[0].step, 2);
  EXPECT_EQ(table.rows[0].epsilon, 1e-3);
  EXPECT_EQ(table.rows[2].step, 10);
  EXPECT_EQ(table.rows[3].scheme, "b");
}

TEST(CurveTableTest, CsvRoundTripIsExact) {
  const CurveTable table = SampleTable();
  const std::string csv = ToCsv(table);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kCsvHeader);
  auto parsed = ParseCsv(csv);
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  EXPECT_EQ(*parsed, table);
  EXPECT_FALSE(ParseCsv("eps,delta\n1,2\n").ok());
  EXPECT_FALSE(ParseCsv(std::string(kCsvHeader) + "\na,1,2\n").ok());
}

TEST(CurveTableTest, JsonRoundTripIsExact) {
  const CurveTable table = SampleTable();
  auto parsed = ParseJson(ToJson(table));
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  EXPECT_EQ(*parsed, table);
  EXPECT_FALSE(ParseJson("{\"rows\": 3}").ok());
  EXPECT_FALSE(ParseJson("not json").ok());
}

}  // namespace
}  // namespace tsdp
