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

#include "tsdp/calibration.h"

#include <cmath>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace tsdp {
namespace {

absl::StatusOr<PrivacyProfile> GaussianForSigma(double sigma) {
  auto pair = MixturePair::Create(GaussianMixture::Single(1, sigma),
                                  GaussianMixture::Single(0, sigma));
  if (!pair.ok()) return pair.status();
  return PrivacyProfile::Create(*pair, pair->Swapped(), std::nullopt,
                                BoundKind::kTight, ProfileScope::kPerStep);
}

TEST(CalibrateSigmaTest, GaussianRoundtrip) {
  auto result = CalibrateSigma(GaussianForSigma, 1, 0.126936, 1);
  ASSERT_TRUE(result.ok()) << result.status();
  EXPECT_NEAR(result->sigma, 1, 0.01);
  EXPECT_LE(result->epsilon, 1);
  EXPECT_GE(result->epsilon, 1 - 1e-3);
}

TEST(CalibrateSigmaTest, MoreStepsNeedMoreNoise) {
  double previous = 0;
  for (int64_t steps : {1, 10, 100}) {
    auto result = CalibrateSigma(GaussianForSigma, 1, 1e-5, steps);
    ASSERT_TRUE(result.ok()) << result.status();
    EXPECT_GT(result->sigma, previous);
    previous = result->sigma;
  }
}

TEST(CalibrateSigmaTest, UnreachableTarget) {
  auto result = CalibrateSigma(GaussianForSigma, 1e-4, 1e-7, 1);
  EXPECT_EQ(result.status().code(), absl::StatusCode::kOutOfRange);
  EXPECT_THAT(result.status().message(), ::testing::HasSubstr("sigma = 100"));
}

TEST(CalibrateSigmaTest, RejectsBadTargets) {
  EXPECT_FALSE(CalibrateSigma(GaussianForSigma, 0, 1e-5, 1).ok());
  EXPECT_FALSE(CalibrateSigma(GaussianForSigma, 1, 1, 1).ok());
  EXPECT_FALSE(CalibrateSigma(GaussianForSigma, 1, 1e-5, 0).ok());
}

TEST(CalibrateSigmaTest, SchemeConfig) {
  SchemeConfig c;
  c.num_sequences = 320;
  c.lengths = {40};
  c.context_length = 3;
  c.forecast_length = 1;
  c.batch_size = 32;
  c.top_level = TopLevel::kWithoutReplacement;
  auto result = CalibrateSigma(c, BoundRequest::kTight, 2, 1e-5, 10);
  ASSERT_TRUE(result.ok()) << result.status();
  c.sigma = result->sigma;
  auto check = EpsilonForProfile(*BuildProfile(c, BoundRequest::kTight), 10,
                                 1e-5);
  ASSERT_TRUE(check.ok());
  EXPECT_NEAR(check->epsilon, 2, 2e-3);
  c.subsequences_per_sequence = 2;
  EXPECT_EQ(CalibrateSigma(c, BoundRequest::kTight, 2, 1e-5, 10).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

}  // namespace
}  // namespace tsdp
