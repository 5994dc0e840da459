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

#include "tsdp/accountant.h"

#include <cmath>
#include <limits>
#include <random>

#include "gtest/gtest.h"
#include "tsdp/gaussian_mixture.h"
#include "tsdp/profiles.h"

namespace tsdp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

PrivacyProfile GaussianProfile(double gap, double sigma) {
  const MixturePair pair =
      *MixturePair::Create(GaussianMixture::Single(gap, sigma),
                           GaussianMixture::Single(0, sigma));
  return *PrivacyProfile::Create(pair, pair.Swapped(), std::nullopt,
                                 BoundKind::kTight, ProfileScope::kPerStep);
}

double GaussianDelta(double sigma, double eps) {
  return NormalCdf(1 / (2 * sigma) - sigma * eps) -
         std::exp(eps) * NormalCdf(-1 / (2 * sigma) - sigma * eps);
}

double TotalMass(const DiscretePld& pld) {
  return pld.FiniteMass() + pld.infinity_mass;
}

SchemeConfig DetWrConfig() {
  SchemeConfig c;
  c.num_sequences = 320;
  c.lengths = {40};
  c.context_length = 3;
  c.forecast_length = 1;
  c.batch_size = 32;
  c.sigma = 1;
  return c;
}

TEST(QuantizeTest, GaussianPair) {
  auto pld = Quantize(GaussianProfile(1, 1));
  ASSERT_TRUE(pld.ok());
  EXPECT_NEAR(TotalMass(pld->p_over_q), 1, 1e-9);
  EXPECT_NEAR(TotalMass(pld->q_over_p), 1, 1e-9);
  EXPECT_NEAR(DeltaAtEpsilon(*pld, 0), 0.3829249, 1e-7);
  EXPECT_NEAR(DeltaAtEpsilon(*pld, 1), 0.126936, 1e-6);
}

TEST(QuantizeTest, IdenticalPairIsPointMass) {
  auto pld = Quantize(GaussianProfile(0, 1));
  ASSERT_TRUE(pld.ok());
  ASSERT_EQ(pld->p_over_q.masses.size(), 1u);
  EXPECT_EQ(pld->p_over_q.min_index, 0);
  EXPECT_EQ(pld->p_over_q.masses[0], 1);
  for (double eps : {0.0, 0.5, 3.0}) EXPECT_EQ(DeltaAtEpsilon(*pld, eps), 0);
}

TEST(QuantizeTest, PessimisticOffGrid) {
  const PrivacyProfile profile = *DeterministicWrTight(DetWrConfig());
  auto pld = Quantize(profile);
  ASSERT_TRUE(pld.ok());
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> eps(0, 8);
  for (int i = 0; i < 50; ++i) {
    const double e = eps(rng);
    EXPECT_GE(DeltaAtEpsilon(*pld, e), profile.DeltaAtEpsilon(e) - 1e-13)
        << "eps=" << e;
  }
  // Exact at grid points.
  for (int k : {0, 100, 1000, 2500}) {
    const double e = k * 1e-3;
    EXPECT_NEAR(DeltaAtEpsilon(*pld, e), profile.DeltaAtEpsilon(e), 1e-12);
  }
}

TEST(QuantizeTest, GapShrinksWithSpacing) {
  const PrivacyProfile profile = *DeterministicWrTight(DetWrConfig());
  QuantizationOptions coarse;
  coarse.grid_spacing = 1e-2;
  auto coarse_pld = *Quantize(profile, coarse);
  auto fine_pld = *Quantize(profile);
  double coarse_gap = 0, fine_gap = 0;
  for (double e = 0.0037; e < 4; e += 0.0731) {
    const double exact = profile.DeltaAtEpsilon(e);
    coarse_gap = std::max(coarse_gap, DeltaAtEpsilon(coarse_pld, e) - exact);
    fine_gap = std::max(fine_gap, DeltaAtEpsilon(fine_pld, e) - exact);
  }
  EXPECT_GT(coarse_gap, 0);
  EXPECT_LT(fine_gap, coarse_gap / 5);
}

TEST(QuantizeTest, RejectsBadOptions) {
  QuantizationOptions options;
  options.grid_spacing = 0;
  EXPECT_FALSE(Quantize(GaussianProfile(1, 1), options).ok());
  options = {};
  options.min_epsilon = 1;
  EXPECT_FALSE(Quantize(GaussianProfile(1, 1), options).ok());
}

TEST(QuantizeTest, GridTooNarrow) {
  QuantizationOptions options;
  options.max_epsilon = 2;
  options.epsilon_cap = 2;
  EXPECT_EQ(Quantize(GaussianProfile(1, 0.2), options).status().code(),
            absl::StatusCode::kOutOfRange);
  // The default cap extends the range instead.
  options.epsilon_cap = 500;
  EXPECT_TRUE(Quantize(GaussianProfile(1, 0.2), options).ok());
}

TEST(SelfComposeTest, IdentityAndPointMass) {
  auto pld = *Quantize(GaussianProfile(1, 1));
  auto once = SelfCompose(pld, 1, 1e-15);
  ASSERT_TRUE(once.ok());
  EXPECT_EQ(once->p_over_q.masses, pld.p_over_q.masses);
  EXPECT_EQ(once->p_over_q.min_index, pld.p_over_q.min_index);

  auto zero = *Quantize(GaussianProfile(0, 1));
  auto many = *SelfCompose(zero, 1000, 1e-15);
  EXPECT_EQ(many.p_over_q.masses, zero.p_over_q.masses);
  EXPECT_EQ(many.p_over_q.min_index, 0);
  EXPECT_FALSE(SelfCompose(pld, 0, 1e-15).ok());
}

TEST(SelfComposeTest, GaussianSqrtLaw) {
  for (int t : {4, 16, 100}) {
    auto pld = *Quantize(GaussianProfile(1, std::sqrt(t)));
    auto composed = SelfCompose(pld, t, 1e-15);
    ASSERT_TRUE(composed.ok());
    EXPECT_NEAR(TotalMass(composed->p_over_q), 1, 1e-9);
    for (double eps : {0.0, 0.5, 1.0, 2.0}) {
      EXPECT_NEAR(DeltaAtEpsilon(*composed, eps), GaussianDelta(1, eps), 2e-3)
          << "T=" << t << " eps=" << eps;
    }
  }
}

TEST(SelfComposeTest, ConsistentSplits) {
  auto pld = *Quantize(GaussianProfile(1, 3));
  auto five = *SelfCompose(pld, 5, 1e-15);
  auto two = *SelfCompose(pld, 2, 1e-15);
  auto three = *SelfCompose(pld, 3, 1e-15);
  auto joined = *Compose(two.p_over_q, three.p_over_q, 1e-15);
  // Tail truncation may trim the two supports differently; compare by
  // loss index with absent entries as zero.
  auto mass_at = [](const DiscretePld& pld, int64_t index) {
    const int64_t i = index - pld.min_index;
    return i >= 0 && i < static_cast<int64_t>(pld.masses.size())
               ? pld.masses[i]
               : 0.0;
  };
  const DiscretePld& direct = five.p_over_q;
  const int64_t lo = std::min(joined.min_index, direct.min_index);
  const int64_t hi = std::max<int64_t>(
      joined.min_index + joined.masses.size(),
      direct.min_index + direct.masses.size());
  for (int64_t k = lo; k < hi; ++k) {
    EXPECT_NEAR(mass_at(joined, k), mass_at(direct, k), 1e-9) << k;
  }
  EXPECT_NEAR(joined.infinity_mass, direct.infinity_mass, 1e-9);
}

TEST(SelfComposeTest, LengthCap) {
  auto pld = *Quantize(GaussianProfile(1, 1));
  EXPECT_EQ(SelfCompose(pld, 64, 1e-15, 1000).status().code(),
            absl::StatusCode::kResourceExhausted);
}

TEST(DeltaAtEpsilonTest, ConvexAndNonincreasing) {
  auto pld = *ComposedPld(*DeterministicWrTight(DetWrConfig()), 20);
  double prev_delta = 1;
  for (int k = 0; k < 4000; k += 7) {
    const double e0 = k * 1e-3, e1 = (k + 7) * 1e-3, e2 = (k + 14) * 1e-3;
    const double d0 = DeltaAtEpsilon(pld, e0), d1 = DeltaAtEpsilon(pld, e1),
                 d2 = DeltaAtEpsilon(pld, e2);
    EXPECT_LE(d0, prev_delta + 1e-15);
    prev_delta = d0;
    // Convex in alpha = e^eps: chord above the middle point.
    const double a0 = std::exp(e0), a1 = std::exp(e1), a2 = std::exp(e2);
    const double chord = d0 + (d2 - d0) * (a1 - a0) / (a2 - a0);
    EXPECT_LE(d1, chord + 1e-12);
  }
  EXPECT_EQ(DeltaAtEpsilon(pld, kInf), pld.p_over_q.infinity_mass);
}

TEST(EpsilonAtDeltaTest, Roundtrip) {
  auto pld = *Quantize(GaussianProfile(1, 1));
  EXPECT_EQ(EpsilonAtDelta(pld, 1), 0);
  EXPECT_NEAR(EpsilonAtDelta(pld, 0.126936), 1, 1e-2);
  for (double eps : {0.2, 0.7, 1.9}) {
    const double delta = DeltaAtEpsilon(pld, eps);
    EXPECT_NEAR(EpsilonAtDelta(pld, delta), eps, 1e-9);
  }
}

TEST(EpsilonAtDeltaTest, UnattainableBelowInfinityMass) {
  auto pld = *Quantize(GaussianProfile(1, 1));
  pld.p_over_q.infinity_mass = 1e-6;
  EXPECT_EQ(EpsilonAtDelta(pld, 1e-7), kInf);
  EXPECT_EQ(EpsilonAtDelta(pld, 1e-6), kInf);
  EXPECT_LT(EpsilonAtDelta(pld, 1e-5), kInf);
}

TEST(EpsilonForProfileTest, ReportsBoundKind) {
  auto result = EpsilonForProfile(*DeterministicWrLower(DetWrConfig()), 3, 1e-5);
  ASSERT_TRUE(result.ok());
  EXPECT_EQ(result->bound_kind, BoundKind::kOptimisticLower);
  EXPECT_EQ(result->steps, 3);
  EXPECT_GT(result->epsilon, 0);
  EXPECT_FALSE(EpsilonForProfile(GaussianProfile(1, 1), 1, 0).ok());
}

TEST(CompositionsForEpochsTest, UsesScope) {
  EXPECT_EQ(CompositionsForEpochs(*DeterministicWrTight(DetWrConfig()), 10, 3),
            3);
  SchemeConfig wor = DetWrConfig();
  wor.top_level = TopLevel::kWithoutReplacement;
  EXPECT_EQ(CompositionsForEpochs(*WorWrTight(wor), 10, 3), 30);
}

}  // namespace
}  // namespace tsdp
