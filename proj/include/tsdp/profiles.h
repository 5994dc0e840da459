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

#ifndef TSDP_PROFILES_H_
#define TSDP_PROFILES_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "tsdp/privacy_profile.h"
#include "tsdp/scheme.h"

namespace tsdp {

// Deterministic top level, bottom level with replacement, lambda = 1. Exact
// per-epoch profile of MoG([0, 2], [1 - r, r]) against N(0, sigma).
absl::StatusOr<PrivacyProfile> DeterministicWrTight(const SchemeConfig& config);

// Deterministic top level, bottom level with replacement, any lambda. Sound
// per-epoch bound from MoG(-mu, p) against MoG(mu, p) with mu_i = 2(i - 1) and
// p_i = Binomial(i - 1 | lambda, r).
absl::StatusOr<PrivacyProfile> DeterministicWrUpper(const SchemeConfig& config);

// Deterministic top level, bottom level with replacement, any lambda.
// Worst-case construction MoG(mu, p) against N(0, sigma), same mu and p as the
// upper bound. Not a sound guarantee.
absl::StatusOr<PrivacyProfile> DeterministicWrLower(const SchemeConfig& config);

// Deterministic top level, Poisson bottom level. Exact per-epoch profile of
// MoG(-mu, p) against MoG(mu, p) with mu_i = i - 1 and
// p_i = Binomial(i - 1 | m, r).
absl::StatusOr<PrivacyProfile> DeterministicPoissonTight(
    const SchemeConfig& config);

// Sampling without replacement at the top level, with replacement at the
// bottom, lambda = 1. Exact per-step profile; the leak component carries
// weight rho * r.
absl::StatusOr<PrivacyProfile> WorWrTight(const SchemeConfig& config);

// Sound per-step bounds (1 - rho) max{0, 1 - alpha} + rho H_alpha(inner) with
// the deterministic-top pair as inner pair.
absl::StatusOr<PrivacyProfile> WorWrUpper(const SchemeConfig& config);
absl::StatusOr<PrivacyProfile> WorPoissonUpper(const SchemeConfig& config);

// Worst-case per-step construction (1 - rho) N(0) + rho P against N(0).
absl::StatusOr<PrivacyProfile> WorLower(const SchemeConfig& config);

// Per-step bound with Gaussian augmentation of context and forecast windows
// (top level without replacement, bottom level with replacement, lambda = 1).
absl::StatusOr<PrivacyProfile> Augmented(const SchemeConfig& config);

// Probability of the leak component in the augmented profile.
absl::StatusOr<double> AugmentedLeakWeight(const SchemeConfig& config);

// Lower bound for plain DP-SGD on the flattened set of all subsequences, where
// `group` of the `population` subsequences hold protected information and
// batches of `batch_size` are drawn without replacement.
absl::StatusOr<PrivacyProfile> BlackboxLower(int64_t population,
                                             int64_t batch_size, int64_t group,
                                             double sigma);

enum class BoundRequest { kTight, kUpper, kLower };

// Bound kinds that can be built for `config`.
std::vector<BoundRequest> AvailableBounds(const SchemeConfig& config);
std::string BoundRequestName(BoundRequest request);

// Dispatches to the constructor matching the config's sampling scheme.
absl::StatusOr<PrivacyProfile> BuildProfile(const SchemeConfig& config,
                                            BoundRequest request);

}  // namespace tsdp

#endif  // TSDP_PROFILES_H_
