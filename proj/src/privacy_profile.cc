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

#include "tsdp/privacy_profile.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace tsdp {

std::string_view BoundKindName(BoundKind kind) {
  switch (kind) {
    case BoundKind::kTight:
      return "tight";
    case BoundKind::kPessimisticUpper:
      return "pessimistic_upper";
    case BoundKind::kOptimisticLower:
      return "optimistic_lower";
  }
  return "unknown";
}

std::string_view ProfileScopeName(ProfileScope scope) {
  return scope == ProfileScope::kPerStep ? "per_step" : "per_epoch";
}

absl::StatusOr<PrivacyProfile> PrivacyProfile::Create(
    MixturePair upper_branch, MixturePair lower_branch,
    std::optional<double> outer_weight, BoundKind bound_kind,
    ProfileScope scope) {
  if (outer_weight.has_value() &&
      !(*outer_weight >= 0 && *outer_weight <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("outer weight must lie in [0, 1], got ", *outer_weight));
  }
  return PrivacyProfile(std::move(upper_branch), std::move(lower_branch),
                        outer_weight, bound_kind, scope);
}

PrivacyProfile PrivacyProfile::PerfectlyPrivate(double sigma,
                                                BoundKind bound_kind,
                                                ProfileScope scope) {
  const GaussianMixture null = GaussianMixture::Single(0, sigma);
  MixturePair pair = *MixturePair::Create(null, null);
  return PrivacyProfile(pair, pair, std::nullopt, bound_kind, scope);
}

PrivacyProfile PrivacyProfile::WithBoundKind(BoundKind kind) const {
  PrivacyProfile copy = *this;
  copy.bound_kind_ = kind;
  return copy;
}

double PrivacyProfile::Evaluate(double alpha) const {
  if (alpha <= 0) return 1;
  const double inner = alpha >= 1 ? MixtureHockeyStick(upper_, alpha)
                                  : MixtureHockeyStick(lower_, alpha);
  if (!outer_weight_.has_value()) return inner;
  const double rho = *outer_weight_;
  return (1 - rho) * std::max(0.0, 1 - alpha) + rho * inner;
}

double PrivacyProfile::Excess(double alpha) const {
  if (alpha <= 0) return 0;
  double inner;
  if (alpha >= 1) {
    inner = MixtureHockeyStick(upper_, alpha);
  } else {
    // H_a(Q||P) = 1 - a + a H_{1/a}(P||Q).
    inner = alpha * MixtureHockeyStick(lower_.Swapped(), 1 / alpha);
  }
  return outer_weight_.has_value() ? *outer_weight_ * inner : inner;
}

double PrivacyProfile::DeltaAtEpsilon(double epsilon) const {
  return Evaluate(std::exp(epsilon));
}

bool PrivacyProfile::IsPerfectlyPrivate() const {
  return (upper_.p() == upper_.q() && lower_.p() == lower_.q()) ||
         outer_weight_ == 0.0;
}

}  // namespace tsdp
