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

#ifndef TSDP_PRIVACY_PROFILE_H_
#define TSDP_PRIVACY_PROFILE_H_

#include <optional>
#include <string_view>

#include "absl/status/statusor.h"
#include "tsdp/gaussian_mixture.h"

namespace tsdp {

enum class BoundKind { kTight, kPessimisticUpper, kOptimisticLower };
enum class ProfileScope { kPerStep, kPerEpoch };

std::string_view BoundKindName(BoundKind kind);
std::string_view ProfileScopeName(ProfileScope scope);

// alpha -> H(alpha), evaluated through `upper_branch` for alpha >= 1 and
// `lower_branch` for alpha < 1. With an outer weight rho the value is
// (1 - rho) * max{0, 1 - alpha} + rho * H_branch(alpha).
class PrivacyProfile {
 public:
  static absl::StatusOr<PrivacyProfile> Create(
      MixturePair upper_branch, MixturePair lower_branch,
      std::optional<double> outer_weight, BoundKind bound_kind,
      ProfileScope scope);

  // The profile of a mechanism that never touches protected data:
  // max{0, 1 - alpha}.
  static PrivacyProfile PerfectlyPrivate(double sigma, BoundKind bound_kind,
                                         ProfileScope scope);

  // Same branches and scope with a different bound tag.
  PrivacyProfile WithBoundKind(BoundKind kind) const;

  double Evaluate(double alpha) const;
  // Evaluate(alpha) - max{0, 1 - alpha}, computed for alpha < 1 from the
  // reciprocal divergence of the upper-branch orientation so that it keeps
  // full relative precision when tiny.
  double Excess(double alpha) const;
  // Evaluate(e^epsilon).
  double DeltaAtEpsilon(double epsilon) const;

  const MixturePair& upper_branch() const { return upper_; }
  const MixturePair& lower_branch() const { return lower_; }
  std::optional<double> outer_weight() const { return outer_weight_; }
  BoundKind bound_kind() const { return bound_kind_; }
  ProfileScope scope() const { return scope_; }
  bool IsPerfectlyPrivate() const;

 private:
  PrivacyProfile(MixturePair upper, MixturePair lower,
                 std::optional<double> outer_weight, BoundKind bound_kind,
                 ProfileScope scope)
      : upper_(std::move(upper)),
        lower_(std::move(lower)),
        outer_weight_(outer_weight),
        bound_kind_(bound_kind),
        scope_(scope) {}

  MixturePair upper_;
  MixturePair lower_;
  std::optional<double> outer_weight_;
  BoundKind bound_kind_;
  ProfileScope scope_;
};

}  // namespace tsdp

#endif  // TSDP_PRIVACY_PROFILE_H_
