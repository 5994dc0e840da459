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

#include "tsdp/profiles.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "tsdp/distributions.h"
#include "tsdp/status_macros.h"

namespace tsdp {
namespace {

// Mixture with means `spacing * k` for k = 0..weights.size()-1, zero-weight
// components dropped.
absl::StatusOr<GaussianMixture> LatticeMixture(const std::vector<double>& weights,
                                               double spacing, double sigma) {
  std::vector<double> means;
  std::vector<double> kept;
  for (size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] > 0) {
      means.push_back(spacing * static_cast<double>(k));
      kept.push_back(weights[k]);
    }
  }
  return GaussianMixture::Create(std::move(means), std::move(kept), sigma);
}

// Profile of P against N(0, sigma) for alpha >= 1 and of N(0, sigma) against P
// below.
absl::StatusOr<PrivacyProfile> AgainstNull(const GaussianMixture& leak,
                                           std::optional<double> outer_weight,
                                           BoundKind kind, ProfileScope scope) {
  absl::StatusOr<MixturePair> upper =
      MixturePair::Create(leak, GaussianMixture::Single(0, leak.sigma()));
  if (!upper.ok()) return upper.status();
  MixturePair lower = upper->Swapped();
  return PrivacyProfile::Create(*std::move(upper), std::move(lower),
                                outer_weight, kind, scope);
}

// Profile of MoG(-mu, p) against MoG(mu, p).
absl::StatusOr<PrivacyProfile> MirroredPair(const GaussianMixture& positive,
                                            std::optional<double> outer_weight,
                                            BoundKind kind,
                                            ProfileScope scope) {
  absl::StatusOr<MixturePair> upper =
      MixturePair::Create(positive.Reflected(), positive);
  if (!upper.ok()) return upper.status();
  MixturePair lower = upper->Swapped();
  return PrivacyProfile::Create(*std::move(upper), std::move(lower),
                                outer_weight, kind, scope);
}

absl::Status RequireScheme(const SchemeConfig& config, TopLevel top,
                           BottomLevel bottom) {
  if (config.top_level != top || config.bottom_level != bottom) {
    return absl::FailedPreconditionError(
        "profile does not match the configured top/bottom-level sampling");
  }
  return absl::OkStatus();
}

absl::Status RequireSingleSubsequence(const SchemeConfig& config) {
  if (config.subsequences_per_sequence != 1) {
    return absl::FailedPreconditionError(absl::StrCat(
        "no tight bound for lambda = ", config.subsequences_per_sequence,
        " > 1; available bounds: upper, lower"));
  }
  return absl::OkStatus();
}

// Binomial(lambda, r) weights over 0..lambda hits, the with-replacement leak
// distribution.
std::vector<double> WrHits(const SchemeConfig& config,
                           const EffectiveParams& params) {
  return BinomialPmf(config.subsequences_per_sequence, params.inclusion_rate);
}

std::vector<double> PoissonHits(const EffectiveParams& params) {
  return BinomialPmf(params.group_size, params.inclusion_rate);
}

}  // namespace

absl::StatusOr<PrivacyProfile> DeterministicWrTight(const SchemeConfig& config) {
  TSDP_RETURN_IF_ERROR(RequireScheme(config, TopLevel::kDeterministic,
                                     BottomLevel::kWithReplacement));
  TSDP_RETURN_IF_ERROR(RequireSingleSubsequence(config));
  TSDP_ASSIGN_OR_RETURN(auto params, ComputeEffectiveParams(config));
  if (params.group_size == 0) {
    return PrivacyProfile::PerfectlyPrivate(config.sigma, BoundKind::kTight,
                                            ProfileScope::kPerEpoch);
  }
  const double r = params.inclusion_rate;
  TSDP_ASSIGN_OR_RETURN(auto leak, LatticeMixture({1 - r, r}, 2, config.sigma));
  return AgainstNull(leak, std::nullopt, BoundKind::kTight,
                     ProfileScope::kPerEpoch);
}

absl::StatusOr<PrivacyProfile> DeterministicWrUpper(const SchemeConfig& config) {
  TSDP_RETURN_IF_ERROR(RequireScheme(config, TopLevel::kDeterministic,
                                     BottomLevel::kWithReplacement));
  TSDP_ASSIGN_OR_RETURN(auto params, ComputeEffectiveParams(config));
  if (params.group_size == 0) {
    return PrivacyProfile::PerfectlyPrivate(
        config.sigma, BoundKind::kPessimisticUpper, ProfileScope::kPerEpoch);
  }
  TSDP_ASSIGN_OR_RETURN(auto hits,
                        LatticeMixture(WrHits(config, params), 2, config.sigma));
  return MirroredPair(hits, std::nullopt, BoundKind::kPessimisticUpper,
                      ProfileScope::kPerEpoch);
}

absl::StatusOr<PrivacyProfile> DeterministicWrLower(const SchemeConfig& config) {
  TSDP_RETURN_IF_ERROR(RequireScheme(config, TopLevel::kDeterministic,
                                     BottomLevel::kWithReplacement));
  TSDP_ASSIGN_OR_RETURN(auto params, ComputeEffectiveParams(config));
  if (params.group_size == 0) {
    return PrivacyProfile::PerfectlyPrivate(
        config.sigma, BoundKind::kOptimisticLower, ProfileScope::kPerEpoch);
  }
  TSDP_ASSIGN_OR_RETURN(auto leak,
                        LatticeMixture(WrHits(config, params), 2, config.sigma));
  return AgainstNull(leak, std::nullopt, BoundKind::kOptimisticLower,
                     ProfileScope::kPerEpoch);
}

absl::StatusOr<PrivacyProfile> DeterministicPoissonTight(
    const SchemeConfig& config) {
  TSDP_RETURN_IF_ERROR(
      RequireScheme(config, TopLevel::kDeterministic, BottomLevel::kPoisson));
  TSDP_ASSIGN_OR_RETURN(auto params, ComputeEffectiveParams(config));
  if (params.group_size == 0) {
    return PrivacyProfile::PerfectlyPrivate(config.sigma, BoundKind::kTight,
                                            ProfileScope::kPerEpoch);
  }
  TSDP_ASSIGN_OR_RETURN(auto hits,
                        LatticeMixture(PoissonHits(params), 1, config.sigma));
  return MirroredPair(hits, std::nullopt, BoundKind::kTight,
                      ProfileScope::kPerEpoch);
}

absl::StatusOr<PrivacyProfile> WorWrTight(const SchemeConfig& config) {
  TSDP_RETURN_IF_ERROR(RequireScheme(config, TopLevel::kWithoutReplacement,
                                     BottomLevel::kWithReplacement));
  TSDP_RETURN_IF_ERROR(RequireSingleSubsequence(config));
  TSDP_ASSIGN_OR_RETURN(auto params, ComputeEffectiveParams(config));
  const double leak_weight = params.sequence_rate * params.inclusion_rate;
  if (leak_weight == 0) {
    return PrivacyProfile::PerfectlyPrivate(config.sigma, BoundKind::kTight,
                                            ProfileScope::kPerStep);
  }
  TSDP_ASSIGN_OR_RETURN(
      auto leak, LatticeMixture({1 - leak_weight, leak_weight}, 2, config.sigma));
  return AgainstNull(leak, std::nullopt, BoundKind::kTight,
                     ProfileScope::kPerStep);
}

absl::StatusOr<PrivacyProfile> WorWrUpper(const SchemeConfig& config) {
  TSDP_RETURN_IF_ERROR(RequireScheme(config, TopLevel::kWithoutReplacement,
                                     BottomLevel::kWithReplacement));
  TSDP_ASSIGN_OR_RETURN(auto params, ComputeEffectiveParams(config));
  if (params.group_size == 0) {
    return PrivacyProfile::PerfectlyPrivate(
        config.sigma, BoundKind::kPessimisticUpper, ProfileScope::kPerStep);
  }
  TSDP_ASSIGN_OR_RETURN(auto hits,
                        LatticeMixture(WrHits(config, params), 2, config.sigma));
  return MirroredPair(hits, params.sequence_rate, BoundKind::kPessimisticUpper,
                      ProfileScope::kPerStep);
}

absl::StatusOr<PrivacyProfile> WorPoissonUpper(const SchemeConfig& config) {
  TSDP_RETURN_IF_ERROR(RequireScheme(config, TopLevel::kWithoutReplacement,
                                     BottomLevel::kPoisson));
  TSDP_ASSIGN_OR_RETURN(auto params, ComputeEffectiveParams(config));
  if (params.group_size == 0) {
    return PrivacyProfile::PerfectlyPrivate(
        config.sigma, BoundKind::kPessimisticUpper, ProfileScope::kPerStep);
  }
  TSDP_ASSIGN_OR_RETURN(auto hits,
                        LatticeMixture(PoissonHits(params), 1, config.sigma));
  return MirroredPair(hits, params.sequence_rate, BoundKind::kPessimisticUpper,
                      ProfileScope::kPerStep);
}

absl::StatusOr<PrivacyProfile> WorLower(const SchemeConfig& config) {
  if (config.top_level != TopLevel::kWithoutReplacement) {
    return absl::FailedPreconditionError(
        "profile requires top-level sampling without replacement");
  }
  TSDP_ASSIGN_OR_RETURN(auto params, ComputeEffectiveParams(config));
  const double rho = params.sequence_rate;
  // With replacement, each of the lambda draws hits with probability r and
  // moves the sum by 2. Poisson: each of the m protected start indices is
  // included independently and moves the sum by 1.
  const bool wr = config.bottom_level == BottomLevel::kWithReplacement;
  std::vector<double> weights =
      wr ? WrHits(config, params) : PoissonHits(params);
  for (double& w : weights) w *= rho;
  weights[0] += 1 - rho;
  if (params.group_size == 0 || weights[0] >= 1) {
    return PrivacyProfile::PerfectlyPrivate(
        config.sigma, BoundKind::kOptimisticLower, ProfileScope::kPerStep);
  }
  TSDP_ASSIGN_OR_RETURN(auto leak,
                        LatticeMixture(weights, wr ? 2 : 1, config.sigma));
  return AgainstNull(leak, std::nullopt, BoundKind::kOptimisticLower,
                     ProfileScope::kPerStep);
}

absl::StatusOr<double> AugmentedLeakWeight(const SchemeConfig& config) {
  TSDP_RETURN_IF_ERROR(RequireScheme(config, TopLevel::kWithoutReplacement,
                                     BottomLevel::kWithReplacement));
  if (!config.augmentation.has_value()) {
    return absl::FailedPreconditionError("profile requires augmentation");
  }
  if (config.subsequences_per_sequence != 1) {
    return absl::FailedPreconditionError(
        "augmentation bound requires lambda = 1");
  }
  TSDP_ASSIGN_OR_RETURN(auto params, ComputeEffectiveParams(config));
  const Augmentation& aug = *config.augmentation;
  const bool same_noise = aug.sigma_context == aug.sigma_forecast;
  if (!same_noise && config.relation.w > 1) {
    return absl::UnimplementedError(
        "augmentation with sigma_C != sigma_F is only supported for w = 1");
  }
  // Largest L2 change of one subsequence, in units of the magnitude bound.
  const double gap = std::sqrt(static_cast<double>(config.relation.w) *
                               static_cast<double>(config.relation.input_dims));
  const double phi = params.forecast_ratio;
  const double scale = params.sequence_rate * params.inclusion_rate;
  if (same_noise) return scale * GaussianTvd(gap, aug.sigma_forecast);
  return scale * (phi * GaussianTvd(gap, aug.sigma_forecast) +
                  (1 - phi) * GaussianTvd(gap, aug.sigma_context));
}

absl::StatusOr<PrivacyProfile> Augmented(const SchemeConfig& config) {
  TSDP_ASSIGN_OR_RETURN(auto leak_weight, AugmentedLeakWeight(config));
  if (leak_weight == 0) {
    return PrivacyProfile::PerfectlyPrivate(
        config.sigma, BoundKind::kPessimisticUpper, ProfileScope::kPerStep);
  }
  TSDP_ASSIGN_OR_RETURN(
      auto leak, LatticeMixture({1 - leak_weight, leak_weight}, 2, config.sigma));
  return AgainstNull(leak, std::nullopt, BoundKind::kPessimisticUpper,
                     ProfileScope::kPerStep);
}

absl::StatusOr<PrivacyProfile> BlackboxLower(int64_t population,
                                             int64_t batch_size, int64_t group,
                                             double sigma) {
  if (population < 1 || batch_size < 1 || group < 1 ||
      batch_size > population || group > population) {
    return absl::InvalidArgumentError(absl::StrCat(
        "need 1 <= Lambda, group <= N_total; got N_total=", population,
        " Lambda=", batch_size, " group=", group));
  }
  TSDP_ASSIGN_OR_RETURN(
      auto leak, LatticeMixture(HypergeometricPmf(population, group, batch_size), 2,
                           sigma));
  return AgainstNull(leak, std::nullopt, BoundKind::kOptimisticLower,
                     ProfileScope::kPerStep);
}

std::vector<BoundRequest> AvailableBounds(const SchemeConfig& config) {
  const bool single = config.subsequences_per_sequence == 1;
  if (config.augmentation.has_value()) {
    if (config.top_level == TopLevel::kWithoutReplacement &&
        config.bottom_level == BottomLevel::kWithReplacement && single) {
      return {BoundRequest::kUpper};
    }
    return {};
  }
  if (config.bottom_level == BottomLevel::kPoisson) {
    if (config.top_level == TopLevel::kDeterministic) {
      return {BoundRequest::kTight};
    }
    return {BoundRequest::kUpper, BoundRequest::kLower};
  }
  if (single) {
    return {BoundRequest::kTight, BoundRequest::kUpper, BoundRequest::kLower};
  }
  return {BoundRequest::kUpper, BoundRequest::kLower};
}

std::string BoundRequestName(BoundRequest request) {
  switch (request) {
    case BoundRequest::kTight:
      return "tight";
    case BoundRequest::kUpper:
      return "upper";
    case BoundRequest::kLower:
      return "lower";
  }
  return "unknown";
}

absl::StatusOr<PrivacyProfile> BuildProfile(const SchemeConfig& config,
                                            BoundRequest request) {
  TSDP_RETURN_IF_ERROR(config.Validate());
  const std::vector<BoundRequest> available = AvailableBounds(config);
  if (std::find(available.begin(), available.end(), request) ==
      available.end()) {
    if (available.empty()) {
      return absl::FailedPreconditionError(
          "augmentation is only supported with top-level sampling without "
          "replacement, bottom-level sampling with replacement and lambda = 1");
    }
    std::vector<std::string> names;
    for (BoundRequest b : available) names.push_back(BoundRequestName(b));
    return absl::FailedPreconditionError(absl::StrCat(
        "bound '", BoundRequestName(request),
        "' is not available for this scheme; available bounds: ",
        absl::StrJoin(names, ", ")));
  }
  if (config.augmentation.has_value()) return Augmented(config);
  const bool det = config.top_level == TopLevel::kDeterministic;
  const bool wr = config.bottom_level == BottomLevel::kWithReplacement;
  switch (request) {
    case BoundRequest::kTight:
      if (!wr) return DeterministicPoissonTight(config);
      return det ? DeterministicWrTight(config) : WorWrTight(config);
    case BoundRequest::kUpper:
      if (det) return DeterministicWrUpper(config);
      return wr ? WorWrUpper(config) : WorPoissonUpper(config);
    case BoundRequest::kLower:
      return det ? DeterministicWrLower(config) : WorLower(config);
  }
  return absl::InternalError("unreachable");
}

}  // namespace tsdp
