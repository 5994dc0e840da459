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

#include "tsdp/scheme.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"

namespace tsdp {
namespace {

int64_t GroupSize(const SchemeConfig& config, int64_t start_indices) {
  const int64_t window = config.context_length + config.forecast_length;
  const int64_t w = config.relation.w;
  const int64_t raw = config.relation.kind == RelationKind::kEvent
                          ? window + w - 1
                          : w * window;
  return std::clamp<int64_t>(raw, 0, start_indices);
}

}  // namespace

absl::Status SchemeConfig::Validate() const {
  if (num_sequences < 1) {
    return absl::InvalidArgumentError("N: must be at least 1");
  }
  if (lengths.empty()) {
    return absl::InvalidArgumentError("L: at least one length is required");
  }
  if (context_length < 0) {
    return absl::InvalidArgumentError("L_C: must be nonnegative");
  }
  if (forecast_length < 1) {
    return absl::InvalidArgumentError("L_F: must be at least 1");
  }
  for (int64_t length : lengths) {
    if (length - forecast_length + 1 < 1) {
      return absl::InvalidArgumentError(absl::StrCat(
          "L: length ", length, " is shorter than L_F = ", forecast_length));
    }
  }
  if (subsequences_per_sequence < 1) {
    return absl::InvalidArgumentError("lambda: must be at least 1");
  }
  if (batch_size < 1) {
    return absl::InvalidArgumentError("Lambda: must be at least 1");
  }
  const int64_t sequences_per_batch = batch_size / subsequences_per_sequence;
  if (sequences_per_batch < 1 || sequences_per_batch > num_sequences) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Lambda: floor(Lambda / lambda) = ", sequences_per_batch,
        " must lie in [1, N = ", num_sequences, "]"));
  }
  if (!(sigma > 0) || std::isinf(sigma)) {
    return absl::InvalidArgumentError("sigma: must be positive and finite");
  }
  if (relation.w < 1) {
    return absl::InvalidArgumentError("w: must be at least 1");
  }
  if (relation.input_dims < 1) {
    return absl::InvalidArgumentError("dims: must be at least 1");
  }
  if (relation.magnitude.has_value() && !(*relation.magnitude > 0)) {
    return absl::InvalidArgumentError("v: must be positive");
  }
  if (augmentation.has_value()) {
    if (!relation.magnitude.has_value()) {
      return absl::InvalidArgumentError(
          "v: augmentation requires a magnitude bound");
    }
    if (!(augmentation->sigma_context >= 0) ||
        !(augmentation->sigma_forecast >= 0)) {
      return absl::InvalidArgumentError(
          "sigma_C, sigma_F: must be nonnegative");
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<EffectiveParams> ComputeEffectiveParams(
    const SchemeConfig& config) {
  if (absl::Status s = config.Validate(); !s.ok()) return s;

  EffectiveParams params;
  const int64_t lambda = config.subsequences_per_sequence;
  bool first = true;
  for (int64_t length : config.lengths) {
    const int64_t start_indices = length - config.forecast_length + 1;
    const int64_t group = GroupSize(config, start_indices);
    if (config.bottom_level == BottomLevel::kWithReplacement) {
      // Every bound is monotone in m / T; keep the worst length.
      const double rate = static_cast<double>(group) / start_indices;
      if (first || rate > params.inclusion_rate) {
        params.group_size = group;
        params.num_start_indices = start_indices;
        params.inclusion_rate = rate;
      }
    } else {
      // Group size and rate act separately; the componentwise maximum
      // dominates every length.
      const double rate =
          std::min(1.0, static_cast<double>(lambda) / start_indices);
      params.group_size =
          first ? group : std::max(params.group_size, group);
      params.inclusion_rate =
          first ? rate : std::max(params.inclusion_rate, rate);
      params.num_start_indices =
          first ? start_indices
                : std::max(params.num_start_indices, start_indices);
    }
    first = false;
  }
  params.sequence_rate =
      static_cast<double>(config.batch_size / lambda) / config.num_sequences;
  params.forecast_ratio =
      static_cast<double>(config.forecast_length) /
      static_cast<double>(config.context_length + config.forecast_length);
  params.steps_per_epoch = std::max<int64_t>(
      1, config.num_sequences * lambda / config.batch_size);
  return params;
}

}  // namespace tsdp
