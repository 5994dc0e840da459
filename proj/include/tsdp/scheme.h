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

#ifndef TSDP_SCHEME_H_
#define TSDP_SCHEME_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace tsdp {

enum class RelationKind { kEvent, kUser };
enum class TopLevel { kDeterministic, kWithoutReplacement };
enum class BottomLevel { kWithReplacement, kPoisson };

// Datasets are neighboring if one sequence differs in `w` indices: a
// contiguous window for kEvent, arbitrary positions for kUser. `magnitude`
// bounds the per-index change and is only needed for augmentation.
struct NeighborRelation {
  RelationKind kind = RelationKind::kEvent;
  int64_t w = 1;
  std::optional<double> magnitude;
  int64_t input_dims = 1;
};

// Gaussian noise added to context and forecast windows, as multiples of the
// magnitude bound. Infinity is allowed.
struct Augmentation {
  double sigma_context = 0;
  double sigma_forecast = 0;
};

struct SchemeConfig {
  int64_t num_sequences = 1;
  // One entry per distinct sequence length in the dataset.
  std::vector<int64_t> lengths = {1};
  int64_t context_length = 0;
  int64_t forecast_length = 1;
  int64_t subsequences_per_sequence = 1;
  int64_t batch_size = 1;
  double sigma = 1;
  TopLevel top_level = TopLevel::kDeterministic;
  BottomLevel bottom_level = BottomLevel::kWithReplacement;
  NeighborRelation relation;
  std::optional<Augmentation> augmentation;

  absl::Status Validate() const;
};

// Quantities every profile is built from.
struct EffectiveParams {
  // Number of subsequences that can contain protected information.
  int64_t group_size = 0;
  // Number of candidate start indices, L - L_F + 1.
  int64_t num_start_indices = 1;
  // With replacement: probability that one drawn subsequence contains
  // protected information. Poisson: per-start-index inclusion rate.
  double inclusion_rate = 0;
  // Probability that the protected sequence enters a top-level batch.
  double sequence_rate = 0;
  // L_F / (L_C + L_F).
  double forecast_ratio = 0;
  int64_t steps_per_epoch = 1;
};

absl::StatusOr<EffectiveParams> ComputeEffectiveParams(
    const SchemeConfig& config);

}  // namespace tsdp

#endif  // TSDP_SCHEME_H_
