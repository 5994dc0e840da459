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

#ifndef TSDP_ACCOUNTANT_H_
#define TSDP_ACCOUNTANT_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "tsdp/privacy_profile.h"

namespace tsdp {

enum class PldDirection { kPOverQ, kQOverP };

// Privacy-loss distribution on the lattice grid_spacing * Z. masses[i] sits
// at loss (min_index + i) * grid_spacing. For kPOverQ the loss is
// log(dP/dQ) under P; for kQOverP it is log(dQ/dP) under Q.
struct DiscretePld {
  double grid_spacing = 1e-3;
  int64_t min_index = 0;
  std::vector<double> masses = {1.0};
  double infinity_mass = 0;
  PldDirection direction = PldDirection::kPOverQ;

  double FiniteMass() const;
  double Loss(size_t i) const {
    return static_cast<double>(min_index + static_cast<int64_t>(i)) *
           grid_spacing;
  }
};

struct PldPair {
  DiscretePld p_over_q;
  DiscretePld q_over_p;
};

struct AccountingResult {
  double epsilon = 0;
  double delta = 0;
  int64_t steps = 1;
  BoundKind bound_kind = BoundKind::kTight;
};

struct QuantizationOptions {
  double grid_spacing = 1e-3;
  double min_epsilon = -30;
  double max_epsilon = 30;
  // The upper end doubles until the profile there is within tail_tolerance,
  // but not past this cap.
  double epsilon_cap = 500;
  // Profile mass allowed beyond the grid; also the per-convolution tail
  // truncation.
  double tail_tolerance = 1e-15;
};

// Pessimistic connect-the-dots discretization: the quantized pair has atoms
// only on the lattice and its profile linearly interpolates the exact profile
// between lattice points of e^epsilon. The lattice is trimmed to where the
// profile deviates from max{0, 1 - alpha} by more than tail_tolerance, within
// [min_epsilon, max_epsilon], extending max_epsilon when needed. Fails with
// OUT_OF_RANGE if the profile at epsilon_cap still exceeds tail_tolerance.
absl::StatusOr<PldPair> Quantize(const PrivacyProfile& profile,
                                 const QuantizationOptions& options = {});

constexpr int64_t kDefaultMaxPldLength = int64_t{1} << 25;

// Distribution of the sum of independent losses. Tail mass up to
// tail_tolerance is moved to infinity_mass.
absl::StatusOr<DiscretePld> Compose(const DiscretePld& a, const DiscretePld& b,
                                    double tail_tolerance,
                                    int64_t max_length = kDefaultMaxPldLength);

// steps-fold composition by repeated squaring.
absl::StatusOr<DiscretePld> SelfCompose(
    const DiscretePld& pld, int64_t steps, double tail_tolerance,
    int64_t max_length = kDefaultMaxPldLength);
absl::StatusOr<PldPair> SelfCompose(const PldPair& pair, int64_t steps,
                                    double tail_tolerance,
                                    int64_t max_length = kDefaultMaxPldLength);

// Pr[L_{P/Q} > eps] - e^eps Pr[L_{Q/P} < -eps], clamped to [0, 1].
double DeltaAtEpsilon(const PldPair& pair, double epsilon);

// Smallest epsilon >= 0 with DeltaAtEpsilon <= delta; infinity if delta does
// not exceed the mass at infinite loss.
double EpsilonAtDelta(const PldPair& pair, double delta);

// Number of compositions of a profile's unit needed for `epochs` epochs.
int64_t CompositionsForEpochs(const PrivacyProfile& profile,
                              int64_t steps_per_epoch, int64_t epochs);

// Profile -> quantize -> compose `steps` times.
absl::StatusOr<PldPair> ComposedPld(const PrivacyProfile& profile,
                                    int64_t steps,
                                    const QuantizationOptions& options = {});

absl::StatusOr<AccountingResult> EpsilonForProfile(
    const PrivacyProfile& profile, int64_t steps, double delta,
    const QuantizationOptions& options = {});

}  // namespace tsdp

#endif  // TSDP_ACCOUNTANT_H_
