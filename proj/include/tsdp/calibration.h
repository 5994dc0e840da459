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

#ifndef TSDP_CALIBRATION_H_
#define TSDP_CALIBRATION_H_

#include <cstdint>
#include <functional>

#include "absl/status/statusor.h"
#include "tsdp/accountant.h"
#include "tsdp/privacy_profile.h"
#include "tsdp/profiles.h"
#include "tsdp/scheme.h"

namespace tsdp {

struct CalibrationOptions {
  double sigma_min = 1e-2;
  double sigma_max = 1e2;
  // Accept sigma once the achieved epsilon is in [target (1 - tol), target].
  double relative_tolerance = 1e-3;
  int max_iterations = 100;
  QuantizationOptions quantization;
};

struct CalibrationResult {
  double sigma = 0;
  double epsilon = 0;
  int iterations = 0;
};

using ProfileForSigma =
    std::function<absl::StatusOr<PrivacyProfile>(double sigma)>;

// Epsilon after `compositions` self-compositions of make_profile(sigma), or
// infinity when delta cannot be reached at this sigma.
absl::StatusOr<double> EpsilonForSigma(const ProfileForSigma& make_profile,
                                       double sigma, double delta,
                                       int64_t compositions,
                                       const QuantizationOptions& options);

// Bisection in log(sigma). Fails with OUT_OF_RANGE when the target is not
// bracketed by [sigma_min, sigma_max].
absl::StatusOr<CalibrationResult> CalibrateSigma(
    const ProfileForSigma& make_profile, double target_epsilon,
    double target_delta, int64_t compositions,
    const CalibrationOptions& options = {});

// Calibrates config.sigma for the profile selected by `bound`. `compositions`
// counts applications of that profile (steps for per-step profiles, epochs
// for per-epoch ones).
absl::StatusOr<CalibrationResult> CalibrateSigma(
    const SchemeConfig& config, BoundRequest bound, double target_epsilon,
    double target_delta, int64_t compositions,
    const CalibrationOptions& options = {});

}  // namespace tsdp

#endif  // TSDP_CALIBRATION_H_
