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
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "tsdp/status_macros.h"

namespace tsdp {

absl::StatusOr<double> EpsilonForSigma(const ProfileForSigma& make_profile,
                                       double sigma, double delta,
                                       int64_t compositions,
                                       const QuantizationOptions& options) {
  TSDP_ASSIGN_OR_RETURN(auto profile, make_profile(sigma));
  absl::StatusOr<PldPair> pld = ComposedPld(profile, compositions, options);
  // Very small sigma pushes loss mass past the grid or the length cap; both
  // mean the target is out of reach at this sigma.
  if (!pld.ok()) {
    if (absl::IsOutOfRange(pld.status()) ||
        absl::IsResourceExhausted(pld.status())) {
      return std::numeric_limits<double>::infinity();
    }
    return pld.status();
  }
  return EpsilonAtDelta(*pld, delta);
}

absl::StatusOr<CalibrationResult> CalibrateSigma(
    const ProfileForSigma& make_profile, double target_epsilon,
    double target_delta, int64_t compositions,
    const CalibrationOptions& options) {
  if (!(target_epsilon > 0) || !std::isfinite(target_epsilon)) {
    return absl::InvalidArgumentError("target epsilon must be positive");
  }
  if (!(target_delta > 0 && target_delta < 1)) {
    return absl::InvalidArgumentError("target delta must lie in (0, 1)");
  }
  if (compositions < 1) {
    return absl::InvalidArgumentError("number of steps must be >= 1");
  }
  const double lower_target = target_epsilon * (1 - options.relative_tolerance);
  auto eps_at = [&](double sigma) {
    return EpsilonForSigma(make_profile, sigma, target_delta, compositions,
                           options.quantization);
  };

  TSDP_ASSIGN_OR_RETURN(double eps_hi_sigma, eps_at(options.sigma_max));
  if (eps_hi_sigma > target_epsilon) {
    return absl::OutOfRangeError(absl::StrCat(
        "target epsilon ", target_epsilon, " not reachable: sigma = ",
        options.sigma_max, " still gives epsilon = ", eps_hi_sigma));
  }
  CalibrationResult result{options.sigma_max, eps_hi_sigma, 1};
  if (eps_hi_sigma >= lower_target) return result;

  TSDP_ASSIGN_OR_RETURN(double eps_lo_sigma, eps_at(options.sigma_min));
  ++result.iterations;
  if (eps_lo_sigma <= target_epsilon) {
    if (eps_lo_sigma >= lower_target) {
      return CalibrationResult{options.sigma_min, eps_lo_sigma,
                               result.iterations};
    }
    return absl::OutOfRangeError(absl::StrCat(
        "target epsilon ", target_epsilon, " is loose: sigma = ",
        options.sigma_min, " already gives epsilon = ", eps_lo_sigma));
  }

  // Invariant: eps(lo) > target >= eps(hi). Keep the best feasible iterate.
  double lo = std::log(options.sigma_min);
  double hi = std::log(options.sigma_max);
  while (result.iterations < options.max_iterations) {
    const double mid = (lo + hi) / 2;
    const double sigma = std::exp(mid);
    TSDP_ASSIGN_OR_RETURN(double eps, eps_at(sigma));
    ++result.iterations;
    if (eps <= target_epsilon) {
      hi = mid;
      result.sigma = sigma;
      result.epsilon = eps;
      if (eps >= lower_target) return result;
    } else {
      lo = mid;
    }
    if (hi - lo < 1e-12) break;
  }
  return absl::OutOfRangeError(absl::StrCat(
      "calibration did not reach epsilon within [", lower_target, ", ",
      target_epsilon, "]; best sigma = ", result.sigma, " gives epsilon = ",
      result.epsilon));
}

absl::StatusOr<CalibrationResult> CalibrateSigma(
    const SchemeConfig& config, BoundRequest bound, double target_epsilon,
    double target_delta, int64_t compositions,
    const CalibrationOptions& options) {
  SchemeConfig probe = config;
  probe.sigma = 1;
  TSDP_RETURN_IF_ERROR(probe.Validate());
  TSDP_RETURN_IF_ERROR(BuildProfile(probe, bound).status());
  ProfileForSigma make_profile = [&config, bound](double sigma) {
    SchemeConfig c = config;
    c.sigma = sigma;
    return BuildProfile(c, bound);
  };
  return CalibrateSigma(make_profile, target_epsilon, target_delta,
                        compositions, options);
}

}  // namespace tsdp
