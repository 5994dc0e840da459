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

#ifndef TSDP_ORACLE_H_
#define TSDP_ORACLE_H_

// Ground-truth generators used to check the analytic code paths: exhaustive
// enumeration of subsampling events in exact rational arithmetic, and dense
// quadrature of hockey-stick divergences directly from mixture densities.

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "boost/multiprecision/cpp_int.hpp"
#include "tsdp/gaussian_mixture.h"

namespace tsdp {

using Rational = boost::multiprecision::cpp_rational;

// Probability of observing k sampled subsequences that contain protected
// indices, for k = 0..size()-1. Trailing zero entries are trimmed.
struct OccurrenceDistribution {
  std::vector<Rational> probabilities;
};

constexpr int64_t kDefaultEnumerationBudget = 10'000'000;

// Draws `lambda` start indices uniformly with replacement from the zero-padded
// sequence and enumerates all T^lambda outcomes. Protected indices are
// 1-based positions in the unpadded sequence of length `length`.
absl::StatusOr<OccurrenceDistribution> EnumerateBottomWr(
    int64_t length, int64_t context_length, int64_t forecast_length,
    int64_t lambda, const std::vector<int64_t>& protected_indices,
    int64_t budget = kDefaultEnumerationBudget);

// Includes each start index independently with probability `rate` and
// enumerates all 2^T inclusion patterns.
absl::StatusOr<OccurrenceDistribution> EnumerateBottomPoisson(
    int64_t length, int64_t context_length, int64_t forecast_length,
    const Rational& rate, const std::vector<int64_t>& protected_indices,
    int64_t budget = kDefaultEnumerationBudget);

// Probability that sequence `protected_sequence` (0-based) is among the first
// `batch` entries of a uniformly random permutation of `num_sequences`,
// enumerated over all batch-subsets.
absl::StatusOr<Rational> EnumerateTopWor(
    int64_t num_sequences, int64_t batch, int64_t protected_sequence = 0,
    int64_t budget = kDefaultEnumerationBudget);

// Closed-form pmfs in exact arithmetic, for comparison with enumeration.
std::vector<Rational> ExactBinomialPmf(int64_t trials, const Rational& rate);
std::vector<Rational> ExactHypergeometricPmf(int64_t population,
                                             int64_t marked, int64_t draws);

// Drops trailing zeros.
std::vector<Rational> TrimTrailingZeros(std::vector<Rational> pmf);

// Integrates max{p(x) - alpha q(x), 0} on [min mean - 12 sigma,
// max mean + 12 sigma]. Cells are split at sign changes of the integrand and
// each piece gets a trapezoid estimate refined by one Richardson step.
double QuadratureHockeyStick(const MixturePair& pair, double alpha,
                             int64_t min_nodes = 200'000);

}  // namespace tsdp

#endif  // TSDP_ORACLE_H_
