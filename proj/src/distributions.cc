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

#include "tsdp/distributions.h"

#include <algorithm>
#include <cmath>

namespace tsdp {
namespace {

// log C(n, k) as a falling factorial; cost is linear in k.
long double LogChooseSmall(int64_t n, int64_t k) {
  long double sum = 0;
  for (int64_t j = 0; j < k; ++j) sum += std::log((long double)(n - j));
  return sum - std::lgamma((long double)k + 1);
}

}  // namespace

std::vector<double> BinomialPmf(int64_t trials, double rate) {
  std::vector<double> pmf(trials + 1, 0.0);
  if (rate <= 0) {
    pmf[0] = 1;
    return pmf;
  }
  if (rate >= 1) {
    pmf[trials] = 1;
    return pmf;
  }
  // Log-space terms avoid underflow of rate^k for long sequences.
  const long double log_r = std::log(static_cast<long double>(rate));
  const long double log_1mr = std::log1p(-static_cast<long double>(rate));
  for (int64_t k = 0; k <= trials; ++k) {
    const long double log_choose = std::lgamma((long double)trials + 1) -
                                   std::lgamma((long double)k + 1) -
                                   std::lgamma((long double)(trials - k) + 1);
    pmf[k] = static_cast<double>(
        std::exp(log_choose + k * log_r + (trials - k) * log_1mr));
  }
  return pmf;
}

std::vector<double> HypergeometricPmf(int64_t population, int64_t marked,
                                      int64_t draws) {
  std::vector<double> pmf(marked + 1, 0.0);
  const int64_t lo = std::max<int64_t>(0, draws - (population - marked));
  const int64_t hi = std::min(marked, draws);
  // By symmetry in (marked, draws), P(lo) = C(n, lo) C(N-n, M-lo) / C(N, M).
  // Every binomial here has a lower index of at most `marked`, so the log-sum
  // has O(marked) terms regardless of the population size.
  const long double log_start = LogChooseSmall(draws, lo) +
                                LogChooseSmall(population - draws, marked - lo) -
                                LogChooseSmall(population, marked);
  long double value = std::exp(log_start);
  pmf[lo] = static_cast<double>(value);
  for (int64_t k = lo; k < hi; ++k) {
    value *= static_cast<long double>(marked - k) * (draws - k) /
             (static_cast<long double>(k + 1) *
              (population - marked - draws + k + 1));
    pmf[k + 1] = static_cast<double>(value);
  }
  return pmf;
}

}  // namespace tsdp
