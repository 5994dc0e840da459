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

#ifndef TSDP_DISTRIBUTIONS_H_
#define TSDP_DISTRIBUTIONS_H_

#include <cstdint>
#include <vector>

namespace tsdp {

// pmf of Binomial(trials, rate) at 0..trials.
std::vector<double> BinomialPmf(int64_t trials, double rate);

// pmf of the number of marked items in a uniform draw of `draws` items without
// replacement from `population` items, `marked` of which are marked. Indexed
// 0..marked.
std::vector<double> HypergeometricPmf(int64_t population, int64_t marked,
                                      int64_t draws);

}  // namespace tsdp

#endif  // TSDP_DISTRIBUTIONS_H_
