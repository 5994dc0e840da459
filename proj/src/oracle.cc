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

#include "tsdp/oracle.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace tsdp {
namespace {

using boost::multiprecision::cpp_int;

absl::Status CheckProtected(int64_t length,
                            const std::vector<int64_t>& protected_indices) {
  for (int64_t p : protected_indices) {
    if (p < 1 || p > length) {
      return absl::InvalidArgumentError(absl::StrCat(
          "protected index ", p, " outside [1, ", length, "]"));
    }
  }
  return absl::OkStatus();
}

// covers[t] is true if the window starting at padded index t + 1 contains a
// protected element. The window at start t spans original indices
// t - L_C .. t + L_F - 1.
std::vector<bool> CoveringStarts(int64_t length, int64_t context_length,
                                 int64_t forecast_length,
                                 const std::vector<int64_t>& protected_indices) {
  const int64_t starts = length - forecast_length + 1;
  std::vector<bool> covers(starts, false);
  for (int64_t t = 1; t <= starts; ++t) {
    for (int64_t p : protected_indices) {
      if (t - context_length <= p && p <= t + forecast_length - 1) {
        covers[t - 1] = true;
        break;
      }
    }
  }
  return covers;
}

cpp_int Choose(int64_t n, int64_t k) {
  if (k < 0 || k > n) return 0;
  cpp_int result = 1;
  for (int64_t j = 1; j <= k; ++j) {
    result *= n - k + j;
    result /= j;
  }
  return result;
}

Rational Power(const Rational& base, int64_t exponent) {
  Rational result = 1;
  for (int64_t i = 0; i < exponent; ++i) result *= base;
  return result;
}

double MixtureDensity(const GaussianMixture& mixture, double x) {
  const double norm = 1 / (mixture.sigma() * std::sqrt(2 * std::numbers::pi));
  double sum = 0;
  for (int i = 0; i < mixture.size(); ++i) {
    const double z = (x - mixture.means()[i]) / mixture.sigma();
    sum += mixture.weights()[i] * std::exp(-0.5 * z * z);
  }
  return sum * norm;
}

}  // namespace

std::vector<Rational> TrimTrailingZeros(std::vector<Rational> pmf) {
  while (pmf.size() > 1 && pmf.back() == 0) pmf.pop_back();
  return pmf;
}

absl::StatusOr<OccurrenceDistribution> EnumerateBottomWr(
    int64_t length, int64_t context_length, int64_t forecast_length,
    int64_t lambda, const std::vector<int64_t>& protected_indices,
    int64_t budget) {
  if (absl::Status s = CheckProtected(length, protected_indices); !s.ok()) {
    return s;
  }
  const int64_t starts = length - forecast_length + 1;
  if (starts < 1 || lambda < 1 || context_length < 0) {
    return absl::InvalidArgumentError("invalid sequence shape");
  }
  double outcomes = std::pow(static_cast<double>(starts), lambda);
  if (outcomes > static_cast<double>(budget)) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "T^lambda = ", outcomes, " exceeds the enumeration budget ", budget));
  }
  const std::vector<bool> covers = CoveringStarts(
      length, context_length, forecast_length, protected_indices);

  std::vector<uint64_t> counts(lambda + 1, 0);
  std::vector<int64_t> draw(lambda, 0);
  while (true) {
    int64_t hits = 0;
    for (int64_t t : draw) hits += covers[t] ? 1 : 0;
    ++counts[hits];
    int64_t pos = 0;
    while (pos < lambda && ++draw[pos] == starts) draw[pos++] = 0;
    if (pos == lambda) break;
  }
  const cpp_int total = boost::multiprecision::pow(cpp_int(starts),
                                                   static_cast<unsigned>(lambda));
  OccurrenceDistribution result;
  for (uint64_t c : counts) {
    result.probabilities.push_back(Rational(cpp_int(c), total));
  }
  result.probabilities = TrimTrailingZeros(std::move(result.probabilities));
  return result;
}

absl::StatusOr<OccurrenceDistribution> EnumerateBottomPoisson(
    int64_t length, int64_t context_length, int64_t forecast_length,
    const Rational& rate, const std::vector<int64_t>& protected_indices,
    int64_t budget) {
  if (absl::Status s = CheckProtected(length, protected_indices); !s.ok()) {
    return s;
  }
  if (rate < 0 || rate > 1) {
    return absl::InvalidArgumentError("rate must lie in [0, 1]");
  }
  const int64_t starts = length - forecast_length + 1;
  if (starts < 1 || context_length < 0) {
    return absl::InvalidArgumentError("invalid sequence shape");
  }
  if (starts > 62 || (int64_t{1} << starts) > budget) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "2^T with T = ", starts, " exceeds the enumeration budget ", budget));
  }
  const std::vector<bool> covers = CoveringStarts(
      length, context_length, forecast_length, protected_indices);
  uint64_t cover_mask = 0;
  for (int64_t t = 0; t < starts; ++t) {
    if (covers[t]) cover_mask |= uint64_t{1} << t;
  }

  // counts[s][k]: patterns with s included starts, k of them covering.
  std::vector<std::vector<uint64_t>> counts(
      starts + 1, std::vector<uint64_t>(starts + 1, 0));
  const uint64_t patterns = uint64_t{1} << starts;
  for (uint64_t mask = 0; mask < patterns; ++mask) {
    ++counts[std::popcount(mask)][std::popcount(mask & cover_mask)];
  }
  const Rational keep = 1 - rate;
  std::vector<Rational> probabilities(starts + 1, Rational(0));
  for (int64_t s = 0; s <= starts; ++s) {
    const Rational pattern = Power(rate, s) * Power(keep, starts - s);
    if (pattern == 0) continue;
    for (int64_t k = 0; k <= starts; ++k) {
      if (counts[s][k] != 0) probabilities[k] += pattern * cpp_int(counts[s][k]);
    }
  }
  return OccurrenceDistribution{TrimTrailingZeros(std::move(probabilities))};
}

absl::StatusOr<Rational> EnumerateTopWor(int64_t num_sequences, int64_t batch,
                                         int64_t protected_sequence,
                                         int64_t budget) {
  if (num_sequences < 1 || num_sequences > 62 || batch < 0 ||
      batch > num_sequences || protected_sequence < 0 ||
      protected_sequence >= num_sequences) {
    return absl::InvalidArgumentError("need 0 <= batch <= N <= 62");
  }
  const cpp_int subsets = Choose(num_sequences, batch);
  if (subsets > budget) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "C(N, batch) exceeds the enumeration budget ", budget));
  }
  if (batch == 0) return Rational(0);
  // Gosper's hack visits every batch-subset of {0..N-1} once.
  const uint64_t target = uint64_t{1} << protected_sequence;
  const uint64_t limit = uint64_t{1} << num_sequences;
  uint64_t subset = (uint64_t{1} << batch) - 1;
  uint64_t containing = 0;
  uint64_t visited = 0;
  while (subset < limit) {
    ++visited;
    if (subset & target) ++containing;
    const uint64_t low = subset & -subset;
    const uint64_t ripple = subset + low;
    subset = (((ripple ^ subset) >> 2) / low) | ripple;
  }
  return Rational(cpp_int(containing), cpp_int(visited));
}

std::vector<Rational> ExactBinomialPmf(int64_t trials, const Rational& rate) {
  std::vector<Rational> pmf;
  for (int64_t k = 0; k <= trials; ++k) {
    pmf.push_back(Rational(Choose(trials, k)) * Power(rate, k) *
                  Power(1 - rate, trials - k));
  }
  return pmf;
}

std::vector<Rational> ExactHypergeometricPmf(int64_t population,
                                             int64_t marked, int64_t draws) {
  std::vector<Rational> pmf;
  const cpp_int total = Choose(population, draws);
  for (int64_t k = 0; k <= marked; ++k) {
    pmf.push_back(Rational(
        Choose(marked, k) * Choose(population - marked, draws - k), total));
  }
  return pmf;
}

double QuadratureHockeyStick(const MixturePair& pair, double alpha,
                             int64_t min_nodes) {
  if (std::isinf(alpha)) return 0;
  const GaussianMixture& p = pair.p();
  const GaussianMixture& q = pair.q();
  const double sigma = p.sigma();
  const double lo = std::min(p.MinMean(), q.MinMean()) - 12 * sigma;
  const double hi = std::max(p.MaxMean(), q.MaxMean()) + 12 * sigma;
  const int64_t cells = std::max<int64_t>(
      min_nodes, static_cast<int64_t>(std::ceil((hi - lo) / sigma * 4000)));
  const double h = (hi - lo) / static_cast<double>(cells);

  auto f = [&](double x) {
    return MixtureDensity(p, x) - alpha * MixtureDensity(q, x);
  };
  // Trapezoid on [a, b] and on its two halves, combined by Richardson
  // extrapolation. Callers guarantee f >= 0 on [a, b].
  auto piece = [&](double a, double fa, double b, double fb) {
    const double fm = f(0.5 * (a + b));
    const double coarse = 0.5 * (b - a) * (fa + fb);
    const double fine = 0.25 * (b - a) * (fa + 2 * fm + fb);
    return (4 * fine - coarse) / 3;
  };
  auto root = [&](double a, double fa, double b) {
    for (int i = 0; i < 100; ++i) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      const double fm = f(mid);
      if ((fm > 0) == (fa > 0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    return 0.5 * (a + b);
  };

  double total = 0;
  double x0 = lo;
  double f0 = f(x0);
  for (int64_t k = 1; k <= cells; ++k) {
    const double x1 = lo + static_cast<double>(k) * h;
    const double f1 = f(x1);
    if (f0 >= 0 && f1 >= 0) {
      total += piece(x0, f0, x1, f1);
    } else if (f0 > 0 && f1 < 0) {
      const double z = root(x0, f0, x1);
      total += piece(x0, f0, z, 0);
    } else if (f0 < 0 && f1 > 0) {
      const double z = root(x0, f0, x1);
      total += piece(z, 0, x1, f1);
    }
    x0 = x1;
    f0 = f1;
  }
  return std::clamp(total, 0.0, 1.0);
}

}  // namespace tsdp
