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

#include "tsdp/gaussian_mixture.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "tsdp/oracle.h"

namespace tsdp {
namespace {

constexpr double kWeightSumTolerance = 1e-12;
constexpr int kBisectionSteps = 200;

double LogSumExp(std::span<const double> terms) {
  const double max_term = *std::max_element(terms.begin(), terms.end());
  if (std::isinf(max_term)) return max_term;
  double sum = 0;
  for (double t : terms) sum += std::exp(t - max_term);
  return max_term + std::log(sum);
}

constexpr int kMaxBracketDoublings = 64;

// H_alpha(P || Q) when dP/dQ is nondecreasing in x, so the superlevel set
// {dP/dQ > alpha} is a half-line (threshold, inf).
double NondecreasingHockeyStick(const GaussianMixture& p,
                                const GaussianMixture& q, double alpha) {
  const double log_alpha = std::log(alpha);
  const double sigma = p.sigma();
  const double max_abs_mean =
      std::max({std::abs(p.MinMean()), std::abs(p.MaxMean()),
                std::abs(q.MinMean()), std::abs(q.MaxMean())});
  const double bracket = 20 * sigma * (1 + max_abs_mean);

  auto excess = [&](double x) {
    return p.LogDensity(x) - q.LogDensity(x) - log_alpha;
  };
  // The crossing can sit far from the means when |log alpha| is large
  // relative to the mean gap / sigma^2; widen until the sign changes.
  double lo = std::min(p.MinMean(), q.MinMean()) - bracket;
  double hi = std::max(p.MaxMean(), q.MaxMean()) + bracket;
  for (int i = 0; i < kMaxBracketDoublings && excess(lo) >= 0; ++i) {
    lo -= hi - lo;
  }
  for (int i = 0; i < kMaxBracketDoublings && excess(hi) <= 0; ++i) {
    hi += hi - lo;
  }
  double threshold;
  if (excess(lo) >= 0) {
    threshold = lo;
  } else if (excess(hi) <= 0) {
    threshold = hi;
  } else {
    for (int i = 0; i < kBisectionSteps && hi - lo > 0; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (excess(mid) > 0) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    threshold = 0.5 * (lo + hi);
  }

  // Evaluate on whichever side of the threshold keeps the probabilities
  // small. For alpha >= 1 the CDF form would cancel two terms of size alpha.
  const double p_tail = p.Sf(threshold);
  if (alpha >= 1 || p_tail <= 0.5) {
    return p_tail - alpha * q.Sf(threshold);
  }
  return (1 - alpha) - (p.Cdf(threshold) - alpha * q.Cdf(threshold));
}

RatioMonotonicity DeriveMonotonicity(const GaussianMixture& p,
                                     const GaussianMixture& q) {
  if (p.MinMean() >= q.MaxMean()) return RatioMonotonicity::kNondecreasing;
  if (p.MaxMean() <= q.MinMean()) return RatioMonotonicity::kNonincreasing;
  return RatioMonotonicity::kNone;
}

}  // namespace

double NormalCdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double NormalSf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

absl::StatusOr<GaussianMixture> GaussianMixture::Create(
    std::vector<double> means, std::vector<double> weights, double sigma) {
  if (!(sigma > 0) || std::isinf(sigma)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sigma must be positive and finite, got ", sigma));
  }
  if (means.empty() || means.size() != weights.size()) {
    return absl::InvalidArgumentError(
        "means and weights must be nonempty and of equal length");
  }
  double total = 0;
  for (size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0) || !std::isfinite(means[i])) {
      return absl::InvalidArgumentError(absl::StrCat(
          "component ", i, " has weight ", weights[i], " and mean ", means[i]));
    }
    total += weights[i];
  }
  if (std::abs(total - 1) > kWeightSumTolerance) {
    return absl::InvalidArgumentError(
        absl::StrCat("weights sum to ", total, ", expected 1"));
  }
  for (double& w : weights) w /= total;
  return GaussianMixture(std::move(means), std::move(weights), sigma);
}

GaussianMixture GaussianMixture::Single(double mean, double sigma) {
  return GaussianMixture({mean}, {1.0}, sigma);
}

double GaussianMixture::MinMean() const {
  return *std::min_element(means_.begin(), means_.end());
}

double GaussianMixture::MaxMean() const {
  return *std::max_element(means_.begin(), means_.end());
}

double GaussianMixture::LogDensity(double x) const {
  std::vector<double> terms(means_.size());
  const double inv_two_var = 1 / (2 * sigma_ * sigma_);
  for (size_t i = 0; i < means_.size(); ++i) {
    const double d = x - means_[i];
    terms[i] = std::log(weights_[i]) - d * d * inv_two_var;
  }
  return LogSumExp(terms) -
         std::log(sigma_ * std::sqrt(2 * std::numbers::pi));
}

double GaussianMixture::Sf(double x) const {
  double sum = 0;
  for (size_t i = 0; i < means_.size(); ++i) {
    sum += weights_[i] * NormalSf((x - means_[i]) / sigma_);
  }
  return sum;
}

double GaussianMixture::Cdf(double x) const {
  double sum = 0;
  for (size_t i = 0; i < means_.size(); ++i) {
    sum += weights_[i] * NormalCdf((x - means_[i]) / sigma_);
  }
  return sum;
}

GaussianMixture GaussianMixture::Reflected() const {
  std::vector<double> means(means_.size());
  std::transform(means_.begin(), means_.end(), means.begin(),
                 [](double m) { return -m; });
  return GaussianMixture(std::move(means), weights_, sigma_);
}

absl::StatusOr<MixturePair> MixturePair::Create(GaussianMixture p,
                                                GaussianMixture q) {
  if (p.sigma() != q.sigma()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "mixtures must share sigma, got ", p.sigma(), " and ", q.sigma()));
  }
  const RatioMonotonicity m = DeriveMonotonicity(p, q);
  return MixturePair(std::move(p), std::move(q), m);
}

MixturePair MixturePair::Swapped() const {
  return MixturePair(q_, p_, DeriveMonotonicity(q_, p_));
}

absl::StatusOr<double> GaussianHockeyStick(double gap, double sigma,
                                           double alpha) {
  if (!(sigma > 0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sigma must be positive, got ", sigma));
  }
  if (!(alpha >= 0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha must be nonnegative, got ", alpha));
  }
  if (alpha == 0) return 1.0;
  if (std::isinf(alpha)) return 0.0;
  const double g = std::abs(gap);
  if (g == 0) return std::max(0.0, 1 - alpha);
  const double shift = sigma * std::log(alpha) / g;
  const double a = g / (2 * sigma) - shift;
  const double b = -g / (2 * sigma) - shift;
  double h;
  if (alpha >= 1) {
    h = NormalCdf(a) - alpha * NormalCdf(b);
  } else {
    h = (1 - alpha) - NormalCdf(-a) + alpha * NormalCdf(-b);
  }
  return std::clamp(h, std::max(0.0, 1 - alpha), 1.0);
}

double GaussianTvd(double gap, double sigma) {
  const double g = std::abs(gap);
  if (g == 0) return 0;
  if (sigma == 0) return 1;
  if (std::isinf(sigma)) return 0;
  return std::erf(g / (2 * sigma * std::numbers::sqrt2));
}

double MixtureHockeyStick(const MixturePair& pair, double alpha) {
  if (alpha <= 0) return 1;
  if (std::isinf(alpha)) return 0;
  const double floor = std::max(0.0, 1 - alpha);
  if (pair.p() == pair.q()) return floor;
  double h;
  switch (pair.monotonicity()) {
    case RatioMonotonicity::kNondecreasing:
      h = NondecreasingHockeyStick(pair.p(), pair.q(), alpha);
      break;
    case RatioMonotonicity::kNonincreasing:
      h = NondecreasingHockeyStick(pair.p().Reflected(), pair.q().Reflected(),
                                   alpha);
      break;
    case RatioMonotonicity::kNone:
    default:
      h = QuadratureHockeyStick(pair, alpha);
      break;
  }
  return std::clamp(h, floor, 1.0);
}

}  // namespace tsdp
