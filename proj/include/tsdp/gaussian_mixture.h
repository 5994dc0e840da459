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

#ifndef TSDP_GAUSSIAN_MIXTURE_H_
#define TSDP_GAUSSIAN_MIXTURE_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace tsdp {

// Standard normal CDF and survival function. Both are evaluated through erfc,
// so tails keep full relative precision.
double NormalCdf(double x);
double NormalSf(double x);

// Univariate mixture of Gaussians that share one standard deviation. Means are
// in units of the clipping norm.
class GaussianMixture {
 public:
  // Weights must be nonnegative and sum to one within 1e-12; they are
  // renormalized to sum to exactly one.
  static absl::StatusOr<GaussianMixture> Create(std::vector<double> means,
                                                std::vector<double> weights,
                                                double sigma);
  static GaussianMixture Single(double mean, double sigma);

  std::span<const double> means() const { return means_; }
  std::span<const double> weights() const { return weights_; }
  double sigma() const { return sigma_; }
  int size() const { return static_cast<int>(means_.size()); }

  double MinMean() const;
  double MaxMean() const;

  // log of the density at x.
  double LogDensity(double x) const;
  // P(X > x) and P(X <= x), summed per component through NormalSf/NormalCdf.
  double Sf(double x) const;
  double Cdf(double x) const;

  // Mixture with every mean multiplied by -1.
  GaussianMixture Reflected() const;

  bool operator==(const GaussianMixture& other) const = default;

 private:
  GaussianMixture(std::vector<double> means, std::vector<double> weights,
                  double sigma)
      : means_(std::move(means)), weights_(std::move(weights)), sigma_(sigma) {}

  std::vector<double> means_;
  std::vector<double> weights_;
  double sigma_;
};

enum class RatioMonotonicity { kNone, kNondecreasing, kNonincreasing };

// Ordered pair (P, Q) of equal-variance mixtures. The direction of the
// likelihood ratio dP/dQ is derived on construction: if every P-mean is at
// least every Q-mean the ratio is nondecreasing in x, and if every P-mean is at
// most every Q-mean it is nonincreasing.
class MixturePair {
 public:
  static absl::StatusOr<MixturePair> Create(GaussianMixture p,
                                            GaussianMixture q);

  const GaussianMixture& p() const { return p_; }
  const GaussianMixture& q() const { return q_; }
  RatioMonotonicity monotonicity() const { return monotonicity_; }

  // Returns (Q, P).
  MixturePair Swapped() const;

  double LogLikelihoodRatio(double x) const {
    return p_.LogDensity(x) - q_.LogDensity(x);
  }

 private:
  MixturePair(GaussianMixture p, GaussianMixture q, RatioMonotonicity m)
      : p_(std::move(p)), q_(std::move(q)), monotonicity_(m) {}

  GaussianMixture p_;
  GaussianMixture q_;
  RatioMonotonicity monotonicity_;
};

// H_alpha(N(0, sigma) || N(gap, sigma)) in closed form.
absl::StatusOr<double> GaussianHockeyStick(double gap, double sigma,
                                           double alpha);

// Total variation distance between N(0, sigma) and N(gap, sigma). sigma == 0
// is a deterministic shift.
double GaussianTvd(double gap, double sigma);

// H_alpha(P || Q). Monotone pairs are evaluated exactly as a sum of Gaussian
// tail probabilities over the superlevel set of the likelihood ratio; other
// pairs fall back to dense quadrature.
double MixtureHockeyStick(const MixturePair& pair, double alpha);

}  // namespace tsdp

#endif  // TSDP_GAUSSIAN_MIXTURE_H_
