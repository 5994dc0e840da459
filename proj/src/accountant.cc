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

#include "tsdp/accountant.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "tsdp/status_macros.h"

namespace tsdp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// FFTW's planner is not thread-safe; execution on distinct plans is.
std::mutex& FftwPlannerMutex() {
  static std::mutex mu;
  return mu;
}

bool IsSmooth(int64_t n) {
  for (int64_t f : {2, 3, 5, 7}) {
    while (n % f == 0) n /= f;
  }
  return n == 1;
}

int64_t FastLength(int64_t n) {
  while (!IsSmooth(n)) ++n;
  return n;
}

std::vector<double> DirectConvolve(const std::vector<double>& a,
                                   const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

std::vector<double> FftConvolve(const std::vector<double>& a,
                                const std::vector<double>& b) {
  const int64_t out_len = static_cast<int64_t>(a.size() + b.size()) - 1;
  const int n = static_cast<int>(FastLength(out_len));
  const int spectrum = n / 2 + 1;

  double* real = fftw_alloc_real(n);
  fftw_complex* fa = fftw_alloc_complex(spectrum);
  fftw_complex* fb = fftw_alloc_complex(spectrum);
  fftw_plan forward_a, forward_b, backward;
  {
    std::lock_guard<std::mutex> lock(FftwPlannerMutex());
    forward_a = fftw_plan_dft_r2c_1d(n, real, fa, FFTW_ESTIMATE);
    forward_b = fftw_plan_dft_r2c_1d(n, real, fb, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_1d(n, fa, real, FFTW_ESTIMATE);
  }

  std::fill(real, real + n, 0.0);
  std::copy(a.begin(), a.end(), real);
  fftw_execute(forward_a);
  std::fill(real, real + n, 0.0);
  std::copy(b.begin(), b.end(), real);
  fftw_execute(forward_b);
  for (int k = 0; k < spectrum; ++k) {
    const std::complex<double> x(fa[k][0], fa[k][1]);
    const std::complex<double> y(fb[k][0], fb[k][1]);
    const std::complex<double> z = x * y;
    fa[k][0] = z.real();
    fa[k][1] = z.imag();
  }
  fftw_execute(backward);

  std::vector<double> out(real, real + out_len);
  for (double& v : out) v = std::max(0.0, v / n);

  {
    std::lock_guard<std::mutex> lock(FftwPlannerMutex());
    fftw_destroy_plan(forward_a);
    fftw_destroy_plan(forward_b);
    fftw_destroy_plan(backward);
  }
  fftw_free(real);
  fftw_free(fa);
  fftw_free(fb);
  return out;
}

// Moves up to tail_tolerance of mass from the two ends of the finite part
// into infinity_mass and drops exact zeros at both ends.
void TruncateTails(DiscretePld& pld, double tail_tolerance) {
  auto& m = pld.masses;
  const double budget = tail_tolerance / 2;
  size_t lo = 0;
  double cut = 0;
  while (lo + 1 < m.size() && cut + m[lo] <= budget) cut += m[lo++];
  size_t hi = m.size();
  double cut_hi = 0;
  while (hi - 1 > lo && cut_hi + m[hi - 1] <= budget) cut_hi += m[--hi];
  pld.infinity_mass += cut + cut_hi;
  m = std::vector<double>(m.begin() + lo, m.begin() + hi);
  pld.min_index += static_cast<int64_t>(lo);
}

// Smallest k in [0, k_max] with pred(k) true, given pred is monotone
// (false...false true...true); k_max + 1 if none.
template <typename Pred>
int64_t FirstTrue(int64_t k_max, Pred pred) {
  if (pred(0)) return 0;
  int64_t lo = 0;
  int64_t hi = 1;
  while (hi < k_max && !pred(hi)) {
    lo = hi;
    hi = std::min(k_max, 2 * hi);
  }
  if (!pred(hi)) return k_max + 1;
  while (hi - lo > 1) {
    const int64_t mid = lo + (hi - lo) / 2;
    (pred(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

double DiscretePld::FiniteMass() const {
  return std::accumulate(masses.begin(), masses.end(), 0.0);
}

absl::StatusOr<PldPair> Quantize(const PrivacyProfile& profile,
                                 const QuantizationOptions& options) {
  const double d = options.grid_spacing;
  if (!(d > 0) || !std::isfinite(d)) {
    return absl::InvalidArgumentError("grid spacing must be positive");
  }
  if (!(options.min_epsilon <= 0 && options.max_epsilon >= 0)) {
    return absl::InvalidArgumentError("epsilon range must contain 0");
  }
  if (!(options.tail_tolerance >= 0 && options.tail_tolerance < 1)) {
    return absl::InvalidArgumentError("tail tolerance must lie in [0, 1)");
  }

  PldPair pair;
  pair.p_over_q.grid_spacing = pair.q_over_p.grid_spacing = d;
  pair.p_over_q.direction = PldDirection::kPOverQ;
  pair.q_over_p.direction = PldDirection::kQOverP;
  if (profile.IsPerfectlyPrivate()) return pair;

  const double tol = options.tail_tolerance;
  int64_t k_max = static_cast<int64_t>(std::floor(options.max_epsilon / d));
  const int64_t k_cap = std::max(
      k_max, static_cast<int64_t>(std::floor(options.epsilon_cap / d)));
  const int64_t k_min_abs =
      static_cast<int64_t>(std::floor(-options.min_epsilon / d));

  auto excess = [&](int64_t k) {
    return profile.Excess(std::exp(static_cast<double>(k) * d));
  };
  while (k_max < k_cap && excess(k_max) > tol) {
    k_max = std::min(k_cap, std::max<int64_t>(1, 2 * k_max));
  }
  const int64_t k_hi = FirstTrue(k_max, [&](int64_t k) {
    return excess(k) <= tol;
  });
  if (k_hi > k_max) {
    return absl::OutOfRangeError(absl::StrCat(
        "epsilon grid too narrow: profile at epsilon = ",
        static_cast<double>(k_max) * d, " is ", excess(k_max),
        " > tail tolerance; widen the grid"));
  }
  // Below alpha = 1 the excess divided by alpha is the tail of the reverse
  // direction. Mass beyond the range is lumped at the edge.
  const int64_t k_lo =
      -std::min(k_min_abs, FirstTrue(k_min_abs, [&](int64_t k) {
        return excess(-k) / std::exp(-static_cast<double>(k) * d) <= tol;
      }));

  const int64_t n = k_hi - k_lo + 1;
  std::vector<double> alpha(n), u(n);
  for (int64_t i = 0; i < n; ++i) {
    alpha[i] = std::exp(static_cast<double>(k_lo + i) * d);
    u[i] = excess(k_lo + i);
  }
  // The quantized profile is the piecewise-linear interpolant through
  // (0, 1), the grid points, and flat after the last one. Its slope on each
  // piece is base + x with base -1 left of alpha = 1 and 0 right of it; Q
  // atoms are the slope increments, computed from the x parts to avoid
  // cancellation.
  std::vector<double> base(n + 1), x(n + 1);
  base[0] = -1;
  x[0] = u[0] / alpha[0];
  for (int64_t i = 0; i + 1 < n; ++i) {
    base[i + 1] = k_lo + i + 1 <= 0 ? -1 : 0;
    x[i + 1] = (u[i + 1] - u[i]) / (alpha[i + 1] - alpha[i]);
  }
  base[n] = 0;
  x[n] = 0;

  std::vector<double> q_mass(n), p_mass(n);
  for (int64_t i = 0; i < n; ++i) {
    q_mass[i] =
        std::max(0.0, (base[i + 1] - base[i]) + (x[i + 1] - x[i]));
    p_mass[i] = alpha[i] * q_mass[i];
  }
  const double q_total = std::accumulate(q_mass.begin(), q_mass.end(), 0.0);
  const double h_last = u[n - 1] + std::max(0.0, 1 - alpha[n - 1]);

  pair.p_over_q.min_index = k_lo;
  pair.p_over_q.masses = std::move(p_mass);
  pair.p_over_q.infinity_mass = std::clamp(h_last, 0.0, 1.0);

  std::reverse(q_mass.begin(), q_mass.end());
  pair.q_over_p.min_index = -k_hi;
  pair.q_over_p.masses = std::move(q_mass);
  pair.q_over_p.infinity_mass = std::max(0.0, 1 - q_total);
  return pair;
}

absl::StatusOr<DiscretePld> Compose(const DiscretePld& a, const DiscretePld& b,
                                    double tail_tolerance, int64_t max_length) {
  if (a.grid_spacing != b.grid_spacing || a.direction != b.direction) {
    return absl::InvalidArgumentError(
        "cannot compose PLDs with different grids or directions");
  }
  if (a.masses.empty() || b.masses.empty()) {
    return absl::InvalidArgumentError("PLD has no finite support");
  }
  const int64_t len =
      static_cast<int64_t>(a.masses.size() + b.masses.size()) - 1;
  if (len > max_length) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "composed PLD needs ", len, " grid points, above the cap of ",
        max_length, "; increase the grid spacing or tail tolerance"));
  }
  DiscretePld out;
  out.grid_spacing = a.grid_spacing;
  out.direction = a.direction;
  out.min_index = a.min_index + b.min_index;
  const double work =
      static_cast<double>(a.masses.size()) * static_cast<double>(b.masses.size());
  out.masses = work <= 1e6 ? DirectConvolve(a.masses, b.masses)
                           : FftConvolve(a.masses, b.masses);
  out.infinity_mass = a.infinity_mass + b.infinity_mass -
                      a.infinity_mass * b.infinity_mass;
  TruncateTails(out, tail_tolerance);
  return out;
}

absl::StatusOr<DiscretePld> SelfCompose(const DiscretePld& pld, int64_t steps,
                                        double tail_tolerance,
                                        int64_t max_length) {
  if (steps < 1) return absl::InvalidArgumentError("steps must be >= 1");
  if (steps == 1) return pld;
  std::optional<DiscretePld> result;
  DiscretePld base = pld;
  while (true) {
    if (steps & 1) {
      if (result.has_value()) {
        TSDP_ASSIGN_OR_RETURN(auto next,
                              Compose(*result, base, tail_tolerance, max_length));
        result = std::move(next);
      } else {
        result = base;
      }
    }
    steps >>= 1;
    if (steps == 0) break;
    TSDP_ASSIGN_OR_RETURN(auto squared,
                          Compose(base, base, tail_tolerance, max_length));
    base = std::move(squared);
  }
  return *std::move(result);
}

absl::StatusOr<PldPair> SelfCompose(const PldPair& pair, int64_t steps,
                                    double tail_tolerance, int64_t max_length) {
  PldPair out;
  TSDP_ASSIGN_OR_RETURN(out.p_over_q, SelfCompose(pair.p_over_q, steps,
                                                  tail_tolerance, max_length));
  TSDP_ASSIGN_OR_RETURN(out.q_over_p, SelfCompose(pair.q_over_p, steps,
                                                  tail_tolerance, max_length));
  return out;
}

namespace {

// Pr[L_{P/Q} > eps] for eps in [(j-1) d, j d), i.e. mass at index >= j.
double UpperTail(const DiscretePld& pld, int64_t j) {
  double sum = pld.infinity_mass;
  const int64_t n = static_cast<int64_t>(pld.masses.size());
  for (int64_t i = std::max<int64_t>(0, j - pld.min_index); i < n; ++i) {
    sum += pld.masses[i];
  }
  return sum;
}

// Pr[L_{Q/P} < -eps] for the same eps, i.e. mass at index <= -j.
double LowerTail(const DiscretePld& pld, int64_t j) {
  double sum = 0;
  const int64_t end = std::min<int64_t>(static_cast<int64_t>(pld.masses.size()),
                                        -j - pld.min_index + 1);
  for (int64_t i = 0; i < end; ++i) sum += pld.masses[i];
  return sum;
}

}  // namespace

double DeltaAtEpsilon(const PldPair& pair, double epsilon) {
  if (epsilon == kInf) return std::clamp(pair.p_over_q.infinity_mass, 0.0, 1.0);
  if (epsilon == -kInf) return 1.0;
  const double d = pair.p_over_q.grid_spacing;
  // Forward losses above epsilon sit at indices >= j, reverse losses below
  // -epsilon at indices <= -j.
  const int64_t j = static_cast<int64_t>(std::floor(epsilon / d)) + 1;
  const double a = UpperTail(pair.p_over_q, j);
  const double b = LowerTail(pair.q_over_p, j);
  return std::clamp(a - std::exp(epsilon) * b, 0.0, 1.0);
}

double EpsilonAtDelta(const PldPair& pair, double delta) {
  if (delta >= 1) return 0;
  const DiscretePld& p = pair.p_over_q;
  const DiscretePld& q = pair.q_over_p;
  if (delta <= p.infinity_mass) return kInf;
  const double d = p.grid_spacing;

  // For eps in [(j-1) d, j d) the delta is A_j - e^eps B_j with A_j the P/Q
  // mass at index >= j and B_j the Q/P mass at index <= -j.
  const int64_t n_p = static_cast<int64_t>(p.masses.size());
  const int64_t top = p.min_index + n_p;  // first index above the support
  const int64_t j_end = std::max<int64_t>(1, top);

  // Running sums for j = 1, the segment starting at eps = 0.
  double a = UpperTail(p, 1);
  double b = LowerTail(q, 1);
  if (std::clamp(a - b, 0.0, 1.0) <= delta) return 0;

  for (int64_t j = 1; j <= j_end; ++j) {
    const double eps_lo = static_cast<double>(j - 1) * d;
    const double eps_hi = static_cast<double>(j) * d;
    const double at_hi = a - std::exp(eps_hi) * b;
    if (at_hi <= delta || j == j_end) {
      if (b <= 0) return eps_hi;
      const double eps = std::log((a - delta) / b);
      return std::clamp(eps, eps_lo, eps_hi);
    }
    // Step to the next segment.
    const int64_t pi = j - p.min_index;
    if (pi >= 0 && pi < n_p) a -= p.masses[pi];
    const int64_t qi = -j - q.min_index;
    if (qi >= 0 && qi < static_cast<int64_t>(q.masses.size())) b -= q.masses[qi];
    a = std::max(a, 0.0);
    b = std::max(b, 0.0);
  }
  return kInf;
}

int64_t CompositionsForEpochs(const PrivacyProfile& profile,
                              int64_t steps_per_epoch, int64_t epochs) {
  return profile.scope() == ProfileScope::kPerEpoch ? epochs
                                                    : epochs * steps_per_epoch;
}

absl::StatusOr<PldPair> ComposedPld(const PrivacyProfile& profile,
                                    int64_t steps,
                                    const QuantizationOptions& options) {
  TSDP_ASSIGN_OR_RETURN(auto pld, Quantize(profile, options));
  return SelfCompose(pld, steps, options.tail_tolerance);
}

absl::StatusOr<AccountingResult> EpsilonForProfile(
    const PrivacyProfile& profile, int64_t steps, double delta,
    const QuantizationOptions& options) {
  if (!(delta > 0 && delta < 1)) {
    return absl::InvalidArgumentError("delta must lie in (0, 1)");
  }
  TSDP_ASSIGN_OR_RETURN(auto pld, ComposedPld(profile, steps, options));
  AccountingResult result;
  result.epsilon = EpsilonAtDelta(pld, delta);
  result.delta = delta;
  result.steps = steps;
  result.bound_kind = profile.bound_kind();
  if (!std::isfinite(result.epsilon)) {
    return absl::OutOfRangeError(absl::StrCat(
        "delta = ", delta, " is unattainable: mass at infinite loss is ",
        pld.p_over_q.infinity_mass));
  }
  return result;
}

}  // namespace tsdp
