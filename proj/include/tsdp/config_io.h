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

#ifndef TSDP_CONFIG_IO_H_
#define TSDP_CONFIG_IO_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "tsdp/privacy_profile.h"
#include "tsdp/profiles.h"
#include "tsdp/scheme.h"

namespace tsdp {

enum class SchemeFamily { kStructured, kBlackbox };

// One scheme as read from a flat `key = value` file. Blackbox runs use
// population, group, scheme.batch_size and scheme.sigma only.
struct RunConfig {
  std::string label;
  SchemeFamily family = SchemeFamily::kStructured;
  SchemeConfig scheme;
  BoundRequest bound = BoundRequest::kTight;
  int64_t population = 0;
  int64_t group = 0;
};

// Lines are `key = value`; `#` starts a comment. Recognized keys:
//   scheme (structured|blackbox), label, bound (tight|upper|lower),
//   N, L (comma list), L_C, L_F, lambda, Lambda, sigma,
//   top_level (deterministic|wor), bottom_level (wr|poisson),
//   relation (event|user), w, v, dims, sigma_C, sigma_F, N_total, group.
// Errors name the offending key.
absl::StatusOr<RunConfig> ParseRunConfig(absl::string_view text);
absl::StatusOr<RunConfig> LoadRunConfig(const std::string& path);

// Sets one key as if it appeared last in the file, then revalidates.
absl::Status ApplyOverride(RunConfig& config, absl::string_view key,
                           absl::string_view value);

absl::StatusOr<PrivacyProfile> BuildRunProfile(const RunConfig& config);

// Profile applications per epoch: 1 for per-epoch profiles, otherwise the
// number of batches per epoch.
absl::StatusOr<int64_t> CompositionsPerEpoch(const RunConfig& config,
                                             const PrivacyProfile& profile);

struct CurveRow {
  std::string scheme;
  int64_t step = 0;
  double epsilon = 0;
  double delta = 0;
  std::string bound_kind;

  bool operator==(const CurveRow&) const = default;
};

struct CurveTable {
  std::vector<CurveRow> rows;

  // Orders rows by (scheme, step, epsilon).
  void Sort();
  bool operator==(const CurveTable&) const = default;
};

inline constexpr char kCsvHeader[] =
    "scheme,step,epsilon,delta,bound_kind";

// Numbers use 17 significant digits so parsing reproduces them exactly.
std::string ToCsv(const CurveTable& table);
absl::StatusOr<CurveTable> ParseCsv(absl::string_view text);
std::string ToJson(const CurveTable& table);
absl::StatusOr<CurveTable> ParseJson(absl::string_view text);

}  // namespace tsdp

#endif  // TSDP_CONFIG_IO_H_
