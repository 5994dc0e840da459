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

#include "tsdp/config_io.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <tuple>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "json.hpp"
#include "tsdp/status_macros.h"

namespace tsdp {
namespace {

absl::Status KeyError(absl::string_view key, absl::string_view message) {
  return absl::InvalidArgumentError(absl::StrCat(key, ": ", message));
}

absl::StatusOr<int64_t> ParseInt(absl::string_view key, absl::string_view value) {
  int64_t out;
  if (!absl::SimpleAtoi(value, &out)) {
    return KeyError(key, absl::StrCat("expected an integer, got '", value, "'"));
  }
  return out;
}

absl::StatusOr<double> ParseReal(absl::string_view key, absl::string_view value) {
  const std::string lower = absl::AsciiStrToLower(value);
  if (lower == "inf" || lower == "infinity") {
    return std::numeric_limits<double>::infinity();
  }
  double out;
  if (!absl::SimpleAtod(value, &out) || std::isnan(out)) {
    return KeyError(key, absl::StrCat("expected a number, got '", value, "'"));
  }
  return out;
}

Augmentation& EnsureAugmentation(SchemeConfig& scheme) {
  if (!scheme.augmentation.has_value()) scheme.augmentation = Augmentation{};
  return *scheme.augmentation;
}

absl::Status SetKey(RunConfig& config, absl::string_view key,
                    absl::string_view value) {
  SchemeConfig& s = config.scheme;
  if (key == "label") {
    if (value.find_first_of(",\"\n") != absl::string_view::npos) {
      return KeyError(key, "must not contain commas, quotes or newlines");
    }
    config.label = std::string(value);
  } else if (key == "scheme") {
    if (value == "structured") {
      config.family = SchemeFamily::kStructured;
    } else if (value == "blackbox") {
      config.family = SchemeFamily::kBlackbox;
    } else {
      return KeyError(key, "expected structured or blackbox");
    }
  } else if (key == "bound") {
    if (value == "tight") {
      config.bound = BoundRequest::kTight;
    } else if (value == "upper") {
      config.bound = BoundRequest::kUpper;
    } else if (value == "lower") {
      config.bound = BoundRequest::kLower;
    } else {
      return KeyError(key, "expected tight, upper or lower");
    }
  } else if (key == "N") {
    TSDP_ASSIGN_OR_RETURN(s.num_sequences, ParseInt(key, value));
  } else if (key == "L") {
    s.lengths.clear();
    for (absl::string_view part : absl::StrSplit(value, ',')) {
      TSDP_ASSIGN_OR_RETURN(int64_t length,
                            ParseInt(key, absl::StripAsciiWhitespace(part)));
      s.lengths.push_back(length);
    }
  } else if (key == "L_C") {
    TSDP_ASSIGN_OR_RETURN(s.context_length, ParseInt(key, value));
  } else if (key == "L_F") {
    TSDP_ASSIGN_OR_RETURN(s.forecast_length, ParseInt(key, value));
  } else if (key == "lambda") {
    TSDP_ASSIGN_OR_RETURN(s.subsequences_per_sequence, ParseInt(key, value));
  } else if (key == "Lambda") {
    TSDP_ASSIGN_OR_RETURN(s.batch_size, ParseInt(key, value));
  } else if (key == "sigma") {
    TSDP_ASSIGN_OR_RETURN(s.sigma, ParseReal(key, value));
  } else if (key == "top_level") {
    if (value == "deterministic") {
      s.top_level = TopLevel::kDeterministic;
    } else if (value == "wor") {
      s.top_level = TopLevel::kWithoutReplacement;
    } else {
      return KeyError(key, "expected deterministic or wor");
    }
  } else if (key == "bottom_level") {
    if (value == "wr") {
      s.bottom_level = BottomLevel::kWithReplacement;
    } else if (value == "poisson") {
      s.bottom_level = BottomLevel::kPoisson;
    } else {
      return KeyError(key, "expected wr or poisson");
    }
  } else if (key == "relation") {
    if (value == "event") {
      s.relation.kind = RelationKind::kEvent;
    } else if (value == "user") {
      s.relation.kind = RelationKind::kUser;
    } else {
      return KeyError(key, "expected event or user");
    }
  } else if (key == "w") {
    TSDP_ASSIGN_OR_RETURN(s.relation.w, ParseInt(key, value));
  } else if (key == "v") {
    TSDP_ASSIGN_OR_RETURN(double v, ParseReal(key, value));
    s.relation.magnitude = v;
  } else if (key == "dims") {
    TSDP_ASSIGN_OR_RETURN(s.relation.input_dims, ParseInt(key, value));
  } else if (key == "sigma_C") {
    TSDP_ASSIGN_OR_RETURN(EnsureAugmentation(s).sigma_context,
                          ParseReal(key, value));
  } else if (key == "sigma_F") {
    TSDP_ASSIGN_OR_RETURN(EnsureAugmentation(s).sigma_forecast,
                          ParseReal(key, value));
  } else if (key == "N_total") {
    TSDP_ASSIGN_OR_RETURN(config.population, ParseInt(key, value));
  } else if (key == "group") {
    TSDP_ASSIGN_OR_RETURN(config.group, ParseInt(key, value));
  } else {
    return KeyError(key, "unknown key");
  }
  return absl::OkStatus();
}

absl::Status ValidateRun(const RunConfig& config) {
  if (config.family == SchemeFamily::kStructured) {
    return config.scheme.Validate();
  }
  if (config.population < 1) return KeyError("N_total", "must be >= 1");
  if (config.group < 1 || config.group > config.population) {
    return KeyError("group", "must lie in [1, N_total]");
  }
  if (config.scheme.batch_size < 1 ||
      config.scheme.batch_size > config.population) {
    return KeyError("Lambda", "must lie in [1, N_total]");
  }
  if (!(config.scheme.sigma > 0) || !std::isfinite(config.scheme.sigma)) {
    return KeyError("sigma", "must be a positive finite number");
  }
  if (config.bound != BoundRequest::kLower) {
    return KeyError("bound", "blackbox scheme only has bound: lower");
  }
  return absl::OkStatus();
}

std::string DefaultLabel(const RunConfig& config) {
  if (config.family == SchemeFamily::kBlackbox) {
    return absl::StrCat("blackbox_group", config.group);
  }
  const SchemeConfig& s = config.scheme;
  return absl::StrCat(
      s.top_level == TopLevel::kDeterministic ? "det" : "wor", "_",
      s.bottom_level == BottomLevel::kWithReplacement ? "wr" : "poisson",
      "_lambda", s.subsequences_per_sequence, "_", BoundRequestName(config.bound));
}

std::string FormatDouble(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

absl::StatusOr<double> ParseDoubleField(absl::string_view text) {
  const std::string s(text);
  char* end = nullptr;
  const double value = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed number '", text, "'"));
  }
  return value;
}

}  // namespace

absl::StatusOr<RunConfig> ParseRunConfig(absl::string_view text) {
  RunConfig config;
  int line_number = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_number;
    if (const size_t hash = line.find('#'); hash != absl::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == absl::string_view::npos) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_number, ": expected key = value"));
    }
    TSDP_RETURN_IF_ERROR(SetKey(config,
                                absl::StripAsciiWhitespace(line.substr(0, eq)),
                                absl::StripAsciiWhitespace(line.substr(eq + 1))));
  }
  TSDP_RETURN_IF_ERROR(ValidateRun(config));
  if (config.label.empty()) config.label = DefaultLabel(config);
  return config;
}

absl::StatusOr<RunConfig> LoadRunConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseRunConfig(buffer.str());
}

absl::Status ApplyOverride(RunConfig& config, absl::string_view key,
                           absl::string_view value) {
  RunConfig updated = config;
  TSDP_RETURN_IF_ERROR(SetKey(updated, key, value));
  TSDP_RETURN_IF_ERROR(ValidateRun(updated));
  config = std::move(updated);
  return absl::OkStatus();
}

absl::StatusOr<PrivacyProfile> BuildRunProfile(const RunConfig& config) {
  TSDP_RETURN_IF_ERROR(ValidateRun(config));
  if (config.family == SchemeFamily::kBlackbox) {
    return BlackboxLower(config.population, config.scheme.batch_size,
                         config.group, config.scheme.sigma);
  }
  return BuildProfile(config.scheme, config.bound);
}

absl::StatusOr<int64_t> CompositionsPerEpoch(const RunConfig& config,
                                             const PrivacyProfile& profile) {
  if (profile.scope() == ProfileScope::kPerEpoch) return 1;
  if (config.family == SchemeFamily::kBlackbox) {
    return std::max<int64_t>(1, config.population / config.scheme.batch_size);
  }
  TSDP_ASSIGN_OR_RETURN(auto params, ComputeEffectiveParams(config.scheme));
  return params.steps_per_epoch;
}

void CurveTable::Sort() {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const CurveRow& a, const CurveRow& b) {
                     return std::tie(a.scheme, a.step, a.epsilon) <
                            std::tie(b.scheme, b.step, b.epsilon);
                   });
}

std::string ToCsv(const CurveTable& table) {
  std::string out = absl::StrCat(kCsvHeader, "\n");
  for (const CurveRow& row : table.rows) {
    absl::StrAppend(&out, row.scheme, ",", row.step, ",",
                    FormatDouble(row.epsilon), ",", FormatDouble(row.delta),
                    ",", row.bound_kind, "\n");
  }
  return out;
}

absl::StatusOr<CurveTable> ParseCsv(absl::string_view text) {
  std::vector<absl::string_view> lines =
      absl::StrSplit(text, '\n', absl::SkipEmpty());
  if (lines.empty() || absl::StripTrailingAsciiWhitespace(lines[0]) != kCsvHeader) {
    return absl::InvalidArgumentError(
        absl::StrCat("CSV header must be '", kCsvHeader, "'"));
  }
  CurveTable table;
  for (size_t i = 1; i < lines.size(); ++i) {
    std::vector<absl::string_view> fields =
        absl::StrSplit(absl::StripTrailingAsciiWhitespace(lines[i]), ',');
    if (fields.size() != 5) {
      return absl::InvalidArgumentError(
          absl::StrCat("CSV line ", i + 1, ": expected 5 fields"));
    }
    CurveRow row;
    row.scheme = std::string(fields[0]);
    if (!absl::SimpleAtoi(fields[1], &row.step)) {
      return absl::InvalidArgumentError(
          absl::StrCat("CSV line ", i + 1, ": bad step"));
    }
    TSDP_ASSIGN_OR_RETURN(row.epsilon, ParseDoubleField(fields[2]));
    TSDP_ASSIGN_OR_RETURN(row.delta, ParseDoubleField(fields[3]));
    row.bound_kind = std::string(fields[4]);
    table.rows.push_back(std::move(row));
  }
  return table;
}

namespace {

nlohmann::json NumberToJson(double x) {
  if (std::isfinite(x)) return x;
  return FormatDouble(x);
}

absl::StatusOr<double> NumberFromJson(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return ParseDoubleField(j.get<std::string>());
  return absl::InvalidArgumentError("expected a number");
}

}  // namespace

std::string ToJson(const CurveTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const CurveRow& row : table.rows) {
    rows.push_back({{"scheme", row.scheme},
                    {"step", row.step},
                    {"epsilon", NumberToJson(row.epsilon)},
                    {"delta", NumberToJson(row.delta)},
                    {"bound_kind", row.bound_kind}});
  }
  return nlohmann::json{{"rows", rows}}.dump(2) + "\n";
}

absl::StatusOr<CurveTable> ParseJson(absl::string_view text) {
  nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("rows") ||
      !doc["rows"].is_array()) {
    return absl::InvalidArgumentError("expected an object with a rows array");
  }
  CurveTable table;
  for (const nlohmann::json& j : doc["rows"]) {
    if (!j.is_object() || !j.contains("scheme") || !j.contains("step") ||
        !j.contains("epsilon") || !j.contains("delta") ||
        !j.contains("bound_kind")) {
      return absl::InvalidArgumentError("row is missing a field");
    }
    CurveRow row;
    row.scheme = j["scheme"].get<std::string>();
    row.step = j["step"].get<int64_t>();
    TSDP_ASSIGN_OR_RETURN(row.epsilon, NumberFromJson(j["epsilon"]));
    TSDP_ASSIGN_OR_RETURN(row.delta, NumberFromJson(j["delta"]));
    row.bound_kind = j["bound_kind"].get<std::string>();
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace tsdp
