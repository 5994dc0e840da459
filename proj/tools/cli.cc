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

#include "cli.h"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "tsdp/accountant.h"
#include "tsdp/calibration.h"
#include "tsdp/config_io.h"
#include "tsdp/status_macros.h"
#include "verify.h"

namespace tsdp {
namespace {

struct CommonFlags {
  std::string format = "csv";
  std::string out;
  double grid_spacing = 1e-3;
  double tail_tolerance = 1e-15;
  std::vector<std::string> sweeps;

  QuantizationOptions Quantization() const {
    QuantizationOptions options;
    options.grid_spacing = grid_spacing;
    options.tail_tolerance = tail_tolerance;
    return options;
  }
};

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kExitOk;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kUnimplemented:
      return kExitConfigError;
    case absl::StatusCode::kOutOfRange:
      return kExitUnattainable;
    default:
      return kExitFailure;
  }
}

absl::StatusOr<std::vector<double>> ParseList(absl::string_view flag,
                                              absl::string_view text) {
  std::vector<double> values;
  for (absl::string_view part : absl::StrSplit(text, ',', absl::SkipWhitespace())) {
    double v;
    if (!absl::SimpleAtod(absl::StripAsciiWhitespace(part), &v)) {
      return absl::InvalidArgumentError(
          absl::StrCat(flag, ": cannot parse '", part, "'"));
    }
    values.push_back(v);
  }
  if (values.empty()) {
    return absl::InvalidArgumentError(absl::StrCat(flag, ": list is empty"));
  }
  return values;
}

absl::StatusOr<std::vector<int64_t>> ParseCounts(absl::string_view flag,
                                                 absl::string_view text) {
  TSDP_ASSIGN_OR_RETURN(auto values, ParseList(flag, text));
  std::vector<int64_t> counts;
  for (double v : values) {
    if (v < 1 || v != std::floor(v)) {
      return absl::InvalidArgumentError(
          absl::StrCat(flag, ": expected positive integers"));
    }
    counts.push_back(static_cast<int64_t>(v));
  }
  return counts;
}

// 200 log-spaced alphas covering epsilon in [-7, 7] ln 10.
std::vector<double> DefaultAlphaGrid() {
  std::vector<double> grid;
  for (int i = 0; i < 200; ++i) grid.push_back(std::pow(10.0, -7 + 14.0 * i / 199));
  return grid;
}

// 61 log-spaced epsilons from 1e-3 to 1e3.
std::vector<double> DefaultEpsilonGrid() {
  std::vector<double> grid;
  for (int i = 0; i <= 60; ++i) grid.push_back(std::pow(10.0, -3 + 0.1 * i));
  return grid;
}

// Expands every `key=v1,v2` sweep into one config per combination.
absl::StatusOr<std::vector<RunConfig>> ExpandSweeps(
    const RunConfig& base, const std::vector<std::string>& sweeps) {
  std::vector<RunConfig> configs = {base};
  for (const std::string& sweep : sweeps) {
    const size_t eq = sweep.find('=');
    if (eq == std::string::npos) {
      return absl::InvalidArgumentError(
          absl::StrCat("--sweep: expected key=v1,v2,..., got '", sweep, "'"));
    }
    const std::string key = sweep.substr(0, eq);
    std::vector<std::string> values =
        absl::StrSplit(sweep.substr(eq + 1), ',', absl::SkipWhitespace());
    if (values.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("--sweep ", key, ": no values"));
    }
    std::vector<RunConfig> expanded;
    for (const RunConfig& config : configs) {
      for (const std::string& value : values) {
        RunConfig c = config;
        TSDP_RETURN_IF_ERROR(ApplyOverride(c, key, value));
        c.label = absl::StrCat(config.label, "[", key, "=", value, "]");
        expanded.push_back(std::move(c));
      }
    }
    configs = std::move(expanded);
  }
  return configs;
}

absl::StatusOr<std::vector<RunConfig>> LoadConfigs(
    const std::vector<std::string>& paths, const CommonFlags& flags) {
  std::vector<RunConfig> all;
  for (const std::string& path : paths) {
    TSDP_ASSIGN_OR_RETURN(auto base, LoadRunConfig(path));
    TSDP_ASSIGN_OR_RETURN(auto expanded, ExpandSweeps(base, flags.sweeps));
    for (RunConfig& c : expanded) all.push_back(std::move(c));
  }
  return all;
}

// Runs `task` for every config concurrently and concatenates the rows.
template <typename Task>
absl::StatusOr<CurveTable> RunAll(const std::vector<RunConfig>& configs,
                                  Task task) {
  std::vector<std::future<absl::StatusOr<std::vector<CurveRow>>>> futures;
  for (const RunConfig& config : configs) {
    futures.push_back(std::async(std::launch::async, task, std::cref(config)));
  }
  CurveTable table;
  absl::Status first_error;
  for (auto& future : futures) {
    absl::StatusOr<std::vector<CurveRow>> rows = future.get();
    if (!rows.ok()) {
      if (first_error.ok()) first_error = rows.status();
      continue;
    }
    for (CurveRow& row : *rows) table.rows.push_back(std::move(row));
  }
  if (!first_error.ok()) return first_error;
  table.Sort();
  return table;
}

absl::Status Emit(const std::string& text, const std::string& command,
                  const CommonFlags& flags, std::ostream& out) {
  std::filesystem::path path = flags.out;
  const char* dir = std::getenv("TSDP_OUTPUT_DIR");
  if (path.empty() && dir != nullptr && *dir != '\0') {
    path = absl::StrCat(command, ".", flags.format);
  }
  if (path.empty()) {
    out << text;
    return absl::OkStatus();
  }
  if (path.is_relative() && dir != nullptr && *dir != '\0') {
    path = std::filesystem::path(dir) / path;
  }
  std::ofstream file(path);
  if (!file) {
    return absl::InvalidArgumentError(
        absl::StrCat("--out: cannot write ", path.string()));
  }
  file << text;
  return absl::OkStatus();
}

absl::Status EmitTable(const CurveTable& table, const std::string& command,
                       const CommonFlags& flags, std::ostream& out) {
  return Emit(flags.format == "json" ? ToJson(table) : ToCsv(table), command,
              flags, out);
}

absl::Status RunProfile(const std::vector<std::string>& config_paths,
                        const std::string& alpha_text, bool alpha_given,
                        const CommonFlags& flags, std::ostream& out) {
  std::vector<double> alphas = DefaultAlphaGrid();
  if (alpha_given) {
    TSDP_ASSIGN_OR_RETURN(alphas, ParseList("--alpha", alpha_text));
    for (double a : alphas) {
      if (!(a > 0)) return absl::InvalidArgumentError("--alpha: must be > 0");
    }
  }
  TSDP_ASSIGN_OR_RETURN(auto configs, LoadConfigs(config_paths, flags));
  TSDP_ASSIGN_OR_RETURN(
      auto table,
      RunAll(configs, [&alphas](const RunConfig& config)
                 -> absl::StatusOr<std::vector<CurveRow>> {
        TSDP_ASSIGN_OR_RETURN(auto profile, BuildRunProfile(config));
        std::vector<CurveRow> rows;
        for (double alpha : alphas) {
          rows.push_back({config.label, 1, std::log(alpha),
                          profile.Evaluate(alpha),
                          std::string(BoundKindName(profile.bound_kind()))});
        }
        return rows;
      }));
  return EmitTable(table, "profile", flags, out);
}

// Composes each config `counts[i]` units, where a unit is one profile
// application or, with per_epoch, one epoch.
absl::Status RunCompose(const std::vector<std::string>& config_paths,
                        const std::vector<int64_t>& counts, bool per_epoch,
                        const std::vector<double>& epsilons,
                        const std::string& command, const CommonFlags& flags,
                        std::ostream& out) {
  TSDP_ASSIGN_OR_RETURN(auto configs, LoadConfigs(config_paths, flags));
  const QuantizationOptions options = flags.Quantization();
  TSDP_ASSIGN_OR_RETURN(
      auto table,
      RunAll(configs, [&](const RunConfig& config)
                 -> absl::StatusOr<std::vector<CurveRow>> {
        TSDP_ASSIGN_OR_RETURN(auto profile, BuildRunProfile(config));
        TSDP_ASSIGN_OR_RETURN(auto per_epoch_count,
                              CompositionsPerEpoch(config, profile));
        TSDP_ASSIGN_OR_RETURN(auto unit, Quantize(profile, options));
        std::vector<CurveRow> rows;
        for (int64_t count : counts) {
          const int64_t compositions =
              per_epoch ? count * per_epoch_count : count;
          TSDP_ASSIGN_OR_RETURN(
              auto pld, SelfCompose(unit, compositions, options.tail_tolerance));
          for (double eps : epsilons) {
            rows.push_back({config.label, count, eps, DeltaAtEpsilon(pld, eps),
                            std::string(BoundKindName(profile.bound_kind()))});
          }
        }
        return rows;
      }));
  return EmitTable(table, command, flags, out);
}

struct CalibrationRow {
  std::string label;
  CalibrationResult result;
  int64_t compositions = 0;
};

absl::StatusOr<CalibrationRow> CalibrateOne(const RunConfig& config,
                                            double epsilon, double delta,
                                            int64_t steps, int64_t epochs,
                                            const CommonFlags& flags) {
  if (config.family != SchemeFamily::kStructured) {
    return absl::InvalidArgumentError(
        "scheme: calibration needs a structured scheme");
  }
  int64_t compositions = steps;
  if (epochs > 0) {
    TSDP_ASSIGN_OR_RETURN(auto profile, BuildRunProfile(config));
    TSDP_ASSIGN_OR_RETURN(auto per_epoch, CompositionsPerEpoch(config, profile));
    compositions = epochs * per_epoch;
  }
  CalibrationOptions options;
  options.quantization = flags.Quantization();
  TSDP_ASSIGN_OR_RETURN(auto result,
                        CalibrateSigma(config.scheme, config.bound, epsilon,
                                       delta, compositions, options));
  return CalibrationRow{config.label, result, compositions};
}

absl::Status RunCalibrate(const std::vector<std::string>& config_paths,
                          double epsilon, double delta, int64_t steps,
                          int64_t epochs, const CommonFlags& flags,
                          std::ostream& out) {
  if ((steps > 0) == (epochs > 0)) {
    return absl::InvalidArgumentError(
        "give exactly one of --steps and --epochs");
  }
  TSDP_ASSIGN_OR_RETURN(auto configs, LoadConfigs(config_paths, flags));
  std::vector<std::future<absl::StatusOr<CalibrationRow>>> futures;
  for (const RunConfig& config : configs) {
    futures.push_back(std::async(std::launch::async, CalibrateOne,
                                 std::cref(config), epsilon, delta, steps,
                                 epochs, std::cref(flags)));
  }
  std::vector<CalibrationRow> rows;
  absl::Status first_error;
  for (auto& future : futures) {
    absl::StatusOr<CalibrationRow> row = future.get();
    if (!row.ok()) {
      if (first_error.ok()) first_error = row.status();
      continue;
    }
    rows.push_back(*std::move(row));
  }
  if (!first_error.ok()) return first_error;

  auto number = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
  };
  std::string text;
  if (flags.format == "json") {
    text = "{\n  \"rows\": [";
    for (size_t i = 0; i < rows.size(); ++i) {
      const CalibrationRow& r = rows[i];
      absl::StrAppend(&text, i == 0 ? "\n" : ",\n", "    {\"scheme\": \"",
                      r.label, "\", \"sigma\": ", number(r.result.sigma),
                      ", \"epsilon\": ", number(r.result.epsilon),
                      ", \"delta\": ", delta,
                      ", \"compositions\": ", r.compositions, "}");
    }
    absl::StrAppend(&text, "\n  ]\n}\n");
  } else {
    text = "scheme,sigma,epsilon,delta,compositions\n";
    for (const CalibrationRow& r : rows) {
      absl::StrAppend(&text, r.label, ",", number(r.result.sigma), ",",
                      number(r.result.epsilon), ",", delta, ",",
                      r.compositions, "\n");
    }
  }
  return Emit(text, "calibrate", flags, out);
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Privacy accounting for structured subsampling in time-series "
               "DP-SGD",
               "tsdp"};
  app.require_subcommand(1);
  CommonFlags flags;
  auto add_common = [&flags](CLI::App* sub) {
    sub->add_option("--format", flags.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", flags.out,
                    "Output file (relative paths resolve against "
                    "$TSDP_OUTPUT_DIR when set)");
    sub->add_option("--grid-spacing", flags.grid_spacing,
                    "Privacy-loss discretization interval")
        ->check(CLI::PositiveNumber);
    sub->add_option("--tail-tolerance", flags.tail_tolerance,
                    "Tail mass truncated per convolution");
    sub->add_option("--sweep", flags.sweeps,
                    "key=v1,v2,... overrides; repeat for a product sweep");
  };

  std::vector<std::string> configs;
  std::string alpha_text, steps_text = "1", epochs_text, eps_text;
  double target_eps = 0, target_delta = 0;
  int64_t cal_steps = 0, cal_epochs = 0;
  int64_t budget = 1'000'000'000;

  CLI::App* profile = app.add_subcommand("profile", "Evaluate a privacy profile");
  profile->add_option("--config", configs, "Scheme config file")->required();
  CLI::Option* alpha_opt =
      profile->add_option("--alpha", alpha_text, "Comma-separated alphas");
  add_common(profile);

  CLI::App* compose =
      app.add_subcommand("compose", "delta(epsilon) after self-composition");
  compose->add_option("--config", configs, "Scheme config file")->required();
  CLI::Option* steps_opt = compose->add_option(
      "--steps", steps_text, "Comma-separated numbers of profile applications");
  CLI::Option* compose_epochs = compose->add_option(
      "--epochs", epochs_text, "Comma-separated numbers of epochs");
  steps_opt->excludes(compose_epochs);
  compose->add_option("--epsilon", eps_text, "Comma-separated epsilons");
  add_common(compose);

  CLI::App* compare = app.add_subcommand(
      "compare", "delta(epsilon) of several configs at equal epoch counts");
  compare->add_option("--config", configs, "Scheme config files")->required();
  compare->add_option("--epochs", epochs_text, "Comma-separated epoch counts");
  compare->add_option("--epsilon", eps_text, "Comma-separated epsilons");
  add_common(compare);

  CLI::App* calibrate =
      app.add_subcommand("calibrate", "Find sigma for a target (epsilon, delta)");
  calibrate->add_option("--config", configs, "Scheme config file")
      ->required()
      ->expected(1);
  calibrate->add_option("--epsilon", target_eps, "Target epsilon")->required();
  calibrate->add_option("--delta", target_delta, "Target delta")->required();
  calibrate->add_option("--steps", cal_steps, "Profile applications");
  calibrate->add_option("--epochs", cal_epochs, "Epochs");
  add_common(calibrate);

  CLI::App* verify = app.add_subcommand("verify", "Run oracle cross-checks");
  verify->add_option("--budget", budget, "Largest enumeration size")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitConfigError;
  }

  absl::Status status;
  if (profile->parsed()) {
    status = RunProfile(configs, alpha_text, alpha_opt->count() > 0, flags, out);
  } else if (compose->parsed() || compare->parsed()) {
    const bool per_epoch = compare->parsed() || compose_epochs->count() > 0;
    const std::string counts_text =
        per_epoch ? (epochs_text.empty() ? "1" : epochs_text) : steps_text;
    absl::StatusOr<std::vector<int64_t>> counts =
        ParseCounts(per_epoch ? "--epochs" : "--steps", counts_text);
    absl::StatusOr<std::vector<double>> eps =
        eps_text.empty() ? DefaultEpsilonGrid() : ParseList("--epsilon", eps_text);
    if (!counts.ok()) {
      status = counts.status();
    } else if (!eps.ok()) {
      status = eps.status();
    } else {
      status = RunCompose(configs, *counts, per_epoch, *eps,
                          compare->parsed() ? "compare" : "compose", flags, out);
    }
  } else if (calibrate->parsed()) {
    status = RunCalibrate(configs, target_eps, target_delta, cal_steps,
                          cal_epochs, flags, out);
  } else if (verify->parsed()) {
    return RunVerification(budget, out) ? kExitOk : kExitVerifyFailed;
  }
  if (!status.ok()) {
    err << "error: " << status.message() << "\n";
    return ExitCodeFor(status);
  }
  return kExitOk;
}

}  // namespace tsdp
