// Copyright 2026 The PBDP Authors.
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


#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "pbdp/config.h"
#include "tools/commands.h"

namespace {

using pbdp::FlatConfig;
using pbdp::cli::CommandResult;

absl::Status WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  return absl::OkStatus();
}

absl::StatusOr<FlatConfig> BuildConfig(
    const std::string& path, const pbdp::cli::GlobalFlags& flags,
    const std::vector<std::string>& overrides) {
  FlatConfig config;
  if (!path.empty()) {
    absl::StatusOr<FlatConfig> loaded = FlatConfig::Load(path);
    if (!loaded.ok()) return loaded.status();
    config = *std::move(loaded);
  }
  for (const std::string& o : overrides) {
    if (absl::Status s = pbdp::cli::ApplyOverride(o, config); !s.ok()) return s;
  }
  if (absl::Status s = pbdp::cli::ApplyGlobalFlags(flags, config); !s.ok()) {
    return s;
  }
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probabilistic boosting for differential privacy"};
  app.require_subcommand(1);
  // Global options may also follow the subcommand name.
  app.fallthrough();

  std::string config_path;
  std::string out_path;
  std::string gnuplot_path;
  std::vector<std::string> overrides;
  pbdp::cli::GlobalFlags flags;
  uint64_t seed = 0;
  std::string mode;
  double delta = 0.0;
  double alpha = 0.0;

  app.add_option("--config", config_path, "INI config file")
      ->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "Write output here instead of stdout");
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed");
  auto* mode_opt = app.add_option("--mode", mode, "Accounting mode")
                       ->check(CLI::IsMember({"dp", "rdp"}));
  auto* delta_opt = app.add_option("--delta", delta, "Target delta");
  auto* alpha_opt = app.add_option("--alpha", alpha, "Renyi order");
  app.add_option("--set", overrides, "Config override key=value");
  app.add_option("--gnuplot", gnuplot_path,
                 "Also write a gnuplot script (sweep, compose, feasibility, "
                 "ldp; needs --out)");

  std::string check;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"plan", "Choose eps0 and q; print the plan record"},
      {"sweep", "Leakage against region width or rho"},
      {"compose", "Leakage under repeated composition"},
      {"feasibility", "Boosted vs hard-bounded profiles and extra leakage"},
      {"bench", "Sampler timing"},
      {"ldp", "Local-DP MSE sweep over eps0"},
      {"sample", "Draw from a planned mechanism"},
      {"verify", "Check utility, privacy, or LDP of a plan"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    if (name == "verify") {
      sub->add_option("--check", check, "utility | privacy | ldp")
          ->required()
          ->check(CLI::IsMember({"utility", "privacy", "ldp"}));
    }
  }
  CLI11_PARSE(app, argc, argv);

  if (*seed_opt) flags.seed = seed;
  if (*mode_opt) flags.mode = mode;
  if (*delta_opt) flags.delta = delta;
  if (*alpha_opt) flags.alpha = alpha;

  absl::StatusOr<FlatConfig> config =
      BuildConfig(config_path, flags, overrides);
  if (!config.ok()) {
    std::cerr << "error: " << config.status().message() << "\n";
    return 2;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  absl::StatusOr<CommandResult> result;
  if (name == "plan") {
    result = pbdp::cli::RunPlan(*config);
  } else if (name == "sweep") {
    result = pbdp::cli::RunSweep(*config);
  } else if (name == "compose") {
    result = pbdp::cli::RunCompose(*config);
  } else if (name == "feasibility") {
    result = pbdp::cli::RunFeasibility(*config);
  } else if (name == "bench") {
    result = pbdp::cli::RunBench(*config);
  } else if (name == "ldp") {
    result = pbdp::cli::RunLdp(*config);
  } else if (name == "sample") {
    result = pbdp::cli::RunSample(*config);
  } else {
    absl::StatusOr<pbdp::cli::VerifyCheck> kind =
        pbdp::cli::ParseVerifyCheck(check);
    result = kind.ok() ? pbdp::cli::RunVerify(*config, *kind)
                       : absl::StatusOr<CommandResult>(kind.status());
  }
  if (!result.ok()) {
    std::cerr << "error: " << result.status().message() << "\n";
    return 2;
  }

  if (out_path.empty()) {
    std::cout << result->data;
  } else if (absl::Status s = WriteFile(out_path, result->data); !s.ok()) {
    std::cerr << "error: " << s.message() << "\n";
    return 2;
  }
  if (!gnuplot_path.empty()) {
    if (!result->table || out_path.empty()) {
      std::cerr << "error: --gnuplot needs a CSV command and --out\n";
      return 2;
    }
    absl::Status s = WriteFile(
        gnuplot_path, pbdp::cli::GnuplotScript(*result->table, out_path, name));
    if (!s.ok()) {
      std::cerr << "error: " << s.message() << "\n";
      return 2;
    }
  }
  if (!result->report.empty()) std::cerr << result->report << "\n";
  return result->passed ? 0 : 1;
}
