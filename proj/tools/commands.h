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

// Subcommands of the pbdp tool. Each one reads a FlatConfig (file keys
// merged with command-line overrides) and returns the data it would write.

#ifndef PBDP_TOOLS_COMMANDS_H_
#define PBDP_TOOLS_COMMANDS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "pbdp/accounting.h"
#include "pbdp/config.h"
#include "pbdp/planner.h"

namespace pbdp::cli {

// Comma-separated table with a header row and LF line endings.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string ToString() const;
};

// 12 significant digits; infinities print as "inf".
std::string FormatCell(double v);

struct CommandResult {
  std::optional<CsvTable> table;  // set by the CSV-producing commands
  std::string data;    // CSV, record, or sample lines
  std::string report;  // human-readable summary
  bool passed = true;  // verify only: false on a failed check
};

// Global flags override the matching config keys.
struct GlobalFlags {
  std::optional<uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<double> delta;
  std::optional<double> alpha;
};
absl::Status ApplyGlobalFlags(const GlobalFlags& flags, FlatConfig& config);
// Applies one "key=value" override.
absl::Status ApplyOverride(absl::string_view assignment, FlatConfig& config);

// Shared readers. mode: dp | rdp (default dp); delta default 1e-5; alpha
// default 2.
absl::StatusOr<PrivacyMode> ReadMode(const FlatConfig& config);
absl::StatusOr<PlanRequest> ReadPlanRequest(const FlatConfig& config);

// Region of total width `width` at its narrowest answer: absolute and
// relative use tau = width / 2, fixed uses [-width / 2, width / 2].
RegionSpec RegionForWidth(RegionKind kind, double width, double theta);

absl::StatusOr<CommandResult> RunPlan(const FlatConfig& config);
absl::StatusOr<CommandResult> RunSweep(const FlatConfig& config);
absl::StatusOr<CommandResult> RunCompose(const FlatConfig& config);
absl::StatusOr<CommandResult> RunFeasibility(const FlatConfig& config);
absl::StatusOr<CommandResult> RunBench(const FlatConfig& config);
absl::StatusOr<CommandResult> RunLdp(const FlatConfig& config);
absl::StatusOr<CommandResult> RunSample(const FlatConfig& config);

enum class VerifyCheck { kUtility, kPrivacy, kLdp };
absl::StatusOr<VerifyCheck> ParseVerifyCheck(absl::string_view name);
absl::StatusOr<CommandResult> RunVerify(const FlatConfig& config,
                                        VerifyCheck check);

// Hard-bounded (q = 1) comparator for a fixed region: delta(eps) between
// the kernel truncated to the region and renormalized, for answers qx and
// qx + sensitivity, maximized over answers on a grid across the region and
// over both orders. Integrated on a uniform grid of `points` nodes.
double BoundedProfile(const KernelSpec& k, const RegionSpec& fixed_region,
                      double eps, int points = 4001);

// gnuplot script drawing every numeric column of `table` against the first.
std::string GnuplotScript(const CsvTable& table, absl::string_view csv_path,
                          absl::string_view title);

}  // namespace pbdp::cli

#endif  // PBDP_TOOLS_COMMANDS_H_
