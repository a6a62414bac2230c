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
// Flat `key = value` configuration files in INI syntax. Lines starting with
// '#' or ';' are comments, keys may appear once, and `[section]` headers
// prefix the keys below them with "section.".

#ifndef PBDP_CONFIG_H_
#define PBDP_CONFIG_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "pbdp/kernels.h"
#include "pbdp/pb_mech.h"

namespace pbdp {

class FlatConfig {
 public:
  static absl::StatusOr<FlatConfig> Parse(absl::string_view text);
  static absl::StatusOr<FlatConfig> Load(const std::string& path);

  bool Has(absl::string_view key) const;
  std::optional<std::string> Get(absl::string_view key) const;
  void Set(absl::string_view key, absl::string_view value);

  // Typed getters return `fallback` for absent keys, or NotFound when no
  // fallback is given.
  absl::StatusOr<std::string> GetString(
      absl::string_view key,
      std::optional<std::string> fallback = std::nullopt) const;
  absl::StatusOr<double> GetDouble(
      absl::string_view key, std::optional<double> fallback = std::nullopt) const;
  absl::StatusOr<int64_t> GetInt(
      absl::string_view key,
      std::optional<int64_t> fallback = std::nullopt) const;
  absl::StatusOr<bool> GetBool(absl::string_view key,
                               std::optional<bool> fallback = std::nullopt) const;
  // Comma-separated list.
  absl::StatusOr<std::vector<double>> GetDoubleList(
      absl::string_view key,
      std::optional<std::vector<double>> fallback = std::nullopt) const;

  // Sorted `key = value` lines.
  std::string Serialize() const;

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

// Keys: family, scale, sensitivity, delta0, eps0, calibration. Non-explicit
// calibrations resolve the scale.
absl::StatusOr<KernelSpec> KernelSpecFromConfig(const FlatConfig& config);
void KernelSpecToConfig(const KernelSpec& k, FlatConfig& config);

// Keys: region.kind, region.theta, region.tau, region.tau_l, region.tau_u.
absl::StatusOr<RegionSpec> RegionSpecFromConfig(const FlatConfig& config);
void RegionSpecToConfig(const RegionSpec& r, FlatConfig& config);

}  // namespace pbdp

#endif  // PBDP_CONFIG_H_
