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

#include "pbdp/config.h"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "boost/property_tree/ini_parser.hpp"
#include "boost/property_tree/ptree.hpp"
#include "pbdp/kernels.h"
#include "pbdp/pb_mech.h"
#include "pbdp/status_macros.h"

namespace pbdp {
namespace {

absl::Status Missing(absl::string_view key) {
  return absl::NotFoundError(absl::StrCat("missing config key '", key, "'"));
}

absl::Status BadValue(absl::string_view key, absl::string_view value) {
  return absl::InvalidArgumentError(
      absl::StrCat("config key '", key, "' has invalid value '", value, "'"));
}

std::string FormatDouble(double v) { return absl::StrFormat("%.17g", v); }

}  // namespace

absl::StatusOr<FlatConfig> FlatConfig::Parse(absl::string_view text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "config line %d: %s", static_cast<int>(e.line()), e.message()));
  }
  FlatConfig config;
  auto add = [&config](const std::string& key,
                       const std::string& value) -> absl::Status {
    if (!config.values_.emplace(key, value).second) {
      return absl::InvalidArgumentError(
          absl::StrFormat("duplicate config key '%s'", key));
    }
    return absl::OkStatus();
  };
  // Sections flatten into dotted keys, so `[region] tau = 1` is region.tau.
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      PBDP_RETURN_IF_ERROR(add(name, node.data()));
      continue;
    }
    for (const auto& [key, leaf] : node) {
      PBDP_RETURN_IF_ERROR(add(absl::StrCat(name, ".", key), leaf.data()));
    }
  }
  return config;
}

absl::StatusOr<FlatConfig> FlatConfig::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot read ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str());
}

bool FlatConfig::Has(absl::string_view key) const {
  return values_.find(key) != values_.end();
}

std::optional<std::string> FlatConfig::Get(absl::string_view key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

void FlatConfig::Set(absl::string_view key, absl::string_view value) {
  values_.insert_or_assign(std::string(key), std::string(value));
}

absl::StatusOr<std::string> FlatConfig::GetString(
    absl::string_view key, std::optional<std::string> fallback) const {
  if (auto v = Get(key)) return *v;
  if (fallback) return *fallback;
  return Missing(key);
}

absl::StatusOr<double> FlatConfig::GetDouble(
    absl::string_view key, std::optional<double> fallback) const {
  auto v = Get(key);
  if (!v) {
    if (fallback) return *fallback;
    return Missing(key);
  }
  double out;
  if (!absl::SimpleAtod(*v, &out)) return BadValue(key, *v);
  return out;
}

absl::StatusOr<int64_t> FlatConfig::GetInt(
    absl::string_view key, std::optional<int64_t> fallback) const {
  auto v = Get(key);
  if (!v) {
    if (fallback) return *fallback;
    return Missing(key);
  }
  int64_t out;
  if (!absl::SimpleAtoi(*v, &out)) return BadValue(key, *v);
  return out;
}

absl::StatusOr<bool> FlatConfig::GetBool(absl::string_view key,
                                         std::optional<bool> fallback) const {
  auto v = Get(key);
  if (!v) {
    if (fallback) return *fallback;
    return Missing(key);
  }
  bool out;
  if (!absl::SimpleAtob(*v, &out)) return BadValue(key, *v);
  return out;
}

absl::StatusOr<std::vector<double>> FlatConfig::GetDoubleList(
    absl::string_view key, std::optional<std::vector<double>> fallback) const {
  auto v = Get(key);
  if (!v) {
    if (fallback) return *fallback;
    return Missing(key);
  }
  std::vector<double> out;
  for (absl::string_view item : absl::StrSplit(*v, ',')) {
    item = absl::StripAsciiWhitespace(item);
    double d;
    if (!absl::SimpleAtod(item, &d)) return BadValue(key, *v);
    out.push_back(d);
  }
  return out;
}

std::string FlatConfig::Serialize() const {
  std::string out;
  for (const auto& [key, value] : values_) {
    absl::StrAppend(&out, key, " = ", value, "\n");
  }
  return out;
}

absl::StatusOr<KernelSpec> KernelSpecFromConfig(const FlatConfig& config) {
  KernelSpec k;
  PBDP_ASSIGN_OR_RETURN(const std::string family,
                        config.GetString("family", "gaussian"));
  PBDP_ASSIGN_OR_RETURN(k.family, ParseKernelFamily(family));
  PBDP_ASSIGN_OR_RETURN(const std::string calibration,
                        config.GetString("calibration", "explicit-scale"));
  PBDP_ASSIGN_OR_RETURN(k.calibration, ParseCalibration(calibration));
  PBDP_ASSIGN_OR_RETURN(k.sensitivity, config.GetDouble("sensitivity", 1.0));
  PBDP_ASSIGN_OR_RETURN(k.delta0, config.GetDouble("delta0", 0.0));
  PBDP_ASSIGN_OR_RETURN(k.eps0, config.GetDouble("eps0", 0.0));
  if (k.calibration == Calibration::kExplicitScale) {
    PBDP_ASSIGN_OR_RETURN(k.scale, config.GetDouble("scale"));
  } else {
    PBDP_ASSIGN_OR_RETURN(k.scale, config.GetDouble("scale", 1.0));
  }
  return CalibrateKernel(k);
}

void KernelSpecToConfig(const KernelSpec& k, FlatConfig& config) {
  config.Set("family", KernelFamilyName(k.family));
  config.Set("scale", FormatDouble(k.scale));
  config.Set("sensitivity", FormatDouble(k.sensitivity));
  config.Set("delta0", FormatDouble(k.delta0));
  config.Set("eps0", FormatDouble(k.eps0));
  config.Set("calibration", CalibrationName(k.calibration));
}

absl::StatusOr<RegionSpec> RegionSpecFromConfig(const FlatConfig& config) {
  RegionSpec r;
  PBDP_ASSIGN_OR_RETURN(const std::string kind,
                        config.GetString("region.kind", "absolute"));
  PBDP_ASSIGN_OR_RETURN(r.kind, ParseRegionKind(kind));
  PBDP_ASSIGN_OR_RETURN(r.theta, config.GetDouble("region.theta", 0.0));
  PBDP_ASSIGN_OR_RETURN(r.tau, config.GetDouble("region.tau", 0.0));
  PBDP_ASSIGN_OR_RETURN(r.tau_l, config.GetDouble("region.tau_l", 0.0));
  PBDP_ASSIGN_OR_RETURN(r.tau_u, config.GetDouble("region.tau_u", 0.0));
  PBDP_RETURN_IF_ERROR(ValidateRegion(r));
  return r;
}

void RegionSpecToConfig(const RegionSpec& r, FlatConfig& config) {
  config.Set("region.kind", RegionKindName(r.kind));
  config.Set("region.theta", FormatDouble(r.theta));
  config.Set("region.tau", FormatDouble(r.tau));
  config.Set("region.tau_l", FormatDouble(r.tau_l));
  config.Set("region.tau_u", FormatDouble(r.tau_u));
}

}  // namespace pbdp
