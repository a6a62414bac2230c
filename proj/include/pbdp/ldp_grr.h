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
// Boosted generalized randomized response for local DP. Values are domain
// indices 0..domain_size-1; each value has a region S(x) of region_size
// values that receive a boosted reporting probability.

#ifndef PBDP_LDP_GRR_H_
#define PBDP_LDP_GRR_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace pbdp {

// kPartition: consecutive blocks of region_size values (domain_size must be a
// multiple). kSliding: a window of region_size values around x, shifted
// inward at the domain edges so its size never changes.
enum class RegionMapKind { kPartition, kSliding };

absl::string_view RegionMapName(RegionMapKind kind);
absl::StatusOr<RegionMapKind> ParseRegionMap(absl::string_view name);

struct GrrSpec {
  int domain_size = 0;
  int region_size = 0;
  double eps = 0.0;
  double eps0 = 0.0;
  double p = 0.0;      // report the true value
  double p_s = 0.0;    // report a given other member of S(x)
  double p_bar = 0.0;  // report a given value outside S(x)
  RegionMapKind region_map = RegionMapKind::kPartition;
};

absl::StatusOr<GrrSpec> GrrParams(
    int domain_size, int region_size, double eps, double eps0,
    RegionMapKind region_map = RegionMapKind::kPartition);

// Probability that the report lands in S(x).
double Confidence(const GrrSpec& spec);

struct ValueWindow {
  int first = 0;  // inclusive
  int last = 0;   // inclusive
};

absl::StatusOr<ValueWindow> RegionOf(const GrrSpec& spec, int value);

// Deterministic per-user seed from a run seed and the user's index.
uint64_t DeriveSeed(uint64_t seed, uint64_t index);

absl::StatusOr<int> Perturb(const GrrSpec& spec, int value,
                            std::mt19937_64& engine);
absl::StatusOr<int> Perturb(const GrrSpec& spec, int value, uint64_t seed);
// User i is perturbed with DeriveSeed(seed, i).
absl::StatusOr<std::vector<int>> PerturbAll(const GrrSpec& spec,
                                            const std::vector<int>& values,
                                            uint64_t seed);

// Pr[report = y | value = x], row x, column y.
absl::StatusOr<std::vector<std::vector<double>>> TransitionMatrix(
    const GrrSpec& spec);

// Largest Pr[y|x] / Pr[y|x'] over all inputs and outputs.
absl::StatusOr<double> VerifyLdp(const GrrSpec& spec);

// Report histogram over the domain.
absl::StatusOr<std::vector<int64_t>> CountReports(
    const GrrSpec& spec, const std::vector<int>& reports);

// Unbiased estimate of the number of users whose value lies in the region
// (partition block) with index `category`.
absl::StatusOr<double> EstimateCategory(const GrrSpec& spec,
                                        const std::vector<int64_t>& counts,
                                        int category);
// Unbiased estimate of the number of users holding `value`, given the
// estimate for its category.
absl::StatusOr<double> EstimateValue(const GrrSpec& spec,
                                     const std::vector<int64_t>& counts,
                                     double f_hat_category, int value);

struct FrequencyReport {
  int64_t n_users = 0;
  std::vector<int64_t> value_counts;
  std::vector<double> f_hat_S;  // per category
  std::vector<double> f_hat_x;  // per value; empty when p = p_s
};

absl::StatusOr<FrequencyReport> EstimateFrequencies(
    const GrrSpec& spec, const std::vector<int64_t>& counts);

// Report histogram for users with the given true histogram, drawn through
// binomial splits. Equal in law to perturbing every user independently.
absl::StatusOr<std::vector<int64_t>> PerturbCounts(
    const GrrSpec& spec, const std::vector<int64_t>& true_counts,
    std::mt19937_64& engine);

struct MseRow {
  double eps0 = 0.0;
  double mse_category = 0.0;  // mean squared error of category frequencies
  double mse_value = 0.0;     // same for values; +inf when p = p_s
};

// Frequencies are normalized by the number of users before squaring.
absl::StatusOr<std::vector<MseRow>> MseSweep(
    const std::vector<int>& values, int domain_size, int region_size,
    double eps, const std::vector<double>& eps0_grid, int trials,
    uint64_t seed);

struct AgeData {
  std::vector<int> ages;
  int64_t malformed_rows = 0;
};

inline constexpr int kMinAge = 10;
inline constexpr int kMaxAge = 100;
// Ages map to value age - kMinAge. The 91 ages are padded to 100 values so
// that regions of 5 or 10 partition the domain.
inline constexpr int kAgeDomainSize = 100;

// Domain values for a list of clamped ages.
std::vector<int> AgesToValues(const std::vector<int>& ages);

// Reads ages from a headerless UCI adult file (age in column 0, '?' marks
// missing fields) or a headered CSV with an `age` column. Ages are clamped
// to [kMinAge, kMaxAge].
absl::StatusOr<AgeData> LoadAdultAges(const std::string& path);

// Adult-like ages (right-skewed, mean ~38.6, sd ~13.6) for runs without the
// census file.
std::vector<int> SyntheticAdultAges(int n, uint64_t seed);

}  // namespace pbdp

#endif  // PBDP_LDP_GRR_H_
