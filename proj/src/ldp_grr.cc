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

#include "pbdp/ldp_grr.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "pbdp/status_macros.h"

namespace pbdp {
namespace {

absl::Status CheckValue(const GrrSpec& spec, int value) {
  if (value < 0 || value >= spec.domain_size) {
    return absl::OutOfRangeError(absl::StrFormat(
        "value %d outside domain [0, %d)", value, spec.domain_size));
  }
  return absl::OkStatus();
}

absl::Status CheckPartition(const GrrSpec& spec) {
  if (spec.region_map != RegionMapKind::kPartition) {
    return absl::InvalidArgumentError(
        "category estimation needs the partition region map");
  }
  return absl::OkStatus();
}

absl::Status CheckCounts(const GrrSpec& spec,
                         const std::vector<int64_t>& counts) {
  if (static_cast<int>(counts.size()) != spec.domain_size) {
    return absl::InvalidArgumentError("count vector must cover the domain");
  }
  for (int64_t c : counts) {
    if (c < 0) return absl::InvalidArgumentError("negative report count");
  }
  return absl::OkStatus();
}

int64_t Total(const std::vector<int64_t>& counts) {
  int64_t n = 0;
  for (int64_t c : counts) n += c;
  return n;
}

// Splits `m` items uniformly over cells [first, first + cells) of `out`.
void SpreadUniform(int64_t m, int first, int cells, std::vector<int64_t>& out,
                   std::mt19937_64& engine) {
  for (int i = 0; i < cells - 1 && m > 0; ++i) {
    std::binomial_distribution<int64_t> split(m, 1.0 / (cells - i));
    const int64_t x = split(engine);
    out[first + i] += x;
    m -= x;
  }
  if (m > 0) out[first + cells - 1] += m;
}

}  // namespace

absl::string_view RegionMapName(RegionMapKind kind) {
  return kind == RegionMapKind::kPartition ? "partition" : "sliding";
}

absl::StatusOr<RegionMapKind> ParseRegionMap(absl::string_view name) {
  if (name == "partition") return RegionMapKind::kPartition;
  if (name == "sliding") return RegionMapKind::kSliding;
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown region map '%s'", name));
}

absl::StatusOr<GrrSpec> GrrParams(int domain_size, int region_size,
                                  double eps, double eps0,
                                  RegionMapKind region_map) {
  if (domain_size < 2) {
    return absl::InvalidArgumentError("domain needs at least two values");
  }
  if (region_size < 1 || region_size > domain_size) {
    return absl::InvalidArgumentError("region size must lie in [1, |X|]");
  }
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    return absl::InvalidArgumentError("eps must be positive and finite");
  }
  if (!(eps0 >= 0.0 && eps0 <= eps)) {
    return absl::OutOfRangeError("eps0 must lie in [0, eps]");
  }
  if (region_map == RegionMapKind::kPartition &&
      domain_size % region_size != 0) {
    return absl::InvalidArgumentError(
        "partition map needs |X| to be a multiple of |S|");
  }
  GrrSpec spec;
  spec.domain_size = domain_size;
  spec.region_size = region_size;
  spec.eps = eps;
  spec.eps0 = eps0;
  spec.region_map = region_map;
  const double e = std::exp(eps);
  const double e_s = std::exp(eps - eps0);
  const double d = e + ((region_size - 1) * e_s + (domain_size - region_size));
  spec.p = e / d;
  spec.p_s = e_s / d;
  spec.p_bar = 1.0 / d;
  return spec;
}

double Confidence(const GrrSpec& spec) {
  return spec.p + (spec.region_size - 1) * spec.p_s;
}

absl::StatusOr<ValueWindow> RegionOf(const GrrSpec& spec, int value) {
  PBDP_RETURN_IF_ERROR(CheckValue(spec, value));
  const int s = spec.region_size;
  int first;
  if (spec.region_map == RegionMapKind::kPartition) {
    first = value / s * s;
  } else {
    first = std::clamp(value - (s - 1) / 2, 0, spec.domain_size - s);
  }
  return ValueWindow{first, first + s - 1};
}

uint64_t DeriveSeed(uint64_t seed, uint64_t index) {
  // splitmix64 finalizer over the combined state.
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

absl::StatusOr<int> Perturb(const GrrSpec& spec, int value,
                            std::mt19937_64& engine) {
  PBDP_ASSIGN_OR_RETURN(const ValueWindow w, RegionOf(spec, value));
  const int s = spec.region_size;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double u = uniform(engine);
  if (u < spec.p) return value;
  if (u < Confidence(spec) && s > 1) {
    std::uniform_int_distribution<int> pick(0, s - 2);
    const int j = w.first + pick(engine);
    return j >= value ? j + 1 : j;
  }
  const int outside = spec.domain_size - s;
  if (outside == 0) return value;
  std::uniform_int_distribution<int> pick(0, outside - 1);
  const int j = pick(engine);
  return j < w.first ? j : j + s;
}

absl::StatusOr<int> Perturb(const GrrSpec& spec, int value, uint64_t seed) {
  std::mt19937_64 engine(seed);
  return Perturb(spec, value, engine);
}

absl::StatusOr<std::vector<int>> PerturbAll(const GrrSpec& spec,
                                            const std::vector<int>& values,
                                            uint64_t seed) {
  std::vector<int> reports(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    PBDP_ASSIGN_OR_RETURN(reports[i],
                          Perturb(spec, values[i], DeriveSeed(seed, i)));
  }
  return reports;
}

absl::StatusOr<std::vector<std::vector<double>>> TransitionMatrix(
    const GrrSpec& spec) {
  const int n = spec.domain_size;
  std::vector<std::vector<double>> m(n, std::vector<double>(n, spec.p_bar));
  for (int x = 0; x < n; ++x) {
    PBDP_ASSIGN_OR_RETURN(const ValueWindow w, RegionOf(spec, x));
    for (int y = w.first; y <= w.last; ++y) m[x][y] = spec.p_s;
    m[x][x] = spec.p;
  }
  return m;
}

absl::StatusOr<double> VerifyLdp(const GrrSpec& spec) {
  PBDP_ASSIGN_OR_RETURN(const auto m, TransitionMatrix(spec));
  double worst = 0.0;
  for (int y = 0; y < spec.domain_size; ++y) {
    double hi = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    for (int x = 0; x < spec.domain_size; ++x) {
      hi = std::max(hi, m[x][y]);
      lo = std::min(lo, m[x][y]);
    }
    worst = std::max(worst, hi / lo);
  }
  return worst;
}

absl::StatusOr<std::vector<int64_t>> CountReports(
    const GrrSpec& spec, const std::vector<int>& reports) {
  std::vector<int64_t> counts(spec.domain_size, 0);
  for (int y : reports) {
    PBDP_RETURN_IF_ERROR(CheckValue(spec, y));
    ++counts[y];
  }
  return counts;
}

absl::StatusOr<double> EstimateCategory(const GrrSpec& spec,
                                        const std::vector<int64_t>& counts,
                                        int category) {
  PBDP_RETURN_IF_ERROR(CheckPartition(spec));
  PBDP_RETURN_IF_ERROR(CheckCounts(spec, counts));
  const int s = spec.region_size;
  if (category < 0 || category >= spec.domain_size / s) {
    return absl::OutOfRangeError("category index out of range");
  }
  const int64_t n = Total(counts);
  if (n == 0) return absl::InvalidArgumentError("no reports");
  const double denom = Confidence(spec) - s * spec.p_bar;
  if (!(std::abs(denom) > 1e-300)) {
    return absl::FailedPreconditionError(
        "category estimator is degenerate for these probabilities");
  }
  int64_t in_category = 0;
  for (int y = category * s; y < (category + 1) * s; ++y) {
    in_category += counts[y];
  }
  return (in_category - static_cast<double>(n) * s * spec.p_bar) / denom;
}

absl::StatusOr<double> EstimateValue(const GrrSpec& spec,
                                     const std::vector<int64_t>& counts,
                                     double f_hat_category, int value) {
  PBDP_RETURN_IF_ERROR(CheckCounts(spec, counts));
  PBDP_RETURN_IF_ERROR(CheckValue(spec, value));
  if (spec.p == spec.p_s) {
    return absl::FailedPreconditionError(
        "values inside a uniformly boosted region are indistinguishable "
        "(eps0 = 0)");
  }
  const double n = static_cast<double>(Total(counts));
  return (counts[value] - f_hat_category * (spec.p_s - spec.p_bar) -
          n * spec.p_bar) /
         (spec.p - spec.p_s);
}

absl::StatusOr<FrequencyReport> EstimateFrequencies(
    const GrrSpec& spec, const std::vector<int64_t>& counts) {
  PBDP_RETURN_IF_ERROR(CheckPartition(spec));
  PBDP_RETURN_IF_ERROR(CheckCounts(spec, counts));
  FrequencyReport report;
  report.n_users = Total(counts);
  report.value_counts = counts;
  const int categories = spec.domain_size / spec.region_size;
  report.f_hat_S.resize(categories);
  for (int c = 0; c < categories; ++c) {
    PBDP_ASSIGN_OR_RETURN(report.f_hat_S[c],
                          EstimateCategory(spec, counts, c));
  }
  if (spec.p != spec.p_s) {
    report.f_hat_x.resize(spec.domain_size);
    for (int x = 0; x < spec.domain_size; ++x) {
      PBDP_ASSIGN_OR_RETURN(
          report.f_hat_x[x],
          EstimateValue(spec, counts, report.f_hat_S[x / spec.region_size], x));
    }
  }
  return report;
}

absl::StatusOr<std::vector<int64_t>> PerturbCounts(
    const GrrSpec& spec, const std::vector<int64_t>& true_counts,
    std::mt19937_64& engine) {
  PBDP_RETURN_IF_ERROR(CheckCounts(spec, true_counts));
  const int s = spec.region_size;
  const int outside = spec.domain_size - s;
  const double p_in_other = (s - 1) * spec.p_s;
  const double p_moved = 1.0 - spec.p;
  std::vector<int64_t> out(spec.domain_size, 0);
  std::vector<int64_t> scratch;
  for (int x = 0; x < spec.domain_size; ++x) {
    const int64_t c = true_counts[x];
    if (c == 0) continue;
    PBDP_ASSIGN_OR_RETURN(const ValueWindow w, RegionOf(spec, x));
    std::binomial_distribution<int64_t> keep(c, spec.p);
    const int64_t kept = keep(engine);
    out[x] += kept;
    const int64_t moved = c - kept;
    if (moved == 0) continue;
    int64_t in_region = 0;
    if (s > 1 && outside > 0) {
      std::binomial_distribution<int64_t> split(
          moved, std::min(1.0, p_in_other / p_moved));
      in_region = split(engine);
    } else if (s > 1) {
      in_region = moved;
    }
    const int64_t out_region = moved - in_region;
    if (in_region > 0) {
      // Other members of the window, skipping x itself.
      scratch.assign(s - 1, 0);
      SpreadUniform(in_region, 0, s - 1, scratch, engine);
      for (int j = 0; j < s - 1; ++j) {
        const int y = w.first + j;
        out[y >= x ? y + 1 : y] += scratch[j];
      }
    }
    if (out_region > 0) {
      scratch.assign(outside, 0);
      SpreadUniform(out_region, 0, outside, scratch, engine);
      for (int j = 0; j < outside; ++j) {
        out[j < w.first ? j : j + s] += scratch[j];
      }
    }
  }
  return out;
}

absl::StatusOr<std::vector<MseRow>> MseSweep(
    const std::vector<int>& values, int domain_size, int region_size,
    double eps, const std::vector<double>& eps0_grid, int trials,
    uint64_t seed) {
  if (values.empty()) return absl::InvalidArgumentError("empty dataset");
  if (trials < 1) return absl::InvalidArgumentError("trials must be >= 1");
  std::vector<int64_t> truth(domain_size, 0);
  for (int v : values) {
    if (v < 0 || v >= domain_size) {
      return absl::OutOfRangeError("dataset value outside the domain");
    }
    ++truth[v];
  }
  const double n = static_cast<double>(values.size());
  const int categories = domain_size / std::max(region_size, 1);
  std::vector<double> truth_category(categories, 0.0);
  for (int x = 0; x < domain_size; ++x) {
    if (x / region_size < categories) {
      truth_category[x / region_size] += truth[x];
    }
  }
  std::vector<MseRow> rows;
  rows.reserve(eps0_grid.size());
  for (size_t g = 0; g < eps0_grid.size(); ++g) {
    PBDP_ASSIGN_OR_RETURN(
        const GrrSpec spec,
        GrrParams(domain_size, region_size, eps, eps0_grid[g]));
    double se_category = 0.0;
    double se_value = 0.0;
    for (int t = 0; t < trials; ++t) {
      std::mt19937_64 engine(DeriveSeed(seed, g * trials + t));
      PBDP_ASSIGN_OR_RETURN(const auto counts,
                            PerturbCounts(spec, truth, engine));
      PBDP_ASSIGN_OR_RETURN(const FrequencyReport report,
                            EstimateFrequencies(spec, counts));
      for (int c = 0; c < categories; ++c) {
        const double err = (report.f_hat_S[c] - truth_category[c]) / n;
        se_category += err * err;
      }
      for (size_t x = 0; x < report.f_hat_x.size(); ++x) {
        const double err = (report.f_hat_x[x] - truth[x]) / n;
        se_value += err * err;
      }
    }
    MseRow row;
    row.eps0 = eps0_grid[g];
    row.mse_category = se_category / (static_cast<double>(trials) * categories);
    row.mse_value = spec.p == spec.p_s
                        ? std::numeric_limits<double>::infinity()
                        : se_value / (static_cast<double>(trials) * domain_size);
    rows.push_back(row);
  }
  return rows;
}

absl::StatusOr<AgeData> LoadAdultAges(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(absl::StrFormat("cannot read '%s'", path));
  }
  AgeData data;
  std::string line;
  int age_column = 0;
  bool first_line = true;
  while (std::getline(in, line)) {
    const absl::string_view trimmed = absl::StripAsciiWhitespace(line);
    if (trimmed.empty()) continue;
    std::vector<absl::string_view> fields = absl::StrSplit(trimmed, ',');
    for (auto& f : fields) f = absl::StripAsciiWhitespace(f);
    if (first_line) {
      first_line = false;
      auto it = std::find(fields.begin(), fields.end(), "age");
      if (it != fields.end()) {
        age_column = static_cast<int>(it - fields.begin());
        continue;
      }
    }
    int age = 0;
    const bool missing =
        std::find(fields.begin(), fields.end(), "?") != fields.end();
    if (missing || static_cast<int>(fields.size()) <= age_column ||
        !absl::SimpleAtoi(fields[age_column], &age)) {
      ++data.malformed_rows;
      continue;
    }
    data.ages.push_back(std::clamp(age, kMinAge, kMaxAge));
  }
  if (data.ages.empty()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("no age rows parsed from '%s'", path));
  }
  return data;
}

std::vector<int> AgesToValues(const std::vector<int>& ages) {
  std::vector<int> values;
  values.reserve(ages.size());
  for (int a : ages) values.push_back(std::clamp(a, kMinAge, kMaxAge) - kMinAge);
  return values;
}

std::vector<int> SyntheticAdultAges(int n, uint64_t seed) {
  std::mt19937_64 engine(seed);
  // Shifted gamma matching the census age mean and spread.
  std::gamma_distribution<double> gamma(2.52, 8.56);
  std::vector<int> ages;
  ages.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double a = 17.0 + gamma(engine);
    ages.push_back(std::clamp(static_cast<int>(std::lround(a)), 17, 90));
  }
  return ages;
}

}  // namespace pbdp
