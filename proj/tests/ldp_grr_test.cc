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

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "tests/support/oracles.h"

namespace pbdp {
namespace {

using ::pbdp::testing::TwoSampleKs;

// Probabilities straight from the defining ratios p/p_bar = e^eps and
// p/p_s = e^eps0 together with normalization.
struct Probs {
  double p, p_s, p_bar;
};
Probs FromRatios(int n, int s, double eps, double eps0) {
  const long double r = std::exp(static_cast<long double>(eps));
  const long double r0 = std::exp(static_cast<long double>(eps0));
  // p (1 + (s - 1)/r0 + (n - s)/r) = 1.
  const long double p = 1.0L / (1.0L + (s - 1) / r0 + (n - s) / r);
  return {static_cast<double>(p), static_cast<double>(p / r0),
          static_cast<double>(p / r)};
}

std::string WriteTemp(const std::string& name, const std::string& body) {
  const std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << body;
  return path;
}

TEST(GrrParamsTest, ThreeValueGrr) {
  const GrrSpec spec = *GrrParams(3, 1, std::log(3.0), std::log(3.0));
  EXPECT_NEAR(spec.p, 0.6, 1e-15);
  EXPECT_NEAR(spec.p_s, 0.2, 1e-15);
  EXPECT_NEAR(spec.p_bar, 0.2, 1e-15);
}

TEST(GrrParamsTest, AgeDomainWithoutBoostIsGrr) {
  const GrrSpec spec = *GrrParams(91, 10, 5, 5, RegionMapKind::kSliding);
  EXPECT_NEAR(spec.p, std::exp(5.0) / (std::exp(5.0) + 90), 1e-15);
  EXPECT_NEAR(spec.p, 0.62250, 5e-6);
}

TEST(GrrParamsTest, ZeroEps0BoostsTheWholeRegionEqually) {
  const double e = std::exp(2.0);
  const GrrSpec spec = *GrrParams(20, 4, 2.0, 0.0);
  EXPECT_EQ(spec.p, spec.p_s);
  EXPECT_NEAR(spec.p, e / (4 * e + 16), 1e-15);
}

TEST(GrrParamsTest, MatchesDefiningRatiosForRandomTuples) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const int s = 1 + static_cast<int>(rng() % 12);
    const int n = s * (1 + static_cast<int>(rng() % 12)) + (i % 2);
    const double eps = std::uniform_real_distribution<double>(0.01, 8)(rng);
    const double eps0 = std::uniform_real_distribution<double>(0, eps)(rng);
    const absl::StatusOr<GrrSpec> spec =
        GrrParams(n, s, eps, eps0, RegionMapKind::kSliding);
    if (n < 2) {
      EXPECT_FALSE(spec.ok());
      continue;
    }
    ASSERT_TRUE(spec.ok()) << spec.status();
    const Probs want = FromRatios(n, s, eps, eps0);
    EXPECT_NEAR(spec->p, want.p, 1e-14);
    EXPECT_NEAR(spec->p_s, want.p_s, 1e-14);
    EXPECT_NEAR(spec->p_bar, want.p_bar, 1e-14);
    EXPECT_NEAR(spec->p + (s - 1) * spec->p_s + (n - s) * spec->p_bar, 1.0,
                1e-12);
  }
}

TEST(GrrParamsTest, RejectsBadArguments) {
  EXPECT_EQ(GrrParams(10, 2, 1.0, 1.5).status().code(),
            absl::StatusCode::kOutOfRange);
  EXPECT_FALSE(GrrParams(10, 2, 1.0, -0.1).ok());
  EXPECT_FALSE(GrrParams(10, 0, 1.0, 0.5).ok());
  EXPECT_FALSE(GrrParams(10, 11, 1.0, 0.5).ok());
  EXPECT_FALSE(GrrParams(10, 3, 1.0, 0.5).ok());  // partition needs 3 | 10
  EXPECT_TRUE(GrrParams(10, 3, 1.0, 0.5, RegionMapKind::kSliding).ok());
  EXPECT_FALSE(GrrParams(1, 1, 1.0, 0.5).ok());
  EXPECT_FALSE(GrrParams(10, 2, 0.0, 0.0).ok());
}

TEST(ConfidenceTest, Examples) {
  const GrrSpec single = *GrrParams(7, 1, 1.3, 0.4, RegionMapKind::kSliding);
  EXPECT_EQ(Confidence(single), single.p);

  const double e = std::exp(1.5);
  const GrrSpec flat = *GrrParams(12, 3, 1.5, 0.0);
  EXPECT_NEAR(Confidence(flat), 3 * e / (3 * e + 9), 1e-15);

  const GrrSpec grr =
      *GrrParams(3, 2, std::log(3.0), std::log(3.0), RegionMapKind::kSliding);
  EXPECT_NEAR(Confidence(grr), 0.8, 1e-15);
}

TEST(RegionOfTest, PartitionBlocks) {
  const GrrSpec spec = *GrrParams(12, 4, 1, 0.5);
  for (int x = 0; x < 12; ++x) {
    const ValueWindow w = *RegionOf(spec, x);
    EXPECT_EQ(w.first, 4 * (x / 4));
    EXPECT_EQ(w.last, w.first + 3);
  }
  EXPECT_FALSE(RegionOf(spec, 12).ok());
  EXPECT_FALSE(RegionOf(spec, -1).ok());
}

TEST(RegionOfTest, SlidingWindowsKeepSizeAtEdges) {
  for (int s : {1, 2, 3, 4, 7, 10}) {
    const GrrSpec spec = *GrrParams(10, s, 1, 0.5, RegionMapKind::kSliding);
    for (int x = 0; x < 10; ++x) {
      const ValueWindow w = *RegionOf(spec, x);
      EXPECT_EQ(w.last - w.first + 1, s);
      EXPECT_GE(w.first, 0);
      EXPECT_LT(w.last, 10);
      EXPECT_LE(w.first, x);
      EXPECT_GE(w.last, x);
    }
  }
  const GrrSpec spec = *GrrParams(10, 4, 1, 0.5, RegionMapKind::kSliding);
  EXPECT_EQ(RegionOf(spec, 0)->first, 0);
  EXPECT_EQ(RegionOf(spec, 9)->first, 6);
  EXPECT_EQ(RegionOf(spec, 5)->first, 4);
}

TEST(ParseRegionMapTest, RoundTrip) {
  for (RegionMapKind k : {RegionMapKind::kPartition, RegionMapKind::kSliding}) {
    EXPECT_EQ(*ParseRegionMap(RegionMapName(k)), k);
  }
  EXPECT_FALSE(ParseRegionMap("rotating").ok());
}

TEST(PerturbTest, EmpiricalFrequenciesMatch) {
  const GrrSpec spec = *GrrParams(12, 4, 2.0, 1.0);
  constexpr int kTrials = 1000000;
  const int x = 5;
  std::mt19937_64 engine(2026);
  std::vector<int64_t> hits(12, 0);
  for (int i = 0; i < kTrials; ++i) ++hits[*Perturb(spec, x, engine)];
  int64_t same = hits[x];
  int64_t region = 0;
  int64_t outside = 0;
  for (int y = 0; y < 12; ++y) {
    if (y == x) continue;
    (y / 4 == x / 4 ? region : outside) += hits[y];
  }
  auto within = [&](int64_t count, double prob) {
    const double se = std::sqrt(kTrials * prob * (1 - prob));
    EXPECT_NEAR(count, kTrials * prob, 3 * se) << prob;
  };
  within(same, spec.p);
  within(region, 3 * spec.p_s);
  within(outside, 8 * spec.p_bar);
  // Each individual cell, Bonferroni-adjusted over the 12 outputs.
  for (int y = 0; y < 12; ++y) {
    const double prob = y == x ? spec.p : y / 4 == x / 4 ? spec.p_s : spec.p_bar;
    const double se = std::sqrt(kTrials * prob * (1 - prob));
    EXPECT_NEAR(hits[y], kTrials * prob, 4 * se) << "cell " << y;
  }
}

TEST(PerturbTest, DeterministicPerSeed) {
  const GrrSpec spec = *GrrParams(91, 10, 5, 2.5, RegionMapKind::kSliding);
  std::vector<int> values(500);
  std::iota(values.begin(), values.end(), 0);
  for (int& v : values) v %= 91;
  EXPECT_EQ(*PerturbAll(spec, values, 9), *PerturbAll(spec, values, 9));
  EXPECT_NE(*PerturbAll(spec, values, 9), *PerturbAll(spec, values, 10));
  EXPECT_EQ(*Perturb(spec, 3, DeriveSeed(9, 3)), (*PerturbAll(spec, values, 9))[3]);
}

TEST(PerturbTest, HugeEpsIsIdentity) {
  const GrrSpec spec = *GrrParams(20, 5, 200, 100);
  std::mt19937_64 engine(1);
  for (int x = 0; x < 20; ++x) EXPECT_EQ(*Perturb(spec, x, engine), x);
}

TEST(PerturbTest, OutOfDomainIsAnError) {
  const GrrSpec spec = *GrrParams(20, 5, 1, 1);
  std::mt19937_64 engine(1);
  EXPECT_FALSE(Perturb(spec, 20, engine).ok());
  EXPECT_FALSE(PerturbAll(spec, {1, 2, -3}, 1).ok());
}

TEST(PerturbCountsTest, SameLawAsPerUserPerturbation) {
  const GrrSpec spec = *GrrParams(10, 5, 1.2, 0.6);
  const std::vector<int64_t> truth = {30, 0, 5, 12, 0, 0, 40, 1, 2, 10};
  std::vector<int> values;
  for (int x = 0; x < 10; ++x) values.insert(values.end(), truth[x], x);
  // Sum of reports per replicate is a scalar with a rich distribution.
  std::vector<double> direct, binned;
  std::mt19937_64 engine(5);
  for (int rep = 0; rep < 4000; ++rep) {
    const std::vector<int> r = *PerturbAll(spec, values, 1000 + rep);
    double a = 0;
    for (int y : r) a += y * y;
    direct.push_back(a);
    const std::vector<int64_t> c = *PerturbCounts(spec, truth, engine);
    double b = 0;
    for (int y = 0; y < 10; ++y) b += static_cast<double>(c[y]) * y * y;
    binned.push_back(b);
    EXPECT_EQ(std::accumulate(c.begin(), c.end(), int64_t{0}), 100);
  }
  EXPECT_GT(TwoSampleKs(direct, binned).p_value, 1e-3);
}

// Pr[y | x] from the mechanism description, independent of
// TransitionMatrix.
double ReportProb(const GrrSpec& spec, int x, int y) {
  if (x == y) return spec.p;
  const ValueWindow w = *RegionOf(spec, x);
  return y >= w.first && y <= w.last ? spec.p_s : spec.p_bar;
}

double BruteForceRatio(const GrrSpec& spec) {
  double worst = 0;
  const int n = spec.domain_size;
  for (int x = 0; x < n; ++x) {
    for (int x2 = 0; x2 < n; ++x2) {
      for (int y = 0; y < n; ++y) {
        worst = std::max(worst, ReportProb(spec, x, y) / ReportProb(spec, x2, y));
      }
    }
  }
  return worst;
}

TEST(VerifyLdpTest, PartitionAttainsEps) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 40; ++i) {
    const int s = 1 + static_cast<int>(rng() % 6);
    const int n = s * (2 + static_cast<int>(rng() % 5));
    const double eps = std::uniform_real_distribution<double>(0.05, 3)(rng);
    const double eps0 = std::uniform_real_distribution<double>(0, eps)(rng);
    const GrrSpec spec = *GrrParams(n, s, eps, eps0);
    const double ratio = *VerifyLdp(spec);
    EXPECT_NEAR(ratio, std::exp(eps), 1e-12);
    EXPECT_NEAR(ratio, BruteForceRatio(spec), 1e-12);
  }
}

TEST(VerifyLdpTest, SlidingNeverExceedsEps) {
  for (int n : {5, 8, 13}) {
    for (int s : {2, 3, 4}) {
      const GrrSpec spec = *GrrParams(n, s, 1.7, 0.9, RegionMapKind::kSliding);
      const double ratio = *VerifyLdp(spec);
      EXPECT_NEAR(ratio, BruteForceRatio(spec), 1e-12);
      EXPECT_LE(ratio, std::exp(1.7) + 1e-12);
      // Disjoint windows exist once the domain holds two of them.
      if (n >= 2 * s) EXPECT_NEAR(ratio, std::exp(1.7), 1e-12);
    }
  }
}

TEST(TransitionMatrixTest, Eps0EqualEpsIsExactlyGrr) {
  for (RegionMapKind map : {RegionMapKind::kPartition, RegionMapKind::kSliding}) {
    const double eps = 1.37;
    const GrrSpec spec = *GrrParams(12, 4, eps, eps, map);
    const auto m = *TransitionMatrix(spec);
    const double e = std::exp(eps);
    for (int x = 0; x < 12; ++x) {
      double row = 0;
      for (int y = 0; y < 12; ++y) {
        EXPECT_EQ(m[x][y], x == y ? e / (e + 11) : 1 / (e + 11));
        row += m[x][y];
      }
      EXPECT_NEAR(row, 1.0, 1e-15);
    }
    EXPECT_NEAR(*VerifyLdp(spec), e, 1e-12);
  }
}

TEST(EstimatorTest, NoiselessLimitIsExact) {
  const GrrSpec spec = *GrrParams(20, 5, 200, 100);
  std::vector<int64_t> counts(20, 0);
  counts[3] = 7;
  counts[4] = 2;
  counts[17] = 11;
  const FrequencyReport r = *EstimateFrequencies(spec, counts);
  EXPECT_EQ(r.n_users, 20);
  EXPECT_NEAR(r.f_hat_S[0], 9, 1e-9);
  EXPECT_NEAR(r.f_hat_S[1], 0, 1e-9);
  EXPECT_NEAR(r.f_hat_S[3], 11, 1e-9);
  EXPECT_NEAR(r.f_hat_x[3], 7, 1e-9);
  EXPECT_NEAR(r.f_hat_x[17], 11, 1e-9);
  EXPECT_NEAR(r.f_hat_x[0], 0, 1e-9);
}

TEST(EstimatorTest, GrrReductionOfValueEstimator) {
  const GrrSpec spec = *GrrParams(20, 5, 1.1, 1.1);
  const std::vector<int64_t> counts = {5, 9, 1, 0, 4, 7, 2, 2, 8, 3,
                                       0, 6, 1, 1, 9, 4, 4, 2, 0, 5};
  const double n = 73;
  const FrequencyReport r = *EstimateFrequencies(spec, counts);
  for (int x = 0; x < 20; ++x) {
    EXPECT_NEAR(r.f_hat_x[x],
                (counts[x] - n * spec.p_bar) / (spec.p - spec.p_bar), 1e-9);
  }
}

TEST(EstimatorTest, EmptyCategoryEstimateIsNonPositive) {
  const GrrSpec spec = *GrrParams(20, 5, 2, 1);
  std::vector<int64_t> counts(20, 4);
  for (int y = 0; y < 5; ++y) counts[y] = 0;
  EXPECT_LE(*EstimateCategory(spec, counts, 0), 0.0);
}

TEST(EstimatorTest, ErrorPaths) {
  const GrrSpec flat = *GrrParams(20, 5, 2, 0);
  const std::vector<int64_t> counts(20, 3);
  EXPECT_EQ(EstimateValue(flat, counts, 15, 0).status().code(),
            absl::StatusCode::kFailedPrecondition);
  EXPECT_TRUE(EstimateFrequencies(flat, counts)->f_hat_x.empty());

  GrrSpec degenerate = flat;
  degenerate.p = degenerate.p_s = degenerate.p_bar = 1.0 / 20;
  EXPECT_EQ(EstimateCategory(degenerate, counts, 0).status().code(),
            absl::StatusCode::kFailedPrecondition);

  const GrrSpec spec = *GrrParams(20, 5, 2, 1);
  EXPECT_FALSE(EstimateCategory(spec, std::vector<int64_t>(20, 0), 0).ok());
  EXPECT_FALSE(EstimateCategory(spec, std::vector<int64_t>(19, 1), 0).ok());
  EXPECT_FALSE(EstimateCategory(spec, counts, 4).ok());
  const GrrSpec sliding = *GrrParams(20, 5, 2, 1, RegionMapKind::kSliding);
  EXPECT_FALSE(EstimateCategory(sliding, counts, 0).ok());
}

// Monte Carlo mean error of both estimators, returned in standard errors.
struct BiasCheck {
  double category_z, value_z;
};
BiasCheck MeasureBias(const GrrSpec& spec, const std::vector<int64_t>& truth,
                      int category, int value, int trials, uint64_t seed) {
  const int s = spec.region_size;
  double true_category = 0;
  for (int x = category * s; x < (category + 1) * s; ++x) true_category += truth[x];
  std::mt19937_64 engine(seed);
  double sc = 0, scc = 0, sv = 0, svv = 0;
  for (int t = 0; t < trials; ++t) {
    const std::vector<int64_t> counts = *PerturbCounts(spec, truth, engine);
    const double fs = *EstimateCategory(spec, counts, category);
    const double ec = fs - true_category;
    sc += ec;
    scc += ec * ec;
    const double fs_v = *EstimateCategory(spec, counts, value / s);
    const double ev = *EstimateValue(spec, counts, fs_v, value) - truth[value];
    sv += ev;
    svv += ev * ev;
  }
  auto z = [trials](double sum, double sq) {
    const double mean = sum / trials;
    const double var = (sq - trials * mean * mean) / (trials - 1);
    return mean / std::sqrt(var / trials);
  };
  return {z(sc, scc), z(sv, svv)};
}

TEST(EstimatorTest, CategoryEstimateUnbiasedOnAgeSizedDomain) {
  // 30% of 1e5 users in the first block, the rest spread over the domain.
  const GrrSpec spec = *GrrParams(kAgeDomainSize, 10, 5, 2.5);
  std::vector<int64_t> truth(kAgeDomainSize, 0);
  for (int x = 0; x < 10; ++x) truth[x] = 3000;
  for (int x = 10; x < kAgeDomainSize; ++x) truth[x] = 70000 / 90;
  truth[99] += 70000 - 90 * (70000 / 90);
  ASSERT_EQ(std::accumulate(truth.begin(), truth.end(), int64_t{0}), 100000);
  const BiasCheck b = MeasureBias(spec, truth, 0, 4, 1000, 77);
  EXPECT_LT(std::abs(b.category_z), 3.0);
  EXPECT_LT(std::abs(b.value_z), 3.0);
}

TEST(EstimatorTest, UnbiasedForRandomConfigs) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 10; ++i) {
    const int s = 2 + static_cast<int>(rng() % 5);
    const int n = s * (2 + static_cast<int>(rng() % 6));
    const double eps = std::uniform_real_distribution<double>(0.5, 5)(rng);
    const double eps0 = std::uniform_real_distribution<double>(0.1, eps)(rng);
    const GrrSpec spec = *GrrParams(n, s, eps, eps0);
    std::vector<int64_t> truth(n);
    for (auto& c : truth) c = static_cast<int64_t>(rng() % 400);
    const int value = static_cast<int>(rng() % n);
    const BiasCheck b = MeasureBias(spec, truth, value / s, value, 1000, i);
    EXPECT_LT(std::abs(b.category_z), 3.0) << "config " << i;
    EXPECT_LT(std::abs(b.value_z), 3.0) << "config " << i;
  }
}

// Exact mean squared errors (normalized by N^2) of the two estimators,
// summed from per-user report variances.
struct ExactMse {
  double category, value;
};
ExactMse ExactMseOf(const GrrSpec& spec, const std::vector<int64_t>& truth) {
  const int n = spec.domain_size;
  const int s = spec.region_size;
  const double rho = Confidence(spec);
  const double d = rho - s * spec.p_bar;
  const double users = std::accumulate(truth.begin(), truth.end(), 0.0);
  double category = 0;
  for (int c = 0; c < n / s; ++c) {
    double var = 0;
    for (int v = 0; v < n; ++v) {
      const double in = v / s == c ? rho : s * spec.p_bar;
      var += truth[v] * in * (1 - in);
    }
    category += var / (d * d);
  }
  double value = 0;
  if (spec.p != spec.p_s) {
    const double a = 1 / (spec.p - spec.p_s);
    const double b = (spec.p_s - spec.p_bar) / ((spec.p - spec.p_s) * d);
    for (int x = 0; x < n; ++x) {
      double var = 0;
      for (int v = 0; v < n; ++v) {
        const bool same_block = v / s == x / s;
        const double pi = v == x ? spec.p : same_block ? spec.p_s : spec.p_bar;
        const double pj = same_block ? rho : s * spec.p_bar;
        // Report == x implies report in x's block.
        var += truth[v] * (a * a * pi * (1 - pi) + b * b * pj * (1 - pj) -
                           2 * a * b * (pi - pi * pj));
      }
      value += var;
    }
    value /= n;
  } else {
    value = INFINITY;
  }
  return {category / (n / s) / (users * users), value / (users * users)};
}

TEST(MseSweepTest, AgeExperimentShape) {
  const std::vector<int> values =
      AgesToValues(SyntheticAdultAges(45222, 2026));
  std::vector<int64_t> truth(kAgeDomainSize, 0);
  for (int v : values) ++truth[v];
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(0.5 * i);
  for (int s : {10, 5}) {
    const std::vector<MseRow> rows =
        *MseSweep(values, kAgeDomainSize, s, 5.0, grid, 300, 31);
    ASSERT_EQ(rows.size(), grid.size());
    std::vector<ExactMse> exact;
    for (double e0 : grid) {
      exact.push_back(ExactMseOf(*GrrParams(kAgeDomainSize, s, 5.0, e0), truth));
    }
    for (size_t i = 0; i < rows.size(); ++i) {
      EXPECT_EQ(rows[i].eps0, grid[i]);
      // 300 trials of many near-independent squared errors.
      EXPECT_NEAR(rows[i].mse_category / exact[i].category, 1.0, 0.1)
          << "s " << s << " eps0 " << grid[i];
      if (i == 0) {
        EXPECT_TRUE(std::isinf(rows[i].mse_value));
      } else {
        EXPECT_NEAR(rows[i].mse_value / exact[i].value, 1.0, 0.1)
            << "s " << s << " eps0 " << grid[i];
      }
    }
    const size_t last = rows.size() - 1;
    size_t best_value = 1, best_category = 0, worst_category = 0;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (exact[i].value < exact[best_value].value) best_value = i;
      if (exact[i].category < exact[best_category].category) best_category = i;
      if (exact[i].category > exact[worst_category].category) worst_category = i;
    }
    EXPECT_EQ(best_value, last) << "s " << s;
    EXPECT_EQ(worst_category, last) << "s " << s;
    EXPECT_LT(best_category, last) << "s " << s;
    // The measured curves show the same extremes wherever the exact gap
    // exceeds the Monte Carlo noise.
    EXPECT_LT(rows[last].mse_value, rows[1].mse_value);
    EXPECT_GT(rows[last].mse_category, rows[best_category].mse_category);
  }
}

TEST(MseSweepTest, RejectsBadInput) {
  EXPECT_FALSE(MseSweep({}, 10, 5, 1, {0.5}, 10, 1).ok());
  EXPECT_FALSE(MseSweep({1, 2}, 10, 5, 1, {0.5}, 0, 1).ok());
  EXPECT_FALSE(MseSweep({1, 12}, 10, 5, 1, {0.5}, 10, 1).ok());
  EXPECT_FALSE(MseSweep({1, 2}, 10, 5, 1, {2.0}, 10, 1).ok());
}

TEST(LoadAdultAgesTest, UciLayout) {
  const std::string path = WriteTemp(
      "adult.data",
      "39, State-gov, 77516, Bachelors, 13, Never-married, Adm-clerical, "
      "Not-in-family, White, Male, 2174, 0, 40, United-States, <=50K\n"
      "50, Self-emp-not-inc, 83311, Bachelors, 13, Married-civ-spouse, "
      "Exec-managerial, Husband, White, Male, 0, 0, 13, United-States, <=50K\n"
      "54, ?, 180211, Some-college, 10, Married-civ-spouse, ?, Husband, "
      "Asian-Pac-Islander, Male, 0, 0, 60, South, >50K\n"
      "\n"
      "x, Private, 1\n"
      "5, Private, 1\n"
      "120, Private, 1\n");
  const AgeData data = *LoadAdultAges(path);
  EXPECT_EQ(data.ages, (std::vector<int>{39, 50, kMinAge, kMaxAge}));
  EXPECT_EQ(data.malformed_rows, 2);
  EXPECT_EQ(AgesToValues(data.ages), (std::vector<int>{29, 40, 0, 90}));
}

TEST(LoadAdultAgesTest, HeaderedCsv) {
  const std::string path =
      WriteTemp("adult_headered.csv", "id,age,income\n1,23,low\n2,61,high\n");
  EXPECT_EQ(LoadAdultAges(path)->ages, (std::vector<int>{23, 61}));
}

TEST(LoadAdultAgesTest, Errors) {
  EXPECT_EQ(LoadAdultAges(WriteTemp("empty.csv", "")).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(LoadAdultAges("/nonexistent/adult.data").status().code(),
            absl::StatusCode::kNotFound);
}

TEST(SyntheticAdultAgesTest, MatchesCensusMoments) {
  const std::vector<int> ages = SyntheticAdultAges(200000, 4);
  double sum = 0, sq = 0;
  for (int a : ages) {
    EXPECT_GE(a, 17);
    EXPECT_LE(a, 90);
    sum += a;
    sq += static_cast<double>(a) * a;
  }
  const double mean = sum / ages.size();
  const double sd = std::sqrt(sq / ages.size() - mean * mean);
  EXPECT_NEAR(mean, 38.6, 0.5);
  EXPECT_NEAR(sd, 13.6, 0.5);
  EXPECT_EQ(SyntheticAdultAges(100, 4), SyntheticAdultAges(100, 4));
}

}  // namespace
}  // namespace pbdp
