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
// Preferred output regions and the boosted output distribution built around
// a kernel mechanism.

#ifndef PBDP_PB_MECH_H_
#define PBDP_PB_MECH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "pbdp/kernels.h"

namespace pbdp {

enum class RegionKind { kRelative, kAbsolute, kFixed };

// relative: |y - qx| <= theta |qx| + tau
// absolute: |y - qx| <= tau
// fixed:    tau_l <= y <= tau_u
struct RegionSpec {
  RegionKind kind = RegionKind::kAbsolute;
  double theta = 0.0;
  double tau = 0.0;
  double tau_l = 0.0;
  double tau_u = 0.0;
};

absl::string_view RegionKindName(RegionKind kind);
absl::StatusOr<RegionKind> ParseRegionKind(absl::string_view name);
absl::Status ValidateRegion(const RegionSpec& r);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

Interval RegionBounds(const RegionSpec& r, double qx);
// Kernel mass inside the region when the true answer is qx.
double RegionMass(const KernelSpec& k, const RegionSpec& r, double qx);
// Kernel mass outside the region, computed from both tails directly.
double RegionOutsideMass(const KernelSpec& k, const RegionSpec& r, double qx);

struct WorstCase {
  double min_mass = 0.0;
  double qx_star = 0.0;
};

// Minimum in-region mass over true answers, with a minimizer. The fixed case
// relies on kernel symmetry, which both built-in families have.
absl::StatusOr<WorstCase> WorstCaseMass(const KernelSpec& k,
                                        const RegionSpec& r);

// (rho - p) / (rho (1 - p)) clamped to [0, 1]; zero when rho <= p.
absl::StatusOr<double> BoostingRate(double min_mass, double rho);

struct BoostParams {
  double rho = 0.0;
  double q = 0.0;
  double min_pS = 0.0;
  double qx_star = 0.0;
};

absl::StatusOr<BoostParams> ComputeBoostParams(const KernelSpec& k,
                                               const RegionSpec& r,
                                               double rho);

// Output law of the boosted mechanism for true answer qx: the kernel density
// with the out-of-region part scaled by (1 - q), renormalized.
class BoostedDistribution {
 public:
  static absl::StatusOr<BoostedDistribution> Create(const KernelSpec& k,
                                                    const RegionSpec& r,
                                                    double q, double qx);

  double Pdf(double y) const;
  double LogPdf(double y) const;
  double Cdf(double y) const;
  // Closed-form piecewise inverse of Cdf. `u` is clamped into (0, 1).
  double Quantile(double u) const;

  bool InRegion(double y) const {
    return y >= region_.lower && y <= region_.upper;
  }
  double InRegionMass() const { return inside_ / norm_; }
  // Acceptance probability of the rejection sampler.
  double Normalizer() const { return norm_; }
  const Interval& region() const { return region_; }
  const KernelSpec& kernel() const { return kernel_; }
  double q() const { return q_; }
  double qx() const { return qx_; }

 private:
  BoostedDistribution() = default;

  KernelSpec kernel_;
  Interval region_;
  double q_ = 0.0;
  double qx_ = 0.0;
  double left_ = 0.0;    // kernel mass below the region
  double right_ = 0.0;   // kernel mass above the region
  double inside_ = 0.0;  // kernel mass inside the region
  double norm_ = 1.0;    // 1 - (left_ + right_) q
};

absl::StatusOr<double> PbPdf(const KernelSpec& k, const RegionSpec& r,
                             double q, double qx, double y);
absl::StatusOr<double> PbCdf(const KernelSpec& k, const RegionSpec& r,
                             double q, double qx, double y);

enum class SamplerKind { kInverseTransform, kRejection };

absl::StatusOr<std::vector<double>> PbSample(
    const KernelSpec& k, const RegionSpec& r, double q, double qx,
    uint64_t seed, int64_t n,
    SamplerKind sampler = SamplerKind::kInverseTransform);

struct UtilityReport {
  bool pass = true;
  double rho = 0.0;
  // Smallest (mass - rho) over the checked points and where it occurs.
  double min_margin = 0.0;
  double worst_qx = 0.0;
  double qx_star = 0.0;
  double mass_at_qx_star = 0.0;
  std::string message;
};

// Checks the boosted in-region mass against rho at every grid point and at
// the worst-case answer.
absl::StatusOr<UtilityReport> VerifyUtility(const KernelSpec& k,
                                            const RegionSpec& r, double q,
                                            const std::vector<double>& qx_grid,
                                            double rho);

}  // namespace pbdp

#endif  // PBDP_PB_MECH_H_
