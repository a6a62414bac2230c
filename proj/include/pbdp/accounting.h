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
// Privacy accounting for the boosted mechanism: leakage constants, PLD,
// (eps, delta) profile, RDP, and homogeneous composition.

#ifndef PBDP_ACCOUNTING_H_
#define PBDP_ACCOUNTING_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "pbdp/kernels.h"
#include "pbdp/pb_mech.h"
#include "pbdp/pld.h"

namespace pbdp {

// Extra loss contributed by the boosting step. L1 is the normalizer ratio,
// L2 = -ln(1 - q) the in/out density ratio, and W1, W2, W3 the probabilities
// that an output picks up +L2, -L2, or neither.
struct LeakageParams {
  double L1 = 0.0;
  double L2 = 0.0;
  double W1 = 0.0;
  double W2 = 0.0;
  double W3 = 1.0;
};

absl::Status ValidateLeakage(const LeakageParams& lp);

enum class PrivacyMode { kApproxDp, kRdp };

struct PrivacyPoint {
  PrivacyMode mode = PrivacyMode::kApproxDp;
  double eps = 0.0;
  double delta = 0.0;  // approx mode only
  double alpha = 0.0;  // RDP mode only
};

struct DominatingPair {
  double qx = 0.0;
  double qx_prime = 0.0;
};

// Neighboring answers at which the closed-form constants are evaluated.
DominatingPair DominatingPairFor(const KernelSpec& k, const RegionSpec& r);

// Closed-form constants for the built-in region kinds. q must be < 1.
absl::StatusOr<LeakageParams> ComputeLeakageParams(const KernelSpec& k,
                                                   const RegionSpec& r,
                                                   double q);

// Three-component mixture of the kernel PLD shifted by L1 and by +-L2.
// Analytic inputs are discretized with `grid_step` first.
absl::StatusOr<PLDRepr> PbPld(const PLDRepr& kernel_pld,
                              const LeakageParams& lp,
                              double grid_step = kDefaultGridStep);

// Profile of the T-fold composed kernel as a callable. T = 0 yields the
// profile of the identity mechanism.
absl::StatusOr<std::function<double(double)>> ComposedKernelProfile(
    const KernelSpec& k, int compositions);

double PbProfile(const std::function<double(double)>& kernel_profile,
                 const LeakageParams& lp, double eps);
absl::StatusOr<double> PbProfile(const KernelSpec& k, const RegionSpec& r,
                                 double q, double eps);

absl::StatusOr<double> PbRdp(const KernelSpec& k, const LeakageParams& lp,
                             double alpha);
absl::StatusOr<double> PbRdp(const KernelSpec& k, const RegionSpec& r,
                             double q, double alpha);

// Probability mass of each net L2 offset e1 - e2 in [-T, T] after T folds,
// indexed by offset + T.
std::vector<double> CompositionWeights(const LeakageParams& lp,
                                       int compositions);

// T-fold accountant. Weights and the composed kernel profile are computed
// once, so repeated Delta() calls are cheap.
class PbCompositionAccountant {
 public:
  static absl::StatusOr<PbCompositionAccountant> Create(
      const KernelSpec& k, const LeakageParams& lp, int compositions);

  double Delta(double eps) const;
  // Smallest eps >= 0 with Delta(eps) <= delta, to absolute tolerance `tol`.
  absl::StatusOr<double> Epsilon(double delta, double tol) const;

  int compositions() const { return compositions_; }
  const std::vector<double>& offset_weights() const { return weights_; }

 private:
  PbCompositionAccountant() = default;

  int compositions_ = 0;
  double shift_ = 0.0;  // T * L1
  double L2_ = 0.0;
  std::vector<double> weights_;
  std::function<double(double)> kernel_profile_;
};

absl::StatusOr<double> ComposeProfile(const KernelSpec& k, const RegionSpec& r,
                                      double q, int compositions, double eps);

absl::StatusOr<double> ComposeRdp(const std::vector<double>& per_fold_eps);

// Smallest eps >= 0 with delta_fn(eps) <= delta for a nonincreasing delta_fn,
// found by bracketing and bisection to absolute tolerance `tol`.
absl::StatusOr<double> SmallestEpsilon(
    const std::function<double(double)>& delta_fn, double delta, double tol);

struct McProfilePoint {
  double eps = 0.0;
  double delta = 0.0;
  double std_error = 0.0;
};

// Monte-Carlo hockey-stick divergence between the boosted output laws at the
// dominating pair, using exact log density ratios on inverse-transform
// samples.
absl::StatusOr<std::vector<McProfilePoint>> McPrivacyCheck(
    const KernelSpec& k, const RegionSpec& r, double q, int64_t n,
    uint64_t seed, const std::vector<double>& eps_grid);

}  // namespace pbdp

#endif  // PBDP_ACCOUNTING_H_
