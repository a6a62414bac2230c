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

#include "pbdp/accounting.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <random>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "pbdp/kernels.h"
#include "pbdp/pb_mech.h"
#include "pbdp/pld.h"
#include "pbdp/status_macros.h"

namespace pbdp {
namespace {

// Offsets whose weight falls below this contribute nothing measurable.
constexpr double kNegligibleWeight = 1e-300;
// Upper end of the eps bracket before giving up.
constexpr double kMaxEpsilon = 1e4;

double Phi(const KernelSpec& k, double t) { return KernelCdf(k, 0.0, t); }

double Clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

double IdentityProfile(double eps) { return eps < 0.0 ? -std::expm1(eps) : 0.0; }

}  // namespace

absl::Status ValidateLeakage(const LeakageParams& lp) {
  if (!(lp.L2 >= 0.0) || !std::isfinite(lp.L2) || !std::isfinite(lp.L1)) {
    return absl::InvalidArgumentError("leakage constants must be finite");
  }
  for (double w : {lp.W1, lp.W2, lp.W3}) {
    if (!(w >= 0.0 && w <= 1.0)) {
      return absl::InvalidArgumentError("event weights must lie in [0, 1]");
    }
  }
  if (std::abs(lp.W1 + lp.W2 + lp.W3 - 1.0) > 1e-12) {
    return absl::InvalidArgumentError("event weights must sum to 1");
  }
  return absl::OkStatus();
}

DominatingPair DominatingPairFor(const KernelSpec& k, const RegionSpec& r) {
  const double base = r.kind == RegionKind::kFixed ? r.tau_l : 0.0;
  return {base, base + k.sensitivity};
}

absl::StatusOr<LeakageParams> ComputeLeakageParams(const KernelSpec& k,
                                                   const RegionSpec& r,
                                                   double q) {
  PBDP_RETURN_IF_ERROR(ValidateKernel(k));
  PBDP_RETURN_IF_ERROR(ValidateRegion(r));
  if (!(q >= 0.0 && q < 1.0)) {
    return absl::OutOfRangeError(
        "q must lie in [0, 1); q = 1 has unbounded loss for continuous "
        "kernels");
  }
  // Without boosting the mechanism is the kernel; no extra loss, no events.
  if (q == 0.0) return LeakageParams{};
  const double delta = k.sensitivity;
  LeakageParams lp;
  lp.L2 = -std::log1p(-q);
  const DominatingPair pair = DominatingPairFor(k, r);
  // Normalizer ratio between the two neighbors' boosted laws.
  const double pbar = RegionOutsideMass(k, r, pair.qx);
  const double pbar_prime = RegionOutsideMass(k, r, pair.qx_prime);
  const double l1 = std::log1p(-pbar_prime * q) - std::log1p(-pbar * q);
  switch (r.kind) {
    case RegionKind::kRelative:
      lp.L1 = l1;
      lp.W1 = Phi(k, r.theta * delta + r.tau) - Phi(k, r.tau);
      lp.W2 = Phi(k, r.theta * delta - r.tau) - Phi(k, -r.tau);
      break;
    case RegionKind::kFixed:
      // Either orientation of the pair is a neighbor; keep the larger loss.
      lp.L1 = std::abs(l1);
      break;
    case RegionKind::kAbsolute:
      lp.W1 = Phi(k, delta - r.tau) - Phi(k, -r.tau);
      lp.W2 = lp.W1;
      break;
  }
  lp.W1 = Clamp01(lp.W1);
  lp.W2 = Clamp01(lp.W2);
  if (lp.W1 + lp.W2 > 1.0 + 1e-12) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "closed-form event weights W1 = %.6g and W2 = %.6g sum past 1; the "
        "sensitivity is too large for this region",
        lp.W1, lp.W2));
  }
  lp.W3 = Clamp01(1.0 - lp.W1 - lp.W2);
  return lp;
}

absl::StatusOr<PLDRepr> PbPld(const PLDRepr& kernel_pld,
                              const LeakageParams& lp, double grid_step) {
  PBDP_RETURN_IF_ERROR(ValidateLeakage(lp));
  PBDP_RETURN_IF_ERROR(ValidatePld(kernel_pld));
  if (lp.L1 == 0.0 && lp.W1 == 0.0 && lp.W2 == 0.0) return kernel_pld;
  const PLDRepr grid = ToGrid(kernel_pld, grid_step);
  std::vector<double> losses;
  std::vector<double> masses;
  losses.reserve(3 * grid.grid_losses.size());
  masses.reserve(3 * grid.grid_losses.size());
  const std::pair<double, double> components[] = {
      {lp.L2, lp.W1}, {-lp.L2, lp.W2}, {0.0, lp.W3}};
  for (const auto& [offset, weight] : components) {
    if (weight == 0.0) continue;
    for (size_t i = 0; i < grid.grid_losses.size(); ++i) {
      losses.push_back(grid.grid_losses[i] + lp.L1 + offset);
      masses.push_back(grid.grid_masses[i] * weight);
    }
  }
  return NormalizeGrid(std::move(losses), std::move(masses), grid.inf_mass,
                       0.0);
}

absl::StatusOr<std::function<double(double)>> ComposedKernelProfile(
    const KernelSpec& k, int compositions) {
  PBDP_RETURN_IF_ERROR(ValidateKernel(k));
  if (compositions < 0) {
    return absl::InvalidArgumentError("composition count must be >= 0");
  }
  if (compositions == 0) return std::function<double(double)>(IdentityProfile);
  if (k.family == KernelFamily::kGaussian) {
    // T Gaussian folds compose to one Gaussian with ratio r * sqrt(T).
    const double ratio = NoiseRatio(k) * std::sqrt(compositions);
    return std::function<double(double)>(
        [ratio](double eps) { return GaussianProfile(ratio, eps); });
  }
  PBDP_ASSIGN_OR_RETURN(const PLDRepr single, KernelPld(k));
  PBDP_ASSIGN_OR_RETURN(PLDRepr composed, SelfComposePld(single, compositions));
  auto shared = std::make_shared<const PLDRepr>(std::move(composed));
  return std::function<double(double)>(
      [shared](double eps) { return PldProfile(*shared, eps); });
}

double PbProfile(const std::function<double(double)>& kernel_profile,
                 const LeakageParams& lp, double eps) {
  const double shifted = eps - lp.L1;
  double delta = 0.0;
  if (lp.W1 > 0.0) delta += lp.W1 * kernel_profile(shifted - lp.L2);
  if (lp.W2 > 0.0) delta += lp.W2 * kernel_profile(shifted + lp.L2);
  if (lp.W3 > 0.0) delta += lp.W3 * kernel_profile(shifted);
  return Clamp01(delta);
}

absl::StatusOr<double> PbProfile(const KernelSpec& k, const RegionSpec& r,
                                 double q, double eps) {
  PBDP_ASSIGN_OR_RETURN(const LeakageParams lp, ComputeLeakageParams(k, r, q));
  PBDP_ASSIGN_OR_RETURN(const auto profile, ComposedKernelProfile(k, 1));
  return PbProfile(profile, lp, eps);
}

absl::StatusOr<double> PbRdp(const KernelSpec& k, const LeakageParams& lp,
                             double alpha) {
  PBDP_ASSIGN_OR_RETURN(const double eps0, KernelRdp(k, alpha));
  PBDP_RETURN_IF_ERROR(ValidateLeakage(lp));
  const double a1 = alpha - 1.0;
  // log(W1 e^{a1 L2} + W2 e^{-a1 L2} + W3) via log-sum-exp.
  double terms[3];
  int count = 0;
  if (lp.W1 > 0.0) terms[count++] = std::log(lp.W1) + a1 * lp.L2;
  if (lp.W2 > 0.0) terms[count++] = std::log(lp.W2) - a1 * lp.L2;
  if (lp.W3 > 0.0) terms[count++] = std::log(lp.W3);
  double top = -INFINITY;
  for (int i = 0; i < count; ++i) top = std::max(top, terms[i]);
  double sum = 0.0;
  for (int i = 0; i < count; ++i) sum += std::exp(terms[i] - top);
  const double boost = (top + std::log(sum)) / a1;
  return eps0 + lp.L1 + boost;
}

absl::StatusOr<double> PbRdp(const KernelSpec& k, const RegionSpec& r,
                             double q, double alpha) {
  PBDP_ASSIGN_OR_RETURN(const LeakageParams lp, ComputeLeakageParams(k, r, q));
  return PbRdp(k, lp, alpha);
}

std::vector<double> CompositionWeights(const LeakageParams& lp,
                                       int compositions) {
  const int t = std::max(compositions, 0);
  std::vector<double> weights(2 * t + 1, 0.0);
  std::vector<double> log_factorial(t + 1, 0.0);
  for (int i = 1; i <= t; ++i) log_factorial[i] = std::lgamma(i + 1.0);
  // 0 * log(0) is taken as 0: a zero weight only admits a zero count.
  auto log_power = [](double w, int e) {
    if (e == 0) return 0.0;
    return w > 0.0 ? e * std::log(w) : -INFINITY;
  };
  for (int e1 = 0; e1 <= t; ++e1) {
    const double base1 = log_factorial[t] - log_factorial[e1] +
                         log_power(lp.W1, e1);
    if (base1 == -INFINITY) break;
    for (int e2 = 0; e1 + e2 <= t; ++e2) {
      const int e3 = t - e1 - e2;
      const double log_term = base1 - log_factorial[e2] - log_factorial[e3] +
                              log_power(lp.W2, e2) + log_power(lp.W3, e3);
      if (log_term == -INFINITY) continue;
      weights[e1 - e2 + t] += std::exp(log_term);
    }
  }
  return weights;
}

absl::StatusOr<PbCompositionAccountant> PbCompositionAccountant::Create(
    const KernelSpec& k, const LeakageParams& lp, int compositions) {
  PBDP_RETURN_IF_ERROR(ValidateLeakage(lp));
  PbCompositionAccountant acc;
  PBDP_ASSIGN_OR_RETURN(acc.kernel_profile_,
                        ComposedKernelProfile(k, compositions));
  acc.compositions_ = compositions;
  acc.shift_ = compositions * lp.L1;
  acc.L2_ = lp.L2;
  acc.weights_ = CompositionWeights(lp, compositions);
  return acc;
}

double PbCompositionAccountant::Delta(double eps) const {
  const int t = compositions_;
  double delta = 0.0;
  for (int i = 0; i <= 2 * t; ++i) {
    const double w = weights_[i];
    if (w < kNegligibleWeight) continue;
    const int offset = i - t;
    delta += w * kernel_profile_(eps - shift_ - offset * L2_);
  }
  return Clamp01(delta);
}

absl::StatusOr<double> PbCompositionAccountant::Epsilon(double delta,
                                                        double tol) const {
  return SmallestEpsilon([this](double e) { return Delta(e); }, delta, tol);
}

absl::StatusOr<double> ComposeProfile(const KernelSpec& k, const RegionSpec& r,
                                      double q, int compositions, double eps) {
  PBDP_ASSIGN_OR_RETURN(const LeakageParams lp, ComputeLeakageParams(k, r, q));
  PBDP_ASSIGN_OR_RETURN(const PbCompositionAccountant acc,
                        PbCompositionAccountant::Create(k, lp, compositions));
  return acc.Delta(eps);
}

absl::StatusOr<double> ComposeRdp(const std::vector<double>& per_fold_eps) {
  // Extended precision keeps T identical entries summing to T * e.
  long double total = 0.0L;
  for (double e : per_fold_eps) {
    if (!(e >= 0.0)) {
      return absl::InvalidArgumentError("per-fold RDP eps must be >= 0");
    }
    total += e;
  }
  return static_cast<double>(total);
}

absl::StatusOr<double> SmallestEpsilon(
    const std::function<double(double)>& delta_fn, double delta, double tol) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    return absl::OutOfRangeError("target delta must lie in [0, 1]");
  }
  if (!(tol > 0.0)) return absl::InvalidArgumentError("tol must be positive");
  if (delta_fn(0.0) <= delta) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (delta_fn(hi) > delta) {
    lo = hi;
    hi *= 2.0;
    if (hi > kMaxEpsilon) {
      return absl::OutOfRangeError(absl::StrFormat(
          "no eps below %g reaches delta = %g", kMaxEpsilon, delta));
    }
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (delta_fn(mid) <= delta) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

absl::StatusOr<std::vector<McProfilePoint>> McPrivacyCheck(
    const KernelSpec& k, const RegionSpec& r, double q, int64_t n,
    uint64_t seed, const std::vector<double>& eps_grid) {
  if (n < 2) return absl::InvalidArgumentError("need at least two samples");
  if (!(q >= 0.0 && q < 1.0)) {
    return absl::OutOfRangeError("q must lie in [0, 1)");
  }
  const DominatingPair pair = DominatingPairFor(k, r);
  PBDP_ASSIGN_OR_RETURN(const BoostedDistribution p,
                        BoostedDistribution::Create(k, r, q, pair.qx));
  PBDP_ASSIGN_OR_RETURN(const BoostedDistribution p_prime,
                        BoostedDistribution::Create(k, r, q, pair.qx_prime));
  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> sum(eps_grid.size(), 0.0);
  std::vector<double> sum_sq(eps_grid.size(), 0.0);
  for (int64_t i = 0; i < n; ++i) {
    double u = uniform(engine);
    while (u <= 0.0) u = uniform(engine);
    const double y = p.Quantile(u);
    const double loss = p.LogPdf(y) - p_prime.LogPdf(y);
    for (size_t j = 0; j < eps_grid.size(); ++j) {
      const double v = std::max(0.0, -std::expm1(eps_grid[j] - loss));
      sum[j] += v;
      sum_sq[j] += v * v;
    }
  }
  std::vector<McProfilePoint> out;
  out.reserve(eps_grid.size());
  const double dn = static_cast<double>(n);
  for (size_t j = 0; j < eps_grid.size(); ++j) {
    const double mean = sum[j] / dn;
    const double var = std::max(0.0, (sum_sq[j] / dn - mean * mean)) *
                       dn / (dn - 1.0);
    out.push_back({eps_grid[j], mean, std::sqrt(var / dn)});
  }
  return out;
}

}  // namespace pbdp
