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

#include "pbdp/pb_mech.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "pbdp/kernels.h"
#include "pbdp/status_macros.h"

namespace pbdp {
namespace {

// Tolerance for the utility constraint at every checked answer.
constexpr double kUtilitySlack = 1e-9;

// Zero-centered quantile of a symmetric kernel evaluated at a tail level
// s <= 1/2, returned as a non-positive offset.
double LowerTailOffset(const KernelSpec& k, double s) {
  s = std::clamp(s, 1e-300, 0.5);
  return *KernelQuantile(k, 0.0, s);
}

}  // namespace

absl::string_view RegionKindName(RegionKind kind) {
  switch (kind) {
    case RegionKind::kRelative:
      return "relative";
    case RegionKind::kFixed:
      return "fixed";
    case RegionKind::kAbsolute:
      break;
  }
  return "absolute";
}

absl::StatusOr<RegionKind> ParseRegionKind(absl::string_view name) {
  if (name == "relative") return RegionKind::kRelative;
  if (name == "absolute") return RegionKind::kAbsolute;
  if (name == "fixed") return RegionKind::kFixed;
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown region kind '%s'", name));
}

absl::Status ValidateRegion(const RegionSpec& r) {
  switch (r.kind) {
    case RegionKind::kRelative:
      if (!(r.theta >= 0.0 && r.theta <= 1.0)) {
        return absl::InvalidArgumentError("relative theta must lie in [0, 1]");
      }
      if (!(r.tau > 0.0) || !std::isfinite(r.tau)) {
        return absl::InvalidArgumentError("relative tau must be positive");
      }
      break;
    case RegionKind::kAbsolute:
      if (!(r.tau >= 0.0) || !std::isfinite(r.tau)) {
        return absl::InvalidArgumentError("absolute tau must be >= 0");
      }
      break;
    case RegionKind::kFixed:
      if (!(r.tau_l < r.tau_u) || !std::isfinite(r.tau_l) ||
          !std::isfinite(r.tau_u)) {
        return absl::InvalidArgumentError("fixed region needs tau_l < tau_u");
      }
      break;
  }
  return absl::OkStatus();
}

Interval RegionBounds(const RegionSpec& r, double qx) {
  switch (r.kind) {
    case RegionKind::kRelative: {
      const double half = r.theta * std::abs(qx) + r.tau;
      return {qx - half, qx + half};
    }
    case RegionKind::kAbsolute:
      return {qx - r.tau, qx + r.tau};
    case RegionKind::kFixed:
      break;
  }
  return {r.tau_l, r.tau_u};
}

double RegionMass(const KernelSpec& k, const RegionSpec& r, double qx) {
  const Interval s = RegionBounds(r, qx);
  double mass;
  if (s.lower > qx) {
    mass = KernelSurvival(k, qx, s.lower) - KernelSurvival(k, qx, s.upper);
  } else if (s.upper < qx) {
    mass = KernelCdf(k, qx, s.upper) - KernelCdf(k, qx, s.lower);
  } else {
    mass = 1.0 - KernelCdf(k, qx, s.lower) - KernelSurvival(k, qx, s.upper);
  }
  return std::clamp(mass, 0.0, 1.0);
}

double RegionOutsideMass(const KernelSpec& k, const RegionSpec& r,
                         double qx) {
  const Interval s = RegionBounds(r, qx);
  return std::clamp(
      KernelCdf(k, qx, s.lower) + KernelSurvival(k, qx, s.upper), 0.0, 1.0);
}

absl::StatusOr<WorstCase> WorstCaseMass(const KernelSpec& k,
                                        const RegionSpec& r) {
  PBDP_RETURN_IF_ERROR(ValidateKernel(k));
  PBDP_RETURN_IF_ERROR(ValidateRegion(r));
  // Relative regions are narrowest at qx = 0; absolute ones have constant
  // mass; fixed ones are least covered with the answer on an edge.
  const double qx_star = r.kind == RegionKind::kFixed ? r.tau_l : 0.0;
  return WorstCase{RegionMass(k, r, qx_star), qx_star};
}

absl::StatusOr<double> BoostingRate(double min_mass, double rho) {
  if (!(rho > 0.0 && rho <= 1.0)) {
    return absl::OutOfRangeError("confidence rho must lie in (0, 1]");
  }
  if (!(min_mass >= 0.0 && min_mass <= 1.0)) {
    return absl::OutOfRangeError("region mass must lie in [0, 1]");
  }
  if (rho <= min_mass) return 0.0;
  const double q = (rho - min_mass) / (rho * (1.0 - min_mass));
  return std::clamp(q, 0.0, 1.0);
}

absl::StatusOr<BoostParams> ComputeBoostParams(const KernelSpec& k,
                                               const RegionSpec& r,
                                               double rho) {
  PBDP_ASSIGN_OR_RETURN(const WorstCase wc, WorstCaseMass(k, r));
  PBDP_ASSIGN_OR_RETURN(const double q, BoostingRate(wc.min_mass, rho));
  return BoostParams{rho, q, wc.min_mass, wc.qx_star};
}

absl::StatusOr<BoostedDistribution> BoostedDistribution::Create(
    const KernelSpec& k, const RegionSpec& r, double q, double qx) {
  PBDP_RETURN_IF_ERROR(ValidateKernel(k));
  PBDP_RETURN_IF_ERROR(ValidateRegion(r));
  if (!(q >= 0.0 && q <= 1.0)) {
    return absl::OutOfRangeError("boosting rate q must lie in [0, 1]");
  }
  if (!std::isfinite(qx)) {
    return absl::InvalidArgumentError("true answer must be finite");
  }
  BoostedDistribution d;
  d.kernel_ = k;
  d.region_ = RegionBounds(r, qx);
  d.q_ = q;
  d.qx_ = qx;
  d.left_ = KernelCdf(k, qx, d.region_.lower);
  d.right_ = KernelSurvival(k, qx, d.region_.upper);
  d.inside_ = RegionMass(k, r, qx);
  d.norm_ = 1.0 - (d.left_ + d.right_) * q;
  if (!(d.norm_ > 0.0)) {
    return absl::InvalidArgumentError(
        "region has no kernel mass and q = 1; the boosted law is undefined");
  }
  return d;
}

double BoostedDistribution::Pdf(double y) const {
  const double f = KernelPdf(kernel_, qx_, y);
  return InRegion(y) ? f / norm_ : f * (1.0 - q_) / norm_;
}

double BoostedDistribution::LogPdf(double y) const {
  const double z = (y - qx_) / kernel_.scale;
  const double log_f =
      kernel_.family == KernelFamily::kGaussian
          ? -0.5 * z * z - std::log(kernel_.scale) - 0.5 * std::log(2.0 * std::numbers::pi)
          : -std::abs(z) - std::log(2.0 * kernel_.scale);
  if (InRegion(y)) return log_f - std::log(norm_);
  return log_f + std::log1p(-q_) - std::log(norm_);
}

double BoostedDistribution::Cdf(double y) const {
  if (y < region_.lower) {
    return (1.0 - q_) * KernelCdf(kernel_, qx_, y) / norm_;
  }
  if (y <= region_.upper) {
    const double below = (1.0 - q_) * left_;
    double within;
    if (y > qx_) {
      within = inside_ - (KernelSurvival(kernel_, qx_, y) - right_);
    } else {
      within = KernelCdf(kernel_, qx_, y) - left_;
    }
    return std::clamp((below + within) / norm_, 0.0, 1.0);
  }
  return 1.0 - (1.0 - q_) * KernelSurvival(kernel_, qx_, y) / norm_;
}

double BoostedDistribution::Quantile(double u) const {
  u = std::clamp(u, 1e-300, 1.0 - 1e-16);
  const double c_lower = (1.0 - q_) * left_ / norm_;
  const double c_upper = c_lower + inside_ / norm_;
  if (u < c_lower) {
    // Kernel lower-tail level u * norm / (1 - q).
    return qx_ + LowerTailOffset(kernel_, u * norm_ / (1.0 - q_));
  }
  if (u <= c_upper || q_ == 1.0) {
    // Kernel CDF level left + (u - c_lower) * norm, expressed from whichever
    // tail keeps precision.
    const double level = left_ + (u - c_lower) * norm_;
    double y;
    if (level <= 0.5) {
      y = qx_ + LowerTailOffset(kernel_, level);
    } else {
      const double upper_level = right_ + (c_upper - u) * norm_;
      y = qx_ - LowerTailOffset(kernel_, upper_level);
    }
    return std::clamp(y, region_.lower, region_.upper);
  }
  const double tail = (1.0 - u) * norm_ / (1.0 - q_);
  return qx_ - LowerTailOffset(kernel_, tail);
}

absl::StatusOr<double> PbPdf(const KernelSpec& k, const RegionSpec& r,
                             double q, double qx, double y) {
  PBDP_ASSIGN_OR_RETURN(const BoostedDistribution d,
                        BoostedDistribution::Create(k, r, q, qx));
  return d.Pdf(y);
}

absl::StatusOr<double> PbCdf(const KernelSpec& k, const RegionSpec& r,
                             double q, double qx, double y) {
  PBDP_ASSIGN_OR_RETURN(const BoostedDistribution d,
                        BoostedDistribution::Create(k, r, q, qx));
  return d.Cdf(y);
}

absl::StatusOr<std::vector<double>> PbSample(const KernelSpec& k,
                                             const RegionSpec& r, double q,
                                             double qx, uint64_t seed,
                                             int64_t n, SamplerKind sampler) {
  if (n < 1) return absl::InvalidArgumentError("sample count must be >= 1");
  PBDP_ASSIGN_OR_RETURN(const BoostedDistribution d,
                        BoostedDistribution::Create(k, r, q, qx));
  std::mt19937_64 engine(seed);
  std::vector<double> out;
  out.reserve(n);
  if (sampler == SamplerKind::kInverseTransform) {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (int64_t i = 0; i < n; ++i) {
      double u = uniform(engine);
      while (u <= 0.0) u = uniform(engine);
      out.push_back(d.Quantile(u));
    }
    return out;
  }
  // Rejection: propose from the kernel, keep in-region proposals, and keep
  // out-of-region proposals with probability 1 - q.
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::exponential_distribution<double> exponential(1.0);
  const bool gaussian = k.family == KernelFamily::kGaussian;
  while (static_cast<int64_t>(out.size()) < n) {
    double y;
    if (gaussian) {
      y = qx + k.scale * normal(engine);
    } else {
      const double e = k.scale * exponential(engine);
      y = coin(engine) < 0.5 ? qx - e : qx + e;
    }
    if (d.InRegion(y) || coin(engine) >= q) out.push_back(y);
  }
  return out;
}

absl::StatusOr<UtilityReport> VerifyUtility(const KernelSpec& k,
                                            const RegionSpec& r, double q,
                                            const std::vector<double>& qx_grid,
                                            double rho) {
  if (qx_grid.empty()) {
    return absl::InvalidArgumentError("answer grid must not be empty");
  }
  PBDP_ASSIGN_OR_RETURN(const WorstCase wc, WorstCaseMass(k, r));
  UtilityReport report;
  report.rho = rho;
  report.qx_star = wc.qx_star;
  report.min_margin = INFINITY;
  std::vector<double> points = qx_grid;
  points.push_back(wc.qx_star);
  for (double qx : points) {
    PBDP_ASSIGN_OR_RETURN(const BoostedDistribution d,
                          BoostedDistribution::Create(k, r, q, qx));
    const double margin = d.InRegionMass() - rho;
    if (margin < report.min_margin) {
      report.min_margin = margin;
      report.worst_qx = qx;
    }
  }
  PBDP_ASSIGN_OR_RETURN(const BoostedDistribution at_star,
                        BoostedDistribution::Create(k, r, q, wc.qx_star));
  report.mass_at_qx_star = at_star.InRegionMass();
  report.pass = report.min_margin >= -kUtilitySlack;
  report.message =
      report.pass
          ? absl::StrFormat("utility holds; smallest margin %.3g at qx=%.17g",
                            report.min_margin, report.worst_qx)
          : absl::StrFormat(
                "utility violated at qx=%.17g: in-region mass %.12g < rho "
                "%.12g",
                report.worst_qx, report.min_margin + rho, rho);
  return report;
}

}  // namespace pbdp
