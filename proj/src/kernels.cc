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

#include "pbdp/kernels.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "pbdp/normal.h"
#include "pbdp/pld.h"

namespace pbdp {
namespace {

constexpr int kMaxBisections = 400;

double LogSumExp2(double a, double b) {
  const double hi = std::max(a, b);
  if (hi == -INFINITY) return hi;
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double LaplaceRdp(double ratio, double alpha) {
  if (ratio == 0.0) return 0.0;
  const double denom = 2.0 * alpha - 1.0;
  const double lse =
      LogSumExp2(std::log(alpha / denom) + (alpha - 1.0) * ratio,
                 std::log((alpha - 1.0) / denom) - alpha * ratio);
  return lse / (alpha - 1.0);
}

// Largest ratio r in [0, inf) with f(r) <= target, for f nondecreasing with
// f(0) <= target.
absl::StatusOr<double> LargestRatioBelow(const std::function<double(double)>& f,
                                         double target) {
  double lo = 0.0;
  double hi = 1.0;
  while (f(hi) <= target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) {
      return absl::InvalidArgumentError("calibration target unreachable");
    }
  }
  for (int i = 0; i < kMaxBisections && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) <= target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (lo == 0.0) {
    return absl::InvalidArgumentError("calibration target requires no signal");
  }
  return lo;
}

absl::Status CheckSensitivity(double sensitivity) {
  if (!(sensitivity > 0.0) || !std::isfinite(sensitivity)) {
    return absl::InvalidArgumentError("sensitivity must be positive");
  }
  return absl::OkStatus();
}

}  // namespace

absl::string_view KernelFamilyName(KernelFamily family) {
  return family == KernelFamily::kGaussian ? "gaussian" : "laplace";
}

absl::StatusOr<KernelFamily> ParseKernelFamily(absl::string_view name) {
  if (name == "gaussian") return KernelFamily::kGaussian;
  if (name == "laplace") return KernelFamily::kLaplace;
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown kernel family '%s'", name));
}

absl::string_view CalibrationName(Calibration calibration) {
  switch (calibration) {
    case Calibration::kClassical:
      return "classical";
    case Calibration::kAnalytic:
      return "analytic";
    case Calibration::kExplicitScale:
      break;
  }
  return "explicit-scale";
}

absl::StatusOr<Calibration> ParseCalibration(absl::string_view name) {
  if (name == "classical") return Calibration::kClassical;
  if (name == "analytic") return Calibration::kAnalytic;
  if (name == "explicit-scale") return Calibration::kExplicitScale;
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown calibration '%s'", name));
}

absl::Status ValidateKernel(const KernelSpec& k) {
  if (!(k.scale > 0.0) || !std::isfinite(k.scale)) {
    return absl::InvalidArgumentError("kernel scale must be positive");
  }
  if (!(k.sensitivity >= 0.0) || !std::isfinite(k.sensitivity)) {
    return absl::InvalidArgumentError("sensitivity must be non-negative");
  }
  if (!(k.delta0 >= 0.0 && k.delta0 <= 1.0)) {
    return absl::InvalidArgumentError("delta0 must lie in [0, 1]");
  }
  if (!(k.eps0 >= 0.0)) {
    return absl::InvalidArgumentError("eps0 must be non-negative");
  }
  return absl::OkStatus();
}

double NoiseRatio(const KernelSpec& k) { return k.sensitivity / k.scale; }

absl::StatusOr<double> ClassicalGaussianSigma(double eps0, double delta0,
                                              double sensitivity) {
  if (!(eps0 > 0.0)) {
    return absl::InvalidArgumentError("classical calibration needs eps0 > 0");
  }
  if (!(delta0 > 0.0 && delta0 < 1.0)) {
    return absl::InvalidArgumentError(
        "classical calibration needs delta0 in (0, 1)");
  }
  if (absl::Status s = CheckSensitivity(sensitivity); !s.ok()) return s;
  return std::sqrt(2.0 * std::log(1.25 / delta0)) * sensitivity / eps0;
}

absl::StatusOr<double> AnalyticGaussianSigma(double eps0, double delta0,
                                             double sensitivity) {
  if (!(eps0 >= 0.0) || !std::isfinite(eps0)) {
    return absl::InvalidArgumentError("eps0 must be finite and >= 0");
  }
  if (!(delta0 > 0.0 && delta0 < 1.0)) {
    return absl::InvalidArgumentError(
        "analytic calibration needs delta0 in (0, 1)");
  }
  if (absl::Status s = CheckSensitivity(sensitivity); !s.ok()) return s;
  absl::StatusOr<double> ratio = LargestRatioBelow(
      [eps0](double r) { return GaussianProfile(r, eps0); }, delta0);
  if (!ratio.ok()) return ratio.status();
  return sensitivity / *ratio;
}

absl::StatusOr<double> AnalyticLaplaceScale(double eps0, double delta0,
                                            double sensitivity) {
  if (!(eps0 >= 0.0) || !std::isfinite(eps0)) {
    return absl::InvalidArgumentError("eps0 must be finite and >= 0");
  }
  if (!(delta0 >= 0.0 && delta0 < 1.0)) {
    return absl::InvalidArgumentError("delta0 must lie in [0, 1)");
  }
  if (absl::Status s = CheckSensitivity(sensitivity); !s.ok()) return s;
  // Exact Laplace profile for 0 <= eps < r is 1 - exp((eps - r) / 2).
  const double ratio = eps0 - 2.0 * std::log1p(-delta0);
  if (!(ratio > 0.0)) {
    return absl::InvalidArgumentError("(eps0, delta0) = (0, 0) is unreachable");
  }
  return sensitivity / ratio;
}

absl::StatusOr<double> RdpGaussianSigma(double eps_rdp, double alpha,
                                        double sensitivity) {
  if (!(alpha > 1.0)) return absl::InvalidArgumentError("alpha must be > 1");
  if (!(eps_rdp > 0.0)) {
    return absl::InvalidArgumentError("RDP calibration needs eps > 0");
  }
  if (absl::Status s = CheckSensitivity(sensitivity); !s.ok()) return s;
  return sensitivity * std::sqrt(alpha / (2.0 * eps_rdp));
}

absl::StatusOr<double> RdpLaplaceScale(double eps_rdp, double alpha,
                                       double sensitivity) {
  if (!(alpha > 1.0)) return absl::InvalidArgumentError("alpha must be > 1");
  if (!(eps_rdp > 0.0)) {
    return absl::InvalidArgumentError("RDP calibration needs eps > 0");
  }
  if (absl::Status s = CheckSensitivity(sensitivity); !s.ok()) return s;
  absl::StatusOr<double> ratio = LargestRatioBelow(
      [alpha](double r) { return LaplaceRdp(r, alpha); }, eps_rdp);
  if (!ratio.ok()) return ratio.status();
  return sensitivity / *ratio;
}

absl::StatusOr<KernelSpec> CalibrateKernel(KernelSpec k) {
  if (k.calibration != Calibration::kExplicitScale && k.sensitivity > 0.0) {
    absl::StatusOr<double> scale;
    const bool gaussian = k.family == KernelFamily::kGaussian;
    if (k.calibration == Calibration::kClassical) {
      if (gaussian) {
        scale = ClassicalGaussianSigma(k.eps0, k.delta0, k.sensitivity);
      } else if (k.eps0 > 0.0) {
        scale = k.sensitivity / k.eps0;
      } else {
        scale = absl::InvalidArgumentError(
            "classical calibration needs eps0 > 0");
      }
    } else {
      scale = gaussian ? AnalyticGaussianSigma(k.eps0, k.delta0, k.sensitivity)
                       : AnalyticLaplaceScale(k.eps0, k.delta0, k.sensitivity);
    }
    if (!scale.ok()) return scale.status();
    k.scale = *scale;
  }
  if (absl::Status s = ValidateKernel(k); !s.ok()) return s;
  return k;
}

double KernelPdf(const KernelSpec& k, double center, double y) {
  const double z = (y - center) / k.scale;
  if (k.family == KernelFamily::kGaussian) {
    return StandardNormalPdf(z) / k.scale;
  }
  return 0.5 * std::exp(-std::abs(z)) / k.scale;
}

double KernelCdf(const KernelSpec& k, double center, double y) {
  const double z = (y - center) / k.scale;
  if (k.family == KernelFamily::kGaussian) return StandardNormalCdf(z);
  return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
}

double KernelSurvival(const KernelSpec& k, double center, double y) {
  const double z = (y - center) / k.scale;
  if (k.family == KernelFamily::kGaussian) return StandardNormalCdf(-z);
  return z > 0.0 ? 0.5 * std::exp(-z) : 1.0 - 0.5 * std::exp(z);
}

absl::StatusOr<double> KernelQuantile(const KernelSpec& k, double center,
                                      double u) {
  if (!(u > 0.0 && u < 1.0)) {
    return absl::OutOfRangeError("quantile level must lie in (0, 1)");
  }
  if (k.family == KernelFamily::kGaussian) {
    return center + k.scale * StandardNormalQuantile(u);
  }
  if (u < 0.5) return center + k.scale * std::log(2.0 * u);
  return center - k.scale * std::log(2.0 * (1.0 - u));
}

double GaussianProfile(double ratio, double eps) {
  if (ratio == 0.0) return eps < 0.0 ? -std::expm1(eps) : 0.0;
  const double first = StandardNormalCdf(ratio / 2.0 - eps / ratio);
  const double second =
      std::exp(eps + StandardNormalLogCdf(-ratio / 2.0 - eps / ratio));
  return std::clamp(first - second, 0.0, 1.0);
}

double KernelProfile(const KernelSpec& k, double eps) {
  if (k.family == KernelFamily::kGaussian) {
    return GaussianProfile(NoiseRatio(k), eps);
  }
  absl::StatusOr<PLDRepr> pld = KernelPld(k);
  return pld.ok() ? PldProfile(*pld, eps) : 1.0;
}

absl::StatusOr<double> KernelRdp(const KernelSpec& k, double alpha) {
  if (!(alpha > 1.0)) {
    return absl::OutOfRangeError("RDP order alpha must be > 1");
  }
  const double r = NoiseRatio(k);
  if (k.family == KernelFamily::kGaussian) return alpha * r * r / 2.0;
  return LaplaceRdp(r, alpha);
}

double KernelKl(const KernelSpec& k) {
  const double r = NoiseRatio(k);
  if (k.family == KernelFamily::kGaussian) return r * r / 2.0;
  return r + std::expm1(-r);
}

absl::StatusOr<PLDRepr> KernelPld(const KernelSpec& k, double grid_step) {
  if (!(grid_step > 0.0)) {
    return absl::InvalidArgumentError("grid step must be positive");
  }
  const double r = NoiseRatio(k);
  if (r == 0.0) {
    PLDRepr point = PLDRepr::PointMass(0.0);
    point.grid_step = grid_step;
    return point;
  }
  if (k.family == KernelFamily::kGaussian) {
    return PLDRepr::AnalyticGaussian(r * r / 2.0);
  }
  // Laplace at shift r (in units of b): loss +r with mass 1/2, -r with mass
  // e^{-r}/2, and density e^{(g - r)/2}/4 on (-r, r). Each bin's mass goes to
  // its upper edge.
  const double h = grid_step;
  const int64_t lo = static_cast<int64_t>(std::ceil(-r / h - 1e-9));
  const int64_t hi = static_cast<int64_t>(std::ceil(r / h - 1e-9));
  std::vector<double> losses;
  std::vector<double> masses;
  losses.reserve(hi - lo + 1);
  masses.reserve(hi - lo + 1);
  for (int64_t i = lo; i <= hi; ++i) {
    const double a = std::max(static_cast<double>(i - 1) * h, -r);
    const double b = std::min(static_cast<double>(i) * h, r);
    double m = 0.0;
    if (b > a) m = 0.5 * std::exp((a - r) / 2.0) * std::expm1((b - a) / 2.0);
    if (i == lo) m += 0.5 * std::exp(-r);
    if (i == hi) m += 0.5;
    losses.push_back(static_cast<double>(i) * h);
    masses.push_back(m);
  }
  return NormalizeGrid(std::move(losses), std::move(masses), 0.0, h);
}

}  // namespace pbdp
