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
// Additive-noise kernel mechanisms and their privacy curves.

#ifndef PBDP_KERNELS_H_
#define PBDP_KERNELS_H_

#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "pbdp/pld.h"

namespace pbdp {

enum class KernelFamily { kGaussian, kLaplace };

// How `scale` is obtained. kExplicitScale uses the stored value; the other
// modes derive it from (eps0, delta0, sensitivity).
enum class Calibration { kExplicitScale, kClassical, kAnalytic };

struct KernelSpec {
  KernelFamily family = KernelFamily::kGaussian;
  // Standard deviation for Gaussian, diversity b for Laplace.
  double scale = 1.0;
  double sensitivity = 1.0;
  double delta0 = 0.0;
  double eps0 = 0.0;
  Calibration calibration = Calibration::kExplicitScale;
};

absl::string_view KernelFamilyName(KernelFamily family);
absl::StatusOr<KernelFamily> ParseKernelFamily(absl::string_view name);
absl::string_view CalibrationName(Calibration calibration);
absl::StatusOr<Calibration> ParseCalibration(absl::string_view name);

// Sensitivity zero is accepted and yields identical neighboring outputs.
absl::Status ValidateKernel(const KernelSpec& k);

// sensitivity / scale.
double NoiseRatio(const KernelSpec& k);

// Fills in `scale` according to k.calibration and validates the result.
absl::StatusOr<KernelSpec> CalibrateKernel(KernelSpec k);

// sqrt(2 ln(1.25 / delta0)) * sensitivity / eps0.
absl::StatusOr<double> ClassicalGaussianSigma(double eps0, double delta0,
                                              double sensitivity);
// Smallest sigma whose exact profile satisfies delta(eps0) <= delta0. Defined
// for eps0 = 0 as well.
absl::StatusOr<double> AnalyticGaussianSigma(double eps0, double delta0,
                                             double sensitivity);
// Laplace scale b with exact profile delta(eps0) = delta0.
absl::StatusOr<double> AnalyticLaplaceScale(double eps0, double delta0,
                                            double sensitivity);
// Scales making the order-alpha Renyi divergence equal to `eps_rdp`.
absl::StatusOr<double> RdpGaussianSigma(double eps_rdp, double alpha,
                                        double sensitivity);
absl::StatusOr<double> RdpLaplaceScale(double eps_rdp, double alpha,
                                       double sensitivity);

double KernelPdf(const KernelSpec& k, double center, double y);
double KernelCdf(const KernelSpec& k, double center, double y);
// 1 - KernelCdf without cancellation in the upper tail.
double KernelSurvival(const KernelSpec& k, double center, double y);
absl::StatusOr<double> KernelQuantile(const KernelSpec& k, double center,
                                      double u);

// Tight profile of the Gaussian mechanism with noise ratio r, valid for any
// finite eps. r = 0 gives (1 - e^eps)_+.
double GaussianProfile(double ratio, double eps);

double KernelProfile(const KernelSpec& k, double eps);
absl::StatusOr<double> KernelRdp(const KernelSpec& k, double alpha);
// KL divergence between neighboring outputs; the alpha -> 1 limit of the RDP
// curve.
double KernelKl(const KernelSpec& k);
absl::StatusOr<PLDRepr> KernelPld(const KernelSpec& k,
                                  double grid_step = kDefaultGridStep);

}  // namespace pbdp

#endif  // PBDP_KERNELS_H_
