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
// Privacy loss distributions: the law of log(P(y)/P'(y)) for y ~ P.

#ifndef PBDP_PLD_H_
#define PBDP_PLD_H_

#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace pbdp {

inline constexpr double kDefaultGridStep = 1e-3;
// Tail mass below which grid supports are truncated.
inline constexpr double kDefaultTailMass = 1e-12;

struct PLDRepr {
  enum class Kind { kAnalyticGaussian, kGrid };

  Kind kind = Kind::kGrid;
  // Analytic Gaussian: N(gauss_mean, gauss_var) with gauss_var = 2 * mean.
  double gauss_mean = 0.0;
  double gauss_var = 0.0;
  // Grid: sorted loss values and their masses.
  std::vector<double> grid_losses;
  std::vector<double> grid_masses;
  // Mass of outputs that are impossible under the neighbor (loss = +inf).
  double inf_mass = 0.0;
  // Positive when every loss is an integer multiple of this step.
  double grid_step = 0.0;

  static PLDRepr AnalyticGaussian(double eta);
  static PLDRepr PointMass(double loss);
};

double PldTotalMass(const PLDRepr& pld);
absl::Status ValidatePld(const PLDRepr& pld);

// delta(eps) = E[(1 - exp(eps - L))_+]. Analytic PLDs are integrated with
// adaptive Gauss-Kronrod quadrature.
double PldProfile(const PLDRepr& pld, double eps);

// Discretizes N(eta, 2 eta) onto multiples of `step`, rounding each bin's
// mass up to its upper edge. Tails below `tail_mass` are folded into the
// endpoint atoms.
PLDRepr DiscretizeGaussianPld(double eta, double step,
                              double tail_mass = kDefaultTailMass);

// Returns a grid representation; grids are returned unchanged.
PLDRepr ToGrid(const PLDRepr& pld, double step = kDefaultGridStep);

// Merges atoms with equal loss and sorts by loss.
PLDRepr NormalizeGrid(std::vector<double> losses, std::vector<double> masses,
                      double inf_mass, double grid_step);

// Law of the sum of independent losses. Both inputs must be grids on the same
// lattice.
absl::StatusOr<PLDRepr> ComposeGridPlds(const PLDRepr& a, const PLDRepr& b,
                                        double tail_mass = kDefaultTailMass);
absl::StatusOr<PLDRepr> SelfComposePld(const PLDRepr& pld, int times,
                                       double tail_mass = kDefaultTailMass);

}  // namespace pbdp

#endif  // PBDP_PLD_H_
