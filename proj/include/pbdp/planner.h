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
// Budget-split search: choose the kernel budget eps0 that minimizes the total
// leakage of the boosted mechanism under a utility constraint.

#ifndef PBDP_PLANNER_H_
#define PBDP_PLANNER_H_

#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "pbdp/accounting.h"
#include "pbdp/kernels.h"
#include "pbdp/pb_mech.h"

namespace pbdp {

// Boosting rates at or above this cap are treated as infeasible.
inline constexpr double kMaxBoostingRate = 1.0 - 1e-12;

struct PlanRequest {
  KernelFamily kernel_family = KernelFamily::kGaussian;
  double sensitivity = 1.0;
  RegionSpec region;
  double rho = 0.9;
  PrivacyMode mode = PrivacyMode::kApproxDp;
  // Target delta in approx mode; also the kernel's delta0.
  double delta = 1e-5;
  double alpha = 2.0;
  double eps_max = 20.0;
  double tol = 1e-4;
  // Number of homogeneous folds accounted for.
  int compositions = 1;
  // Kernel calibration in approx mode (classical or analytic).
  Calibration calibration = Calibration::kAnalytic;
};

absl::Status ValidatePlanRequest(const PlanRequest& req);

struct LeakageEvaluation {
  bool feasible = false;
  double eps0 = 0.0;
  KernelSpec kernel;
  double min_pS = 0.0;
  double q = 0.0;
  LeakageParams leakage;
  PrivacyPoint total;
};

// Kernel calibrated to budget eps0 under the request's mode.
absl::StatusOr<KernelSpec> CalibrateForPlan(const PlanRequest& req,
                                            double eps0);

// Total leakage when the kernel spends eps0. Returns feasible = false when
// the confidence cannot be met without q reaching the cap.
absl::StatusOr<LeakageEvaluation> TotalLeakage(const PlanRequest& req,
                                               double eps0);

struct PlanResult {
  bool feasible = false;
  double eps0_opt = 0.0;
  double q_opt = 0.0;
  double min_pS = 0.0;
  KernelSpec kernel;
  LeakageParams leakage;
  PrivacyPoint total;
  // Set when the pre-scan was not unimodal and the search was restricted to
  // the bracket around the best scanned point.
  bool grid_fallback = false;
  int evaluations = 0;
  std::vector<std::string> notes;
};

// Ternary search over eps0 in [0, eps_max], preceded by a 16-point scan that
// checks unimodality.
absl::StatusOr<PlanResult> OptimizeEps0(const PlanRequest& req);

struct KernelOnlyResult {
  bool feasible = false;
  KernelSpec kernel;
  double min_pS = 0.0;
  PrivacyPoint total;
};

// The plain kernel with the most noise that still meets the confidence on
// its own, and its leakage.
absl::StatusOr<KernelOnlyResult> KernelOnlyPlan(const PlanRequest& req);

// Largest rho whose optimized leakage fits in eps_budget. Stops once rho is
// bracketed to 1e-4 and the leakage at the returned rho is within req.tol of
// the budget.
absl::StatusOr<double> InvertRho(const PlanRequest& req, double eps_budget);

enum class InvertRegionKind { kAbsolute, kFixedSymmetric };

// Smallest half-width tau (absolute, or fixed [-tau, tau]) whose plan fits in
// eps_budget at confidence req.rho, to 1e-4 in tau.
absl::StatusOr<RegionSpec> InvertRegion(const PlanRequest& req,
                                        double eps_budget,
                                        InvertRegionKind kind);

}  // namespace pbdp

#endif  // PBDP_PLANNER_H_
