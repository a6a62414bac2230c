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

#include "pbdp/planner.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "pbdp/accounting.h"
#include "pbdp/kernels.h"
#include "pbdp/pb_mech.h"
#include "pbdp/status_macros.h"

namespace pbdp {
namespace {

constexpr int kScanPoints = 16;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRhoTolerance = 1e-4;
constexpr double kTauTolerance = 1e-4;
constexpr int kMaxInverseSteps = 200;

double Value(const LeakageEvaluation& e) {
  return e.feasible ? e.total.eps : kInf;
}

// True when the finite tail of `values` falls then rises, up to `slack`.
bool IsUnimodal(const std::vector<double>& values, double slack) {
  size_t start = 0;
  while (start < values.size() && values[start] == kInf) ++start;
  if (start == values.size()) return true;
  size_t best = start;
  for (size_t i = start; i < values.size(); ++i) {
    if (values[i] < values[best]) best = i;
  }
  for (size_t i = start + 1; i <= best; ++i) {
    if (values[i] > values[i - 1] + slack) return false;
  }
  for (size_t i = best + 1; i < values.size(); ++i) {
    if (values[i] == kInf || values[i] + slack < values[i - 1]) return false;
  }
  return true;
}

absl::StatusOr<PrivacyPoint> LeakageOf(
    const PlanRequest& req, const KernelSpec& k, const LeakageParams& lp) {
  PrivacyPoint point;
  point.mode = req.mode;
  if (req.mode == PrivacyMode::kRdp) {
    PBDP_ASSIGN_OR_RETURN(const double per_fold, PbRdp(k, lp, req.alpha));
    point.eps = req.compositions * per_fold;
    point.alpha = req.alpha;
    return point;
  }
  PBDP_ASSIGN_OR_RETURN(
      const PbCompositionAccountant acc,
      PbCompositionAccountant::Create(k, lp, req.compositions));
  PBDP_ASSIGN_OR_RETURN(point.eps, acc.Epsilon(req.delta, req.tol * 1e-2));
  point.delta = req.delta;
  return point;
}

}  // namespace

absl::Status ValidatePlanRequest(const PlanRequest& req) {
  PBDP_RETURN_IF_ERROR(ValidateRegion(req.region));
  if (!(req.sensitivity > 0.0) || !std::isfinite(req.sensitivity)) {
    return absl::InvalidArgumentError("sensitivity must be positive");
  }
  if (!(req.rho > 0.0 && req.rho <= 1.0)) {
    return absl::InvalidArgumentError("rho must lie in (0, 1]");
  }
  if (!(req.tol > 0.0 && req.tol < req.eps_max)) {
    return absl::InvalidArgumentError("need 0 < tol < eps_max");
  }
  if (req.compositions < 1) {
    return absl::InvalidArgumentError("compositions must be >= 1");
  }
  if (req.mode == PrivacyMode::kApproxDp) {
    if (!(req.delta > 0.0 && req.delta < 1.0)) {
      return absl::InvalidArgumentError("delta must lie in (0, 1)");
    }
    if (req.calibration == Calibration::kExplicitScale) {
      return absl::InvalidArgumentError(
          "planning needs classical or analytic calibration");
    }
  } else if (!(req.alpha > 1.0)) {
    return absl::InvalidArgumentError("alpha must be > 1");
  }
  return absl::OkStatus();
}

absl::StatusOr<KernelSpec> CalibrateForPlan(const PlanRequest& req,
                                            double eps0) {
  KernelSpec k;
  k.family = req.kernel_family;
  k.sensitivity = req.sensitivity;
  k.eps0 = eps0;
  if (req.mode == PrivacyMode::kRdp) {
    PBDP_ASSIGN_OR_RETURN(
        k.scale, req.kernel_family == KernelFamily::kGaussian
                     ? RdpGaussianSigma(eps0, req.alpha, req.sensitivity)
                     : RdpLaplaceScale(eps0, req.alpha, req.sensitivity));
    PBDP_RETURN_IF_ERROR(ValidateKernel(k));
    return k;
  }
  k.delta0 = req.delta;
  k.calibration = req.calibration;
  return CalibrateKernel(k);
}

absl::StatusOr<LeakageEvaluation> TotalLeakage(const PlanRequest& req,
                                               double eps0) {
  PBDP_RETURN_IF_ERROR(ValidatePlanRequest(req));
  if (!(eps0 > 0.0 && eps0 <= req.eps_max)) {
    return absl::InvalidArgumentError("eps0 must lie in (0, eps_max]");
  }
  LeakageEvaluation out;
  out.eps0 = eps0;
  out.total.mode = req.mode;
  absl::StatusOr<KernelSpec> kernel = CalibrateForPlan(req, eps0);
  // A budget too small to calibrate leaves no feasible kernel.
  if (!kernel.ok()) return out;
  out.kernel = *kernel;
  PBDP_ASSIGN_OR_RETURN(const WorstCase wc, WorstCaseMass(*kernel, req.region));
  out.min_pS = wc.min_mass;
  PBDP_ASSIGN_OR_RETURN(out.q, BoostingRate(wc.min_mass, req.rho));
  if (out.q >= kMaxBoostingRate) return out;
  absl::StatusOr<LeakageParams> leakage =
      ComputeLeakageParams(*kernel, req.region, out.q);
  // Weights that do not form a distribution leave the point unaccountable.
  if (absl::IsFailedPrecondition(leakage.status())) return out;
  if (!leakage.ok()) return leakage.status();
  out.leakage = *leakage;
  absl::StatusOr<PrivacyPoint> total = LeakageOf(req, *kernel, out.leakage);
  if (!total.ok()) {
    if (absl::IsOutOfRange(total.status())) return out;
    return total.status();
  }
  out.total = *total;
  out.feasible = true;
  return out;
}

absl::StatusOr<PlanResult> OptimizeEps0(const PlanRequest& req) {
  PBDP_RETURN_IF_ERROR(ValidatePlanRequest(req));
  PlanResult result;
  LeakageEvaluation best;
  auto evaluate = [&](double eps0) -> absl::StatusOr<double> {
    PBDP_ASSIGN_OR_RETURN(const LeakageEvaluation e, TotalLeakage(req, eps0));
    ++result.evaluations;
    if (e.feasible && (!best.feasible || e.total.eps < best.total.eps)) {
      best = e;
    }
    return Value(e);
  };

  std::vector<double> grid(kScanPoints);
  std::vector<double> scan(kScanPoints);
  for (int i = 0; i < kScanPoints; ++i) {
    grid[i] = req.eps_max * (i + 1) / kScanPoints;
    PBDP_ASSIGN_OR_RETURN(scan[i], evaluate(grid[i]));
  }

  double lo = 0.0;
  double hi = req.eps_max;
  if (!IsUnimodal(scan, 1e-9)) {
    const int m = static_cast<int>(
        std::min_element(scan.begin(), scan.end()) - scan.begin());
    lo = m == 0 ? 0.0 : grid[m - 1];
    hi = m + 1 < kScanPoints ? grid[m + 1] : req.eps_max;
    result.grid_fallback = true;
    result.notes.push_back(absl::StrFormat(
        "leakage scan over eps0 is not unimodal; searching [%g, %g] around "
        "the best scanned point",
        lo, hi));
  }

  while (hi - lo > req.tol) {
    const double e1 = lo + (hi - lo) / 3.0;
    const double e2 = hi - (hi - lo) / 3.0;
    PBDP_ASSIGN_OR_RETURN(const double f1, evaluate(e1));
    PBDP_ASSIGN_OR_RETURN(const double f2, evaluate(e2));
    if (f1 > f2) {
      lo = e1;
    } else if (f1 < f2) {
      hi = e2;
    } else if (f1 == kInf) {
      // Both infeasible: infeasibility sits at small eps0.
      lo = e1;
    } else {
      lo = e1;
      hi = e2;
    }
  }
  PBDP_RETURN_IF_ERROR(evaluate(0.5 * (lo + hi)).status());

  if (!best.feasible) {
    result.notes.push_back("no feasible eps0 in (0, eps_max]");
    return result;
  }
  result.feasible = true;
  result.eps0_opt = best.eps0;
  result.q_opt = best.q;
  result.min_pS = best.min_pS;
  result.kernel = best.kernel;
  result.leakage = best.leakage;
  result.total = best.total;
  return result;
}

absl::StatusOr<KernelOnlyResult> KernelOnlyPlan(const PlanRequest& req) {
  PBDP_RETURN_IF_ERROR(ValidatePlanRequest(req));
  KernelOnlyResult out;
  out.total.mode = req.mode;
  KernelSpec k;
  k.family = req.kernel_family;
  k.sensitivity = req.sensitivity;
  auto mass_at = [&](double scale) -> absl::StatusOr<double> {
    k.scale = scale;
    PBDP_ASSIGN_OR_RETURN(const WorstCase wc, WorstCaseMass(k, req.region));
    return wc.min_mass;
  };
  // Mass shrinks as noise grows. Bracket the largest scale meeting rho.
  double lo = 1e-12;
  PBDP_ASSIGN_OR_RETURN(double mass, mass_at(lo));
  if (mass < req.rho) return out;
  double hi = 1.0;
  PBDP_ASSIGN_OR_RETURN(mass, mass_at(hi));
  while (mass >= req.rho) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) return absl::InternalError("kernel scale diverged");
    PBDP_ASSIGN_OR_RETURN(mass, mass_at(hi));
  }
  for (int i = 0; i < 400 && hi / lo > 1.0 + 1e-14; ++i) {
    const double mid = std::sqrt(lo * hi);
    PBDP_ASSIGN_OR_RETURN(mass, mass_at(mid));
    if (mass >= req.rho) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  k.scale = lo;
  PBDP_ASSIGN_OR_RETURN(out.min_pS, mass_at(lo));
  out.kernel = k;
  const LeakageParams none;
  absl::StatusOr<PrivacyPoint> total = LeakageOf(req, k, none);
  if (!total.ok()) {
    if (absl::IsOutOfRange(total.status())) return out;
    return total.status();
  }
  out.total = *total;
  out.feasible = true;
  return out;
}

absl::StatusOr<double> InvertRho(const PlanRequest& req, double eps_budget) {
  if (!(eps_budget > 0.0)) {
    return absl::InvalidArgumentError("budget must be positive");
  }
  PlanRequest probe = req;
  auto leakage = [&](double rho) -> absl::StatusOr<double> {
    probe.rho = rho;
    PBDP_ASSIGN_OR_RETURN(const PlanResult plan, OptimizeEps0(probe));
    return plan.feasible ? plan.total.eps : kInf;
  };
  double lo = 1e-6;
  PBDP_ASSIGN_OR_RETURN(double f_lo, leakage(lo));
  if (f_lo > eps_budget) {
    return absl::FailedPreconditionError(
        "budget is infeasible even for vanishing confidence");
  }
  double hi = kMaxBoostingRate;
  PBDP_ASSIGN_OR_RETURN(const double f_hi, leakage(hi));
  if (f_hi <= eps_budget) return hi;
  for (int i = 0; i < kMaxInverseSteps; ++i) {
    if (hi - lo <= kRhoTolerance && eps_budget - f_lo <= req.tol) break;
    const double mid = 0.5 * (lo + hi);
    PBDP_ASSIGN_OR_RETURN(const double f_mid, leakage(mid));
    if (f_mid <= eps_budget) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

absl::StatusOr<RegionSpec> InvertRegion(const PlanRequest& req,
                                        double eps_budget,
                                        InvertRegionKind kind) {
  if (!(eps_budget > 0.0)) {
    return absl::InvalidArgumentError("budget must be positive");
  }
  if (req.rho >= 1.0) {
    return absl::FailedPreconditionError(
        "rho = 1 needs q = 1, which has unbounded loss");
  }
  PlanRequest probe = req;
  auto region_for = [kind](double tau) {
    RegionSpec r;
    if (kind == InvertRegionKind::kAbsolute) {
      r.kind = RegionKind::kAbsolute;
      r.tau = tau;
    } else {
      r.kind = RegionKind::kFixed;
      r.tau_l = -tau;
      r.tau_u = tau;
    }
    return r;
  };
  auto fits = [&](double tau) -> absl::StatusOr<bool> {
    probe.region = region_for(tau);
    PBDP_ASSIGN_OR_RETURN(const PlanResult plan, OptimizeEps0(probe));
    return plan.feasible && plan.total.eps <= eps_budget;
  };
  double hi = 1.0;
  PBDP_ASSIGN_OR_RETURN(bool ok, fits(hi));
  while (!ok) {
    hi *= 2.0;
    if (hi > 1e6) {
      return absl::FailedPreconditionError(
          "no region width meets the budget at this confidence");
    }
    PBDP_ASSIGN_OR_RETURN(ok, fits(hi));
  }
  double lo = 0.0;
  for (int i = 0; i < kMaxInverseSteps && hi - lo > kTauTolerance; ++i) {
    const double mid = 0.5 * (lo + hi);
    PBDP_ASSIGN_OR_RETURN(ok, fits(mid));
    if (ok) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return region_for(hi);
}

}  // namespace pbdp
