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

#ifndef PBDP_CASES_H_
#define PBDP_CASES_H_

#include "absl/status/statusor.h"
#include "pbdp/accounting.h"
#include "pbdp/kernels.h"
#include "pbdp/pb_mech.h"

namespace pbdp {

// A region/kernel/confidence triple with everything the accountant needs.
struct CaseConfig {
  RegionSpec region;
  KernelSpec kernel;
  double rho = 0.0;
  double min_pS = 0.0;
  double qx_star = 0.0;
  double q = 0.0;
  LeakageParams leakage;
};

// Worst-case mass, boosting rate, then leakage constants, in that order.
absl::StatusOr<CaseConfig> ResolveCase(const RegionSpec& region,
                                       const KernelSpec& kernel, double rho);

}  // namespace pbdp

#endif  // PBDP_CASES_H_
