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

#include "pbdp/cases.h"

#include "absl/status/statusor.h"
#include "pbdp/accounting.h"
#include "pbdp/pb_mech.h"
#include "pbdp/status_macros.h"

namespace pbdp {

absl::StatusOr<CaseConfig> ResolveCase(const RegionSpec& region,
                                       const KernelSpec& kernel, double rho) {
  CaseConfig c;
  c.region = region;
  c.kernel = kernel;
  c.rho = rho;
  PBDP_ASSIGN_OR_RETURN(const WorstCase wc, WorstCaseMass(kernel, region));
  c.min_pS = wc.min_mass;
  c.qx_star = wc.qx_star;
  PBDP_ASSIGN_OR_RETURN(c.q, BoostingRate(wc.min_mass, rho));
  PBDP_ASSIGN_OR_RETURN(c.leakage, ComputeLeakageParams(kernel, region, c.q));
  return c;
}

}  // namespace pbdp
