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

#ifndef PBDP_NORMAL_H_
#define PBDP_NORMAL_H_

namespace pbdp {

// Standard normal helpers shared by the Gaussian kernel and its privacy
// curves.
double StandardNormalPdf(double x);
double StandardNormalCdf(double x);
// log(Phi(x)), accurate far into the lower tail where Phi underflows.
double StandardNormalLogCdf(double x);
// Inverse of StandardNormalCdf on (0, 1).
double StandardNormalQuantile(double u);

}  // namespace pbdp

#endif  // PBDP_NORMAL_H_
