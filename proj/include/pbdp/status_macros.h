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

#ifndef PBDP_STATUS_MACROS_H_
#define PBDP_STATUS_MACROS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define PBDP_RETURN_IF_ERROR(expr)                 \
  do {                                             \
    const absl::Status _pbdp_status = (expr);      \
    if (!_pbdp_status.ok()) return _pbdp_status;   \
  } while (0)

#define PBDP_STATUS_CONCAT_INNER_(a, b) a##b
#define PBDP_STATUS_CONCAT_(a, b) PBDP_STATUS_CONCAT_INNER_(a, b)

#define PBDP_ASSIGN_OR_RETURN_IMPL_(statusor, lhs, rexpr) \
  auto statusor = (rexpr);                                \
  if (!statusor.ok()) return statusor.status();           \
  lhs = std::move(statusor).value()

#define PBDP_ASSIGN_OR_RETURN(lhs, rexpr) \
  PBDP_ASSIGN_OR_RETURN_IMPL_(            \
      PBDP_STATUS_CONCAT_(_pbdp_statusor_, __LINE__), lhs, rexpr)

#endif  // PBDP_STATUS_MACROS_H_
