//
// Copyright 2026 The tsdp Authors.
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

#ifndef TSDP_STATUS_MACROS_H_
#define TSDP_STATUS_MACROS_H_

#include "absl/status/status.h"

#define TSDP_RETURN_IF_ERROR(expr)                   \
  do {                                               \
    if (absl::Status _status = (expr); !_status.ok()) \
      return _status;                                \
  } while (false)

#define TSDP_CONCAT_INNER(a, b) a##b
#define TSDP_CONCAT(a, b) TSDP_CONCAT_INNER(a, b)

#define TSDP_ASSIGN_OR_RETURN(lhs, expr) \
  TSDP_ASSIGN_OR_RETURN_IMPL(TSDP_CONCAT(_status_or_, __LINE__), lhs, expr)

#define TSDP_ASSIGN_OR_RETURN_IMPL(tmp, lhs, expr) \
  auto tmp = (expr);                               \
  if (!tmp.ok()) return tmp.status();              \
  lhs = *std::move(tmp)

#endif  // TSDP_STATUS_MACROS_H_
