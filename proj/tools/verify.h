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

#ifndef TSDP_TOOLS_VERIFY_H_
#define TSDP_TOOLS_VERIFY_H_

#include <cstdint>
#include <ostream>

namespace tsdp {

// Cross-checks analytic weights against enumeration, closed-form divergences
// against quadrature, and profile axioms on a fixed set of configs. Prints
// one PASS/FAIL line per check; returns true if all pass. Enumerations larger
// than `budget` outcomes are skipped.
bool RunVerification(int64_t budget, std::ostream& out);

}  // namespace tsdp

#endif  // TSDP_TOOLS_VERIFY_H_
