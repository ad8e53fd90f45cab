// tools/gradcheck.hpp

// Copyright 2026  ttnet contributors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ttnet::tools {

struct GradCheckResult {
  std::string name;
  double max_relative_error = 0.0;
};

inline constexpr double kGradCheckTolerance = 1e-5;

/// TT-layer finite-difference matrix (orders 1..4, ranks 1/2/4) plus
/// single-step and 3-step recurrent checks.
std::vector<GradCheckResult> gradcheck_small(std::uint64_t seed,
                                             bool inject_fault);

/// End-to-end check on the reduced mask-estimation stack, with dropout
/// active under a fixed seed.
std::vector<GradCheckResult> gradcheck_reduced(std::uint64_t seed,
                                               bool inject_fault);

}  // namespace ttnet::tools
