// core/src/tt_contract.hpp

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

#include "ttnet/common.hpp"
#include "ttnet/tt_linear.hpp"

namespace ttnet::detail {

/// Core reshaped for contraction: rows (j, b), columns (a, i). The forward
/// sweep multiplies it onto partials from the left; the backward sweep uses
/// its transpose.
RowMatrix contraction_matrix(const TTCore& core);

}  // namespace ttnet::detail
