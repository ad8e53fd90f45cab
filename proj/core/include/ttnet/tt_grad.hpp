// core/include/ttnet/tt_grad.hpp

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

#include <functional>
#include <span>
#include <vector>

#include "ttnet/common.hpp"
#include "ttnet/tt_linear.hpp"

namespace ttnet {

/// Gradients of a scalar objective through one TT layer application.
/// core_grads[k] matches cores[k].data layout exactly; bias_grad is empty
/// when the layer has no bias.
struct TTLGradients {
  std::vector<Vector> core_grads;
  Vector bias_grad;
  Vector input_grad;
};

/// One backward sweep given the upstream gradient dy. Reuses the partial
/// contractions cached by ttl_forward; the transposed-map action on dy
/// (the input gradient) falls out of the same sweep, W is never formed.
/// Throws ShapeError when the cache does not belong to a forward pass of
/// this layer.
TTLGradients ttl_backward(const TTLinear& ttl, const TTLForwardCache& cache,
                          const Vector& dy);

/// A scalar objective with an analytic gradient, both pure functions of the
/// parameter arrays the caller owns.
struct DiffObjective {
  std::function<double()> loss;
  std::function<std::vector<Vector>()> gradient;  ///< one entry per param array
};

/// Central-difference verification of objective.gradient. Returns the max
/// over all entries of |analytic - numeric| / max(|analytic|, |numeric|,
/// denominator_floor). Parameters are restored on exit. Throws NumericError
/// when the loss evaluates non-finite.
///
/// The default floor keeps the comparison fully relative. Deep composed
/// objectives produce entries below the central-difference noise level
/// u*|loss|/epsilon (~1e-11 for unit-scale losses); checks on such
/// objectives pass a floor around 1e-5 so those entries are held to
/// absolute agreement of tolerance*floor instead of drowning in roundoff.
double finite_diff_check(const DiffObjective& objective,
                         std::span<Vector* const> params, double epsilon,
                         double denominator_floor = 1e-12);

/// Momentum-SGD state. Velocity buffers are sized on first use and must
/// keep matching the parameter extents afterwards. Single-writer.
struct OptimizerState {
  double learning_rate = 0.05;
  double momentum = 0.9;
  double clip_norm = 5.0;  ///< global gradient-norm ceiling; must be > 0
  std::vector<Vector> velocity;
};

/// Clips the stacked gradient to clip_norm (global L2), then
/// v <- momentum*v - lr*g and p <- p + v, in order. Deterministic.
/// Throws NumericError on non-finite gradients.
void sgd_momentum_step(std::span<Vector* const> params,
                       std::span<const Vector> grads, OptimizerState& state);

}  // namespace ttnet
