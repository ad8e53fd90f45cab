// core/src/tt_grad.cpp

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

#include "ttnet/tt_grad.hpp"

#include <cmath>
#include <sstream>

#include "tt_contract.hpp"

namespace ttnet {

TTLGradients ttl_backward(const TTLinear& ttl, const TTLForwardCache& cache,
                          const Vector& dy) {
  ttl.validate();
  const int d = ttl.shape.order();
  if (static_cast<int>(cache.partials.size()) != d + 1)
    throw ShapeError("ttl_backward: forward cache missing or incomplete");
  if (cache.partials.front().size() != ttl.input_dim())
    throw ShapeError("ttl_backward: cache does not match this layer");
  if (dy.size() != ttl.output_dim())
    throw ShapeError("ttl_backward: upstream gradient length mismatch");

  TTLGradients grads;
  grads.core_grads.resize(d);
  if (ttl.bias) grads.bias_grad = dy;

  // Sweep right to left. `current` carries the contraction of dy with cores
  // k+1..d and has the same index layout as the forward partial B_k:
  // [j_prefix][rank][remaining input extents].
  std::int64_t p_rest = 1;
  std::int64_t j_done = ttl.output_dim();
  Vector current = dy;

  for (int k = d - 1; k >= 0; --k) {
    const TTCore& core = ttl.cores[k];
    j_done /= core.fused_q;
    const RowMatrix contract = detail::contraction_matrix(core);

    const std::int64_t in_block =
        static_cast<std::int64_t>(core.fused_q) * core.r_out * p_rest;
    const std::int64_t out_block =
        static_cast<std::int64_t>(core.r_in) * core.p * p_rest;
    const Vector& forward_partial = cache.partials[k];
    if (forward_partial.size() != j_done * out_block)
      throw ShapeError("ttl_backward: cached partial has unexpected size");

    Vector next(j_done * out_block);
    RowMatrix core_grad(static_cast<Eigen::Index>(core.r_in) * core.p,
                        static_cast<Eigen::Index>(core.fused_q) * core.r_out);
    core_grad.setZero();

    for (std::int64_t jp = 0; jp < j_done; ++jp) {
      Eigen::Map<const RowMatrix> in(current.data() + jp * in_block,
                                     static_cast<Eigen::Index>(core.fused_q) *
                                         core.r_out,
                                     p_rest);
      Eigen::Map<RowMatrix> out(next.data() + jp * out_block,
                                static_cast<Eigen::Index>(core.r_in) * core.p,
                                p_rest);
      out.noalias() = contract.transpose() * in;

      Eigen::Map<const RowMatrix> fwd(forward_partial.data() + jp * out_block,
                                      static_cast<Eigen::Index>(core.r_in) *
                                          core.p,
                                      p_rest);
      core_grad.noalias() += fwd * in.transpose();
    }

    // Scatter (a*p + i, j*r_out + b) into the core's (i, j, a, b) layout.
    Vector& g = grads.core_grads[k];
    g.resize(core.size());
    for (int i = 0; i < core.p; ++i)
      for (int j = 0; j < core.fused_q; ++j)
        for (int a = 0; a < core.r_in; ++a)
          for (int b = 0; b < core.r_out; ++b)
            g[core.flat_index(i, j, a, b)] =
                core_grad(static_cast<Eigen::Index>(a) * core.p + i,
                          static_cast<Eigen::Index>(j) * core.r_out + b);

    current = std::move(next);
    p_rest *= core.p;
  }

  grads.input_grad = std::move(current);
  return grads;
}

double finite_diff_check(const DiffObjective& objective,
                         std::span<Vector* const> params, double epsilon,
                         double denominator_floor) {
  if (epsilon <= 0.0) throw ShapeError("finite_diff_check: epsilon must be > 0");
  if (denominator_floor <= 0.0)
    throw ShapeError("finite_diff_check: denominator floor must be > 0");
  const std::vector<Vector> analytic = objective.gradient();
  if (analytic.size() != params.size())
    throw ShapeError("finite_diff_check: gradient arity mismatch");

  double max_rel = 0.0;
  for (std::size_t n = 0; n < params.size(); ++n) {
    Vector& param = *params[n];
    if (analytic[n].size() != param.size())
      throw ShapeError("finite_diff_check: gradient extent mismatch");
    for (Eigen::Index idx = 0; idx < param.size(); ++idx) {
      const double saved = param[idx];
      param[idx] = saved + epsilon;
      const double up = objective.loss();
      param[idx] = saved - epsilon;
      const double down = objective.loss();
      param[idx] = saved;
      if (!std::isfinite(up) || !std::isfinite(down))
        throw NumericError("finite_diff_check: non-finite loss");
      const double numeric = (up - down) / (2.0 * epsilon);
      const double a = analytic[n][idx];
      const double rel =
          std::abs(a - numeric) /
          std::max({std::abs(a), std::abs(numeric), denominator_floor});
      max_rel = std::max(max_rel, rel);
    }
  }
  return max_rel;
}

void sgd_momentum_step(std::span<Vector* const> params,
                       std::span<const Vector> grads, OptimizerState& state) {
  if (params.size() != grads.size())
    throw ShapeError("sgd_momentum_step: params/grads arity mismatch");
  if (state.clip_norm <= 0.0)
    throw ShapeError("sgd_momentum_step: clip_norm must be > 0");
  if (state.velocity.empty()) {
    state.velocity.resize(params.size());
    for (std::size_t n = 0; n < params.size(); ++n)
      state.velocity[n] = Vector::Zero(params[n]->size());
  }
  if (state.velocity.size() != params.size())
    throw ShapeError("sgd_momentum_step: optimizer state arity mismatch");

  double sq_norm = 0.0;
  for (const Vector& g : grads) {
    const double s = g.squaredNorm();
    if (!std::isfinite(s))
      throw NumericError("sgd_momentum_step: non-finite gradient");
    sq_norm += s;
  }
  const double norm = std::sqrt(sq_norm);
  const double scale =
      norm > state.clip_norm ? state.clip_norm / norm : 1.0;

  for (std::size_t n = 0; n < params.size(); ++n) {
    Vector& v = state.velocity[n];
    Vector& p = *params[n];
    if (v.size() != p.size() || grads[n].size() != p.size())
      throw ShapeError("sgd_momentum_step: extent mismatch");
    v = state.momentum * v - state.learning_rate * scale * grads[n];
    p += v;
  }
}

}  // namespace ttnet
