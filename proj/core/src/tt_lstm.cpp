// core/src/tt_lstm.cpp

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

#include "ttnet/tt_lstm.hpp"

#include <cmath>
#include <sstream>

namespace ttnet {

namespace {

inline Vector sigmoid(const Vector& z) {
  return (1.0 + (-z.array()).exp()).inverse().matrix();
}

std::int64_t product(const std::vector<int>& v) {
  std::int64_t r = 1;
  for (int x : v) r *= x;
  return r;
}

void check_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    std::ostringstream msg;
    msg << "lstm_step: non-finite " << what;
    throw NumericError(msg.str());
  }
}

}  // namespace

void TTLSTMCell::validate() const {
  if (hidden < 1 || input < 1)
    throw ShapeError("TTLSTMCell: hidden and input sizes must be >= 1");
  gates.validate();
  if (gates.shape.gate_fusion != 4)
    throw ShapeError("TTLSTMCell: gate map must fuse exactly 4 gates");
  if (gates.input_dim() != hidden + input)
    throw ShapeError("TTLSTMCell: gate map input must be hidden+input");
  if (gates.output_dim() != 4 * static_cast<std::int64_t>(hidden))
    throw ShapeError("TTLSTMCell: gate map output must be 4*hidden");
  if (gates.bias)
    throw ShapeError("TTLSTMCell: gate biases live outside the TT map");
  for (const Vector* b : {&b_i, &b_f, &b_o, &b_c})
    if (b->size() != hidden)
      throw ShapeError("TTLSTMCell: gate bias length must equal hidden");
}

TTLSTMCell make_tt_lstm(const TTLSTMPlan& plan, std::uint64_t seed) {
  if (plan.hidden < 1 || plan.input < 1)
    throw ShapeError("make_tt_lstm: hidden and input sizes must be >= 1");
  TTShape shape;
  shape.p = plan.concat_factors;
  shape.q = plan.hidden_factors;
  shape.ranks = plan.ranks;
  shape.gate_fusion = 4;
  shape.validate();
  if (shape.input_dim() != plan.hidden + plan.input)
    throw ShapeError("make_tt_lstm: concat factors must multiply to hidden+input");
  if (product(plan.hidden_factors) != plan.hidden)
    throw ShapeError("make_tt_lstm: hidden factors must multiply to hidden");

  TTLSTMCell cell;
  cell.hidden = plan.hidden;
  cell.input = plan.input;
  cell.gates = tt_random_init(shape, seed, InitScalePolicy::kGlorotChain,
                              /*with_bias=*/false);
  cell.b_i = Vector::Zero(plan.hidden);
  cell.b_f = Vector::Constant(plan.hidden, 1.0);
  cell.b_o = Vector::Zero(plan.hidden);
  cell.b_c = Vector::Zero(plan.hidden);
  cell.table1_input_factors =
      plan.table1_input_factors.empty()
          ? balanced_factors(plan.input, shape.order())
          : plan.table1_input_factors;
  return cell;
}

LSTMState lstm_step(const TTLSTMCell& cell, const Vector& x,
                    const LSTMState& state, LSTMStepCache* cache) {
  if (x.size() != cell.input)
    throw ShapeError("lstm_step: input length mismatch");
  if (state.h.size() != cell.hidden || state.c.size() != cell.hidden)
    throw ShapeError("lstm_step: state length mismatch");

  Vector concat(cell.hidden + cell.input);
  concat << state.h, x;

  TTLForwardCache ttl_cache;
  const Vector z =
      ttl_forward(cell.gates, concat, cache ? &ttl_cache : nullptr);
  const int h = cell.hidden;

  const Vector gate_i = sigmoid(z.segment(0, h) + cell.b_i);
  const Vector gate_f = sigmoid(z.segment(h, h) + cell.b_f);
  const Vector gate_o = sigmoid(z.segment(2 * h, h) + cell.b_o);
  const Vector gate_c = (z.segment(3 * h, h) + cell.b_c).array().tanh();

  LSTMState next;
  next.c = gate_i.cwiseProduct(gate_c) + gate_f.cwiseProduct(state.c);
  const Vector tanh_c = next.c.array().tanh();
  next.h = gate_o.cwiseProduct(tanh_c);
  check_finite(next.c, "cell state");
  check_finite(next.h, "hidden state");

  if (cache) {
    cache->ttl = std::move(ttl_cache);
    cache->gate_i = gate_i;
    cache->gate_f = gate_f;
    cache->gate_o = gate_o;
    cache->gate_c = gate_c;
    cache->c_prev = state.c;
    cache->c = next.c;
    cache->tanh_c = tanh_c;
  }
  return next;
}

LSTMState dense_lstm_step(const DenseLSTM& cell, const Vector& x,
                          const LSTMState& state) {
  const Eigen::Index h = cell.b_i.size();
  if (state.h.size() != h || state.c.size() != h)
    throw ShapeError("dense_lstm_step: state length mismatch");
  if (cell.w_i.rows() != h + x.size())
    throw ShapeError("dense_lstm_step: input length mismatch");

  Vector concat(h + x.size());
  concat << state.h, x;

  const Vector gate_i = sigmoid(cell.w_i.transpose() * concat + cell.b_i);
  const Vector gate_f = sigmoid(cell.w_f.transpose() * concat + cell.b_f);
  const Vector gate_o = sigmoid(cell.w_o.transpose() * concat + cell.b_o);
  const Vector gate_c =
      (cell.w_c.transpose() * concat + cell.b_c).array().tanh();

  LSTMState next;
  next.c = gate_i.cwiseProduct(gate_c) + gate_f.cwiseProduct(state.c);
  next.h = gate_o.cwiseProduct(next.c.array().tanh().matrix());
  return next;
}

DenseLSTM dense_from_tt(const TTLSTMCell& cell) {
  cell.validate();
  const Matrix fused = tt_reconstruct(cell.gates);
  const int h = cell.hidden;
  DenseLSTM dense;
  dense.w_i = fused.middleCols(0, h);
  dense.w_f = fused.middleCols(h, h);
  dense.w_o = fused.middleCols(2 * h, h);
  dense.w_c = fused.middleCols(3 * h, h);
  dense.b_i = cell.b_i;
  dense.b_f = cell.b_f;
  dense.b_o = cell.b_o;
  dense.b_c = cell.b_c;
  return dense;
}

std::int64_t dense_lstm_param_count(int hidden, int input) {
  return 4ll * hidden * (hidden + input) + 4ll * hidden;
}

RowMatrix lstm_sequence_forward(const TTLSTMCell& cell, const RowMatrix& xs,
                                SequenceCache* cache) {
  cell.validate();
  if (xs.rows() < 1) throw ShapeError("lstm_sequence_forward: empty sequence");
  if (xs.cols() != cell.input)
    throw ShapeError("lstm_sequence_forward: feature width mismatch");

  const Eigen::Index steps = xs.rows();
  RowMatrix hs(steps, cell.hidden);
  if (cache) {
    cache->steps.clear();
    cache->steps.resize(steps);
  }

  LSTMState state{Vector::Zero(cell.hidden), Vector::Zero(cell.hidden)};
  for (Eigen::Index t = 0; t < steps; ++t) {
    state = lstm_step(cell, xs.row(t).transpose(), state,
                      cache ? &cache->steps[t] : nullptr);
    hs.row(t) = state.h.transpose();
  }
  return hs;
}

LSTMSequenceGradients lstm_sequence_backward(const TTLSTMCell& cell,
                                             const SequenceCache& cache,
                                             const RowMatrix& dhs,
                                             int truncation_window) {
  cell.validate();
  const Eigen::Index steps = dhs.rows();
  if (static_cast<Eigen::Index>(cache.steps.size()) != steps)
    throw ShapeError("lstm_sequence_backward: cache does not match dhs");
  if (dhs.cols() != cell.hidden)
    throw ShapeError("lstm_sequence_backward: gradient width mismatch");
  if (truncation_window < 0)
    throw ShapeError("lstm_sequence_backward: negative truncation window");

  const int h = cell.hidden;
  LSTMSequenceGradients grads;
  grads.core_grads.resize(cell.gates.cores.size());
  for (std::size_t k = 0; k < cell.gates.cores.size(); ++k)
    grads.core_grads[k] = Vector::Zero(cell.gates.cores[k].size());
  grads.b_i = Vector::Zero(h);
  grads.b_f = Vector::Zero(h);
  grads.b_o = Vector::Zero(h);
  grads.b_c = Vector::Zero(h);
  grads.input_grads.resize(steps, cell.input);

  Vector dh_next = Vector::Zero(h);
  Vector dc_next = Vector::Zero(h);

  for (Eigen::Index t = steps - 1; t >= 0; --t) {
    const LSTMStepCache& step = cache.steps[t];
    const Vector dh = dhs.row(t).transpose() + dh_next;

    const Vector d_gate_o = dh.cwiseProduct(step.tanh_c);
    Vector dc = dc_next +
                dh.cwiseProduct(step.gate_o)
                    .cwiseProduct((1.0 - step.tanh_c.array().square()).matrix());

    const Vector d_gate_i = dc.cwiseProduct(step.gate_c);
    const Vector d_gate_c = dc.cwiseProduct(step.gate_i);
    const Vector d_gate_f = dc.cwiseProduct(step.c_prev);
    dc_next = dc.cwiseProduct(step.gate_f);

    // Pre-activation gradients in fused gate order (i, f, o, cbar).
    Vector dz(4 * h);
    dz.segment(0, h) =
        d_gate_i.cwiseProduct(step.gate_i)
            .cwiseProduct((1.0 - step.gate_i.array()).matrix());
    dz.segment(h, h) =
        d_gate_f.cwiseProduct(step.gate_f)
            .cwiseProduct((1.0 - step.gate_f.array()).matrix());
    dz.segment(2 * h, h) =
        d_gate_o.cwiseProduct(step.gate_o)
            .cwiseProduct((1.0 - step.gate_o.array()).matrix());
    dz.segment(3 * h, h) =
        d_gate_c.cwiseProduct((1.0 - step.gate_c.array().square()).matrix());

    grads.b_i += dz.segment(0, h);
    grads.b_f += dz.segment(h, h);
    grads.b_o += dz.segment(2 * h, h);
    grads.b_c += dz.segment(3 * h, h);

    const TTLGradients ttl_grads = ttl_backward(cell.gates, step.ttl, dz);
    for (std::size_t k = 0; k < grads.core_grads.size(); ++k)
      grads.core_grads[k] += ttl_grads.core_grads[k];

    dh_next = ttl_grads.input_grad.segment(0, h);
    grads.input_grads.row(t) =
        ttl_grads.input_grad.segment(h, cell.input).transpose();

    // Truncated BPTT: recurrent flow stops at window boundaries.
    if (truncation_window > 0 && t % truncation_window == 0) {
      dh_next.setZero();
      dc_next.setZero();
    }
  }
  return grads;
}

std::int64_t cell_param_count(const TTLSTMCell& cell, CountConvention mode) {
  cell.validate();
  if (mode == CountConvention::kModel)
    return param_count(cell.gates.shape, /*include_bias=*/false) +
           4ll * cell.hidden;
  TTShape table1;
  table1.p = cell.table1_input_factors;
  table1.q = cell.gates.shape.q;
  table1.ranks = cell.gates.shape.ranks;
  table1.gate_fusion = 4;
  if (product(table1.p) != cell.input)
    throw ShapeError(
        "cell_param_count: table1 factors do not multiply to the input size");
  return param_count(table1, /*include_bias=*/true);
}

}  // namespace ttnet
