// core/include/ttnet/tt_lstm.hpp

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
#include <vector>

#include "ttnet/common.hpp"
#include "ttnet/tt_grad.hpp"
#include "ttnet/tt_linear.hpp"

namespace ttnet {

struct LSTMState {
  Vector h;
  Vector c;
};

/// Construction plan for a TT-LSTM cell. concat_factors factor hidden+input
/// (the recurrent map's input), hidden_factors factor the per-gate output.
/// table1_input_factors factor the layer input alone; they drive the
/// published parameter-counting convention and default to a balanced
/// factorization when left empty.
struct TTLSTMPlan {
  int hidden = 0;
  int input = 0;
  std::vector<int> concat_factors;
  std::vector<int> hidden_factors;
  std::vector<int> ranks;
  std::vector<int> table1_input_factors;
};

/// Recurrent cell whose four gate maps are stored as one gate-fused tensor
/// train over the concatenated [h, x] vector. Gate order is fixed as
/// (input, forget, output, candidate) everywhere: in the fused output, in
/// serialization and in the gradient layout. Biases stay dense.
struct TTLSTMCell {
  int hidden = 0;
  int input = 0;
  TTLinear gates;  ///< gate_fusion == 4; maps hidden+input -> 4*hidden
  Vector b_i, b_f, b_o, b_c;
  std::vector<int> table1_input_factors;

  void validate() const;
};

/// Seeded cell init: Glorot-chain cores, forget bias 1.0, other biases zero.
TTLSTMCell make_tt_lstm(const TTLSTMPlan& plan, std::uint64_t seed);

/// Everything one step must retain for backpropagation through time.
struct LSTMStepCache {
  TTLForwardCache ttl;
  Vector gate_i, gate_f, gate_o, gate_c;  ///< post-activation gates
  Vector c_prev, c, tanh_c;
};

/// One recurrence step:
///   i,f,o = sigmoid, cbar = tanh of the fused TT map on [h_prev, x] plus
///   per-gate bias; c = i.*cbar + f.*c_prev; h = o.*tanh(c).
LSTMState lstm_step(const TTLSTMCell& cell, const Vector& x,
                    const LSTMState& state, LSTMStepCache* cache = nullptr);

/// Uncompressed baseline cell with explicit per-gate matrices, stored
/// input-major: w(i, j) weights input i into unit j.
struct DenseLSTM {
  Matrix w_i, w_f, w_o, w_c;  ///< (hidden+input) x hidden
  Vector b_i, b_f, b_o, b_c;
};

LSTMState dense_lstm_step(const DenseLSTM& cell, const Vector& x,
                          const LSTMState& state);

/// Oracle builder: reconstructs the fused gate map and slices it into the
/// four dense gate matrices. Subject to the reconstruction entry cap.
DenseLSTM dense_from_tt(const TTLSTMCell& cell);

/// 4*hidden*(hidden+input) weights plus 4*hidden biases.
std::int64_t dense_lstm_param_count(int hidden, int input);

struct SequenceCache {
  std::vector<LSTMStepCache> steps;
};

/// Runs the recurrence over xs (T x input) from a zero initial state and
/// returns the hidden trajectory (T x hidden). Throws on an empty sequence.
RowMatrix lstm_sequence_forward(const TTLSTMCell& cell, const RowMatrix& xs,
                                SequenceCache* cache = nullptr);

/// Gradients of a summed per-step objective with upstream dL/dh_t rows.
struct LSTMSequenceGradients {
  std::vector<Vector> core_grads;  ///< matches cell.gates core layout
  Vector b_i, b_f, b_o, b_c;
  RowMatrix input_grads;  ///< T x input
};

/// Full backpropagation through time. truncation_window == 0 propagates
/// recurrent gradients across the whole sequence; w > 0 cuts the recurrent
/// flow at every w-step boundary (counting from the sequence start).
LSTMSequenceGradients lstm_sequence_backward(const TTLSTMCell& cell,
                                             const SequenceCache& cache,
                                             const RowMatrix& dhs,
                                             int truncation_window = 0);

enum class CountConvention {
  kModel,   ///< exact stored parameters of the cell as built
  kTable1,  ///< published convention: fused TT over the layer input only
};

std::int64_t cell_param_count(const TTLSTMCell& cell, CountConvention mode);

}  // namespace ttnet
