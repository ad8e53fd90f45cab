// core/include/ttnet/tensornet.hpp

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

#include "ttnet/common.hpp"
#include "ttnet/tt_grad.hpp"
#include "ttnet/tt_linear.hpp"
#include "ttnet/tt_lstm.hpp"

namespace ttnet {

/// Factorization plan for one TT dense layer.
struct TTPlan {
  std::vector<int> p, q, ranks;
};

/// Architecture description: a stack of TT-LSTM layers, one ReLU dense
/// layer and a sigmoid output layer, all TT-factorized.
struct ModelConfig {
  int feature_dim = 768;
  int mask_dim = 64;
  int dense_width = 128;
  std::vector<TTLSTMPlan> lstm;
  TTPlan dense;
  TTPlan output;
  double dropout_p = 0.5;
};

/// The 768 -> 3x512 -> 128 -> 64 mask-estimation stack with its explicit
/// factorizations (concat trains 16x16x5 / 16x16x4, hidden 16x16x2, dense
/// 16x8x4 -> 4x8x4, output 8x4x4 -> 4x4x4, all ranks [1,4,4,1]).
ModelConfig reference_model_config();

/// Small stack for end-to-end gradient checks: feature width 12, three
/// hidden-8 recurrent layers, dense width 8, mask width 4, ranks <= 2.
ModelConfig reduced_model_config();

struct TensorNetModel {
  std::vector<TTLSTMCell> lstm_layers;
  TTLinear dense;   ///< ReLU activation
  TTLinear output;  ///< sigmoid activation
  double dropout_p = 0.5;
  std::uint64_t creation_seed = 0;

  int feature_dim() const { return lstm_layers.front().input; }
  int mask_dim() const { return static_cast<int>(output.output_dim()); }

  /// Trainable arrays in a fixed canonical order: per recurrent layer the
  /// cores then the four gate biases, then dense cores+bias, then output
  /// cores+bias. Gradient vectors follow the same order.
  std::vector<Vector*> trainable_params();
  std::vector<const Vector*> trainable_params() const;

  /// Layer chaining and per-layer well-formedness; throws ShapeError.
  void validate() const;
};

TensorNetModel make_tensornet(const ModelConfig& config, std::uint64_t seed);

/// Forward activations retained for backpropagation, including the dropout
/// masks actually drawn.
struct ModelForwardCache {
  std::vector<SequenceCache> lstm;
  std::vector<RowMatrix> dropout_masks;  ///< one per recurrent layer + dense
  std::vector<TTLForwardCache> dense_frames, output_frames;
  RowMatrix dense_pre;  ///< pre-ReLU dense activations, T x dense_width
  RowMatrix mask;       ///< sigmoid outputs, T x mask_dim
};

/// Runs the stack over a feature sequence (T x feature_dim) and returns the
/// mask sequence (T x mask_dim), entries in (0, 1). When training is set,
/// inverted-scaling dropout with the given seed is applied to the outputs
/// of every recurrent layer and of the dense layer; inference applies none
/// and is deterministic.
RowMatrix model_forward(const TensorNetModel& model, const RowMatrix& features,
                        bool training, std::uint64_t dropout_seed = 0,
                        ModelForwardCache* cache = nullptr);

/// Mean over all T*mask_dim entries of the squared error.
double mask_mse_loss(const RowMatrix& predicted, const RowMatrix& target);

/// Gradients of mask_mse_loss(forward(features), target) for every
/// trainable array, in trainable_params() order. The cache must come from
/// the matching model_forward call.
std::vector<Vector> model_backward(const TensorNetModel& model,
                                   const ModelForwardCache& cache,
                                   const RowMatrix& target,
                                   int truncation_window = 0);

struct TrainConfig {
  double learning_rate = 0.2;
  double momentum = 0.9;
  double clip_norm = 5.0;
  int epochs = 20;
  int batch_size = 1;  ///< sequences accumulated per optimizer step
  double dropout_p = 0.5;
  std::uint64_t seed = 0;
  int truncation_window = 0;  ///< 0 = full backpropagation through time

  void validate() const;
};

struct TrainSample {
  RowMatrix features;  ///< T x feature_dim
  RowMatrix mask;      ///< T x mask_dim target
  double snr_db = 0.0;
};
using MaskDataset = std::vector<TrainSample>;

/// Loss trajectories. Losses are inference-mode (dropout off) evaluations
/// on the respective sets; initial_train_loss is the same evaluation before
/// the first update. wall_time_s is informational and excluded from the
/// determinism contract and from serialized reports.
struct TrainReport {
  double initial_train_loss = 0.0;
  std::vector<double> train_loss;
  std::vector<double> val_loss;
  std::vector<double> wall_time_s;
  bool diverged = false;
};

/// Seeded, deterministic training: per-epoch shuffle, dropout forward,
/// backpropagation through time, clipped momentum SGD. On a non-finite
/// loss or gradient the model is restored to the last good state and the
/// report is marked diverged. An empty validation set is evaluated as the
/// training set.
TrainReport train(TensorNetModel& model, const MaskDataset& train_set,
                  const MaskDataset& val_set, const TrainConfig& config);

struct LayerParamCount {
  std::string name;
  std::int64_t tt = 0;
  std::int64_t dense = 0;
  double rate() const { return static_cast<double>(tt) / dense; }
};

/// Per-layer TT and dense-baseline parameter counts plus the total row.
/// kTable1 counts recurrent layers under the published convention (fused
/// train over the layer input only); kModel counts stored parameters.
std::vector<LayerParamCount> count_model_params(const TensorNetModel& model,
                                                CountConvention mode);

}  // namespace ttnet
