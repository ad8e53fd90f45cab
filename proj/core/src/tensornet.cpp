// core/src/tensornet.cpp

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

#include "ttnet/tensornet.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace ttnet {

ModelConfig reference_model_config() {
  ModelConfig config;
  config.feature_dim = 768;
  config.mask_dim = 64;
  config.dense_width = 128;
  config.dropout_p = 0.5;

  TTLSTMPlan layer1;
  layer1.hidden = 512;
  layer1.input = 768;
  layer1.concat_factors = {16, 16, 5};  // 1280
  layer1.hidden_factors = {16, 16, 2};
  layer1.ranks = {1, 4, 4, 1};
  layer1.table1_input_factors = {16, 16, 3};
  config.lstm.push_back(layer1);

  TTLSTMPlan deeper;
  deeper.hidden = 512;
  deeper.input = 512;
  deeper.concat_factors = {16, 16, 4};  // 1024
  deeper.hidden_factors = {16, 16, 2};
  deeper.ranks = {1, 4, 4, 1};
  deeper.table1_input_factors = {16, 16, 2};
  config.lstm.push_back(deeper);
  config.lstm.push_back(deeper);

  config.dense = {{16, 8, 4}, {4, 8, 4}, {1, 4, 4, 1}};
  config.output = {{8, 4, 4}, {4, 4, 4}, {1, 4, 4, 1}};
  return config;
}

ModelConfig reduced_model_config() {
  ModelConfig config;
  config.feature_dim = 12;
  config.mask_dim = 4;
  config.dense_width = 8;
  config.dropout_p = 0.5;

  TTLSTMPlan layer1;
  layer1.hidden = 8;
  layer1.input = 12;
  layer1.concat_factors = {5, 4};  // 20
  layer1.hidden_factors = {4, 2};
  layer1.ranks = {1, 2, 1};
  layer1.table1_input_factors = {4, 3};
  config.lstm.push_back(layer1);

  TTLSTMPlan deeper;
  deeper.hidden = 8;
  deeper.input = 8;
  deeper.concat_factors = {4, 4};  // 16
  deeper.hidden_factors = {4, 2};
  deeper.ranks = {1, 2, 1};
  deeper.table1_input_factors = {4, 2};
  config.lstm.push_back(deeper);
  config.lstm.push_back(deeper);

  config.dense = {{4, 2}, {4, 2}, {1, 2, 1}};
  config.output = {{4, 2}, {2, 2}, {1, 2, 1}};
  return config;
}

void TensorNetModel::validate() const {
  if (lstm_layers.empty()) throw ShapeError("TensorNetModel: no recurrent layers");
  int width = lstm_layers.front().input;
  for (const TTLSTMCell& cell : lstm_layers) {
    cell.validate();
    if (cell.input != width)
      throw ShapeError("TensorNetModel: recurrent layer chaining mismatch");
    width = cell.hidden;
  }
  dense.validate();
  output.validate();
  if (dense.input_dim() != width)
    throw ShapeError("TensorNetModel: dense layer input mismatch");
  if (output.input_dim() != dense.output_dim())
    throw ShapeError("TensorNetModel: output layer input mismatch");
  if (!dense.bias || !output.bias)
    throw ShapeError("TensorNetModel: dense and output layers need biases");
  if (!(dropout_p >= 0.0 && dropout_p < 1.0))
    throw ShapeError("TensorNetModel: dropout probability must be in [0, 1)");
}

TensorNetModel make_tensornet(const ModelConfig& config, std::uint64_t seed) {
  TensorNetModel model;
  model.dropout_p = config.dropout_p;
  model.creation_seed = seed;

  std::uint64_t stream = 0;
  for (const TTLSTMPlan& plan : config.lstm)
    model.lstm_layers.push_back(make_tt_lstm(plan, mix_seed(seed, stream++)));

  TTShape dense_shape{config.dense.p, config.dense.q, config.dense.ranks, 1};
  model.dense = tt_random_init(dense_shape, mix_seed(seed, stream++));
  TTShape output_shape{config.output.p, config.output.q, config.output.ranks, 1};
  model.output = tt_random_init(output_shape, mix_seed(seed, stream++));

  if (model.dense.output_dim() != config.dense_width ||
      model.output.output_dim() != config.mask_dim)
    throw ShapeError("make_tensornet: factorizations disagree with layer widths");
  model.validate();
  return model;
}

std::vector<Vector*> TensorNetModel::trainable_params() {
  std::vector<Vector*> params;
  for (TTLSTMCell& cell : lstm_layers) {
    for (TTCore& core : cell.gates.cores) params.push_back(&core.data);
    params.push_back(&cell.b_i);
    params.push_back(&cell.b_f);
    params.push_back(&cell.b_o);
    params.push_back(&cell.b_c);
  }
  for (TTCore& core : dense.cores) params.push_back(&core.data);
  params.push_back(&*dense.bias);
  for (TTCore& core : output.cores) params.push_back(&core.data);
  params.push_back(&*output.bias);
  return params;
}

std::vector<const Vector*> TensorNetModel::trainable_params() const {
  auto* self = const_cast<TensorNetModel*>(this);
  std::vector<Vector*> mutable_params = self->trainable_params();
  return {mutable_params.begin(), mutable_params.end()};
}

namespace {

RowMatrix draw_dropout_mask(std::mt19937_64& rng, Eigen::Index rows,
                            Eigen::Index cols, double p) {
  RowMatrix mask(rows, cols);
  if (p <= 0.0) {
    mask.setOnes();
    return mask;
  }
  std::bernoulli_distribution keep(1.0 - p);
  const double scale = 1.0 / (1.0 - p);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      mask(r, c) = keep(rng) ? scale : 0.0;
  return mask;
}

}  // namespace

RowMatrix model_forward(const TensorNetModel& model, const RowMatrix& features,
                        bool training, std::uint64_t dropout_seed,
                        ModelForwardCache* cache) {
  model.validate();
  if (features.cols() != model.feature_dim()) {
    std::ostringstream msg;
    msg << "model_forward: feature width " << features.cols() << " != "
        << model.feature_dim();
    throw ShapeError(msg.str());
  }
  if (features.rows() < 1) throw ShapeError("model_forward: empty sequence");
  const Eigen::Index frames = features.rows();

  std::mt19937_64 rng(dropout_seed);
  if (cache) {
    cache->lstm.assign(model.lstm_layers.size(), {});
    cache->dropout_masks.clear();
    cache->dense_frames.assign(frames, {});
    cache->output_frames.assign(frames, {});
  }

  RowMatrix activations = features;
  for (std::size_t l = 0; l < model.lstm_layers.size(); ++l) {
    activations = lstm_sequence_forward(model.lstm_layers[l], activations,
                                        cache ? &cache->lstm[l] : nullptr);
    if (training) {
      RowMatrix mask = draw_dropout_mask(rng, frames,
                                         model.lstm_layers[l].hidden,
                                         model.dropout_p);
      activations = activations.cwiseProduct(mask);
      if (cache) cache->dropout_masks.push_back(std::move(mask));
    } else if (cache) {
      cache->dropout_masks.push_back(
          RowMatrix::Ones(frames, model.lstm_layers[l].hidden));
    }
  }

  const Eigen::Index dense_width = model.dense.output_dim();
  RowMatrix dense_pre(frames, dense_width);
  for (Eigen::Index t = 0; t < frames; ++t)
    dense_pre.row(t) =
        ttl_forward(model.dense, activations.row(t).transpose(),
                    cache ? &cache->dense_frames[t] : nullptr)
            .transpose();
  if (!dense_pre.allFinite())
    throw NumericError("model_forward: non-finite dense activations");

  RowMatrix dense_act = dense_pre.cwiseMax(0.0);
  if (training) {
    RowMatrix mask = draw_dropout_mask(rng, frames, dense_width, model.dropout_p);
    dense_act = dense_act.cwiseProduct(mask);
    if (cache) cache->dropout_masks.push_back(std::move(mask));
  } else if (cache) {
    cache->dropout_masks.push_back(RowMatrix::Ones(frames, dense_width));
  }

  RowMatrix mask_out(frames, model.mask_dim());
  for (Eigen::Index t = 0; t < frames; ++t) {
    const Vector z = ttl_forward(model.output, dense_act.row(t).transpose(),
                                 cache ? &cache->output_frames[t] : nullptr);
    mask_out.row(t) = (1.0 + (-z.array()).exp()).inverse().matrix().transpose();
  }
  if (!mask_out.allFinite())
    throw NumericError("model_forward: non-finite mask outputs");

  if (cache) {
    cache->dense_pre = std::move(dense_pre);
    cache->mask = mask_out;
  }
  return mask_out;
}

double mask_mse_loss(const RowMatrix& predicted, const RowMatrix& target) {
  if (predicted.rows() != target.rows() || predicted.cols() != target.cols())
    throw ShapeError("mask_mse_loss: shape mismatch");
  const double n = static_cast<double>(predicted.size());
  return (predicted - target).squaredNorm() / n;
}

std::vector<Vector> model_backward(const TensorNetModel& model,
                                   const ModelForwardCache& cache,
                                   const RowMatrix& target,
                                   int truncation_window) {
  model.validate();
  const Eigen::Index frames = cache.mask.rows();
  if (target.rows() != frames || target.cols() != cache.mask.cols())
    throw ShapeError("model_backward: target shape mismatch");
  if (cache.dropout_masks.size() != model.lstm_layers.size() + 1)
    throw ShapeError("model_backward: cache does not match this model");

  const double n = static_cast<double>(cache.mask.size());
  // d(mse)/d(sigmoid output), then through the sigmoid.
  RowMatrix dmask = 2.0 * (cache.mask - target) / n;
  RowMatrix dz_out =
      dmask.cwiseProduct(cache.mask.cwiseProduct(
          (1.0 - cache.mask.array()).matrix()));

  std::vector<Vector> output_core_grads(model.output.cores.size());
  for (std::size_t k = 0; k < output_core_grads.size(); ++k)
    output_core_grads[k] = Vector::Zero(model.output.cores[k].size());
  Vector output_bias_grad = Vector::Zero(model.output.output_dim());
  RowMatrix d_dense_act(frames, model.dense.output_dim());
  for (Eigen::Index t = 0; t < frames; ++t) {
    const TTLGradients g = ttl_backward(model.output, cache.output_frames[t],
                                        dz_out.row(t).transpose());
    for (std::size_t k = 0; k < output_core_grads.size(); ++k)
      output_core_grads[k] += g.core_grads[k];
    output_bias_grad += g.bias_grad;
    d_dense_act.row(t) = g.input_grad.transpose();
  }

  // Dense dropout, then ReLU.
  d_dense_act = d_dense_act.cwiseProduct(cache.dropout_masks.back());
  RowMatrix dz_dense =
      d_dense_act.cwiseProduct((cache.dense_pre.array() > 0.0).cast<double>().matrix());

  std::vector<Vector> dense_core_grads(model.dense.cores.size());
  for (std::size_t k = 0; k < dense_core_grads.size(); ++k)
    dense_core_grads[k] = Vector::Zero(model.dense.cores[k].size());
  Vector dense_bias_grad = Vector::Zero(model.dense.output_dim());
  RowMatrix upstream(frames, model.dense.input_dim());
  for (Eigen::Index t = 0; t < frames; ++t) {
    const TTLGradients g = ttl_backward(model.dense, cache.dense_frames[t],
                                        dz_dense.row(t).transpose());
    for (std::size_t k = 0; k < dense_core_grads.size(); ++k)
      dense_core_grads[k] += g.core_grads[k];
    dense_bias_grad += g.bias_grad;
    upstream.row(t) = g.input_grad.transpose();
  }

  std::vector<LSTMSequenceGradients> lstm_grads(model.lstm_layers.size());
  for (int l = static_cast<int>(model.lstm_layers.size()) - 1; l >= 0; --l) {
    const RowMatrix dhs = upstream.cwiseProduct(cache.dropout_masks[l]);
    lstm_grads[l] = lstm_sequence_backward(model.lstm_layers[l], cache.lstm[l],
                                           dhs, truncation_window);
    upstream = lstm_grads[l].input_grads;
  }

  std::vector<Vector> grads;
  for (std::size_t l = 0; l < model.lstm_layers.size(); ++l) {
    for (Vector& g : lstm_grads[l].core_grads) grads.push_back(std::move(g));
    grads.push_back(std::move(lstm_grads[l].b_i));
    grads.push_back(std::move(lstm_grads[l].b_f));
    grads.push_back(std::move(lstm_grads[l].b_o));
    grads.push_back(std::move(lstm_grads[l].b_c));
  }
  for (Vector& g : dense_core_grads) grads.push_back(std::move(g));
  grads.push_back(std::move(dense_bias_grad));
  for (Vector& g : output_core_grads) grads.push_back(std::move(g));
  grads.push_back(std::move(output_bias_grad));
  return grads;
}

void TrainConfig::validate() const {
  if (learning_rate <= 0.0) throw ShapeError("TrainConfig: learning rate must be > 0");
  if (momentum < 0.0 || momentum >= 1.0)
    throw ShapeError("TrainConfig: momentum must be in [0, 1)");
  if (clip_norm <= 0.0) throw ShapeError("TrainConfig: clip norm must be > 0");
  if (epochs < 0) throw ShapeError("TrainConfig: epochs must be >= 0");
  if (batch_size < 1) throw ShapeError("TrainConfig: batch size must be >= 1");
  if (dropout_p < 0.0 || dropout_p >= 1.0)
    throw ShapeError("TrainConfig: dropout probability must be in [0, 1)");
  if (truncation_window < 0)
    throw ShapeError("TrainConfig: truncation window must be >= 0");
}

namespace {

double dataset_loss(const TensorNetModel& model, const MaskDataset& data) {
  double total = 0.0;
  for (const TrainSample& sample : data)
    total += mask_mse_loss(model_forward(model, sample.features, false),
                           sample.mask);
  return total / static_cast<double>(data.size());
}

void check_dataset(const TensorNetModel& model, const MaskDataset& data,
                   const char* which) {
  if (data.empty()) {
    std::ostringstream msg;
    msg << "train: empty " << which << " set";
    throw ShapeError(msg.str());
  }
  for (const TrainSample& sample : data) {
    if (sample.features.cols() != model.feature_dim() ||
        sample.mask.cols() != model.mask_dim() ||
        sample.features.rows() != sample.mask.rows())
      throw ShapeError("train: dataset shapes do not match the model");
  }
}

std::vector<Vector> snapshot_params(const std::vector<Vector*>& params) {
  std::vector<Vector> copy(params.size());
  for (std::size_t n = 0; n < params.size(); ++n) copy[n] = *params[n];
  return copy;
}

void restore_params(const std::vector<Vector*>& params,
                    const std::vector<Vector>& snapshot) {
  for (std::size_t n = 0; n < params.size(); ++n) *params[n] = snapshot[n];
}

}  // namespace

TrainReport train(TensorNetModel& model, const MaskDataset& train_set,
                  const MaskDataset& val_set, const TrainConfig& config) {
  config.validate();
  model.validate();
  check_dataset(model, train_set, "training");
  const MaskDataset& val = val_set.empty() ? train_set : val_set;
  if (!val_set.empty()) check_dataset(model, val_set, "validation");

  model.dropout_p = config.dropout_p;
  const std::vector<Vector*> params = model.trainable_params();

  OptimizerState optimizer;
  optimizer.learning_rate = config.learning_rate;
  optimizer.momentum = config.momentum;
  optimizer.clip_norm = config.clip_norm;

  TrainReport report;
  report.initial_train_loss = dataset_loss(model, train_set);

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0u);
  std::uint64_t dropout_stream = 0;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const auto epoch_start = std::chrono::steady_clock::now();
    std::mt19937_64 shuffle_rng(
        mix_seed(config.seed, 0x10000000ULL + static_cast<std::uint64_t>(epoch)));
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    for (std::size_t pos = 0; pos < order.size();
         pos += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t batch_end =
          std::min(order.size(), pos + static_cast<std::size_t>(config.batch_size));
      const double batch_count = static_cast<double>(batch_end - pos);

      const std::vector<Vector> snapshot = snapshot_params(params);
      std::vector<Vector> accumulated;
      bool bad_step = false;

      for (std::size_t b = pos; b < batch_end; ++b) {
        const TrainSample& sample = train_set[order[b]];
        ModelForwardCache cache;
        const std::uint64_t dropout_seed =
            mix_seed(config.seed, 0x20000000ULL + dropout_stream++);
        double step_loss;
        try {
          const RowMatrix predicted = model_forward(
              model, sample.features, true, dropout_seed, &cache);
          step_loss = mask_mse_loss(predicted, sample.mask);
        } catch (const NumericError&) {
          bad_step = true;
          break;
        }
        if (!std::isfinite(step_loss)) {
          bad_step = true;
          break;
        }
        std::vector<Vector> grads =
            model_backward(model, cache, sample.mask, config.truncation_window);
        if (accumulated.empty()) {
          accumulated = std::move(grads);
        } else {
          for (std::size_t n = 0; n < accumulated.size(); ++n)
            accumulated[n] += grads[n];
        }
      }

      if (!bad_step) {
        for (Vector& g : accumulated) g /= batch_count;
        try {
          sgd_momentum_step(params, accumulated, optimizer);
        } catch (const NumericError&) {
          bad_step = true;
        }
      }
      if (bad_step) {
        restore_params(params, snapshot);
        report.diverged = true;
        return report;
      }
    }

    report.train_loss.push_back(dataset_loss(model, train_set));
    report.val_loss.push_back(dataset_loss(model, val));
    const auto epoch_end = std::chrono::steady_clock::now();
    report.wall_time_s.push_back(
        std::chrono::duration<double>(epoch_end - epoch_start).count());
    if (!std::isfinite(report.train_loss.back())) {
      report.diverged = true;
      return report;
    }
  }
  return report;
}

std::vector<LayerParamCount> count_model_params(const TensorNetModel& model,
                                                CountConvention mode) {
  model.validate();
  std::vector<LayerParamCount> rows;
  for (std::size_t l = 0; l < model.lstm_layers.size(); ++l) {
    const TTLSTMCell& cell = model.lstm_layers[l];
    LayerParamCount row;
    row.name = "lstm" + std::to_string(l + 1);
    row.tt = cell_param_count(cell, mode);
    row.dense = dense_lstm_param_count(cell.hidden, cell.input);
    rows.push_back(row);
  }
  LayerParamCount dense_row;
  dense_row.name = "dense";
  dense_row.tt = param_count(model.dense.shape, true);
  dense_row.dense =
      model.dense.input_dim() * model.dense.output_dim() + model.dense.output_dim();
  rows.push_back(dense_row);

  LayerParamCount output_row;
  output_row.name = "output";
  output_row.tt = param_count(model.output.shape, true);
  output_row.dense = model.output.input_dim() * model.output.output_dim() +
                     model.output.output_dim();
  rows.push_back(output_row);

  LayerParamCount total;
  total.name = "total";
  for (const LayerParamCount& row : rows) {
    total.tt += row.tt;
    total.dense += row.dense;
  }
  rows.push_back(total);
  return rows;
}

}  // namespace ttnet
