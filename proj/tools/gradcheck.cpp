// tools/gradcheck.cpp

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

#include "gradcheck.hpp"

#include <random>
#include <sstream>

#include "ttnet/tensornet.hpp"

namespace ttnet::tools {

namespace {

Vector random_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = gauss(rng);
  return v;
}

RowMatrix random_matrix(std::mt19937_64& rng, Eigen::Index rows,
                        Eigen::Index cols) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  RowMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = gauss(rng);
  return m;
}

void maybe_inject(std::vector<Vector>& grads, bool inject) {
  if (inject && !grads.empty() && grads.front().size() > 0)
    grads.front()[0] += 1e-3;
}

// Mean-squared distance of the layer output from a fixed random target;
// gradients for every core, the bias and the input.
GradCheckResult check_ttl(std::uint64_t seed, int order,
                          const std::vector<int>& ranks, bool inject_fault) {
  std::mt19937_64 rng(seed);

  TTShape shape;
  for (int k = 0; k < order; ++k) {
    shape.p.push_back(2 + k % 2);
    shape.q.push_back(3 - k % 2);
  }
  shape.ranks = ranks;
  shape.gate_fusion = 1;
  TTLinear ttl = tt_random_init(shape, seed, InitScalePolicy::kGlorotChain);

  Vector x = random_vector(rng, ttl.input_dim());
  const Vector target = random_vector(rng, ttl.output_dim());
  const double scale = static_cast<double>(ttl.output_dim());

  std::vector<Vector*> params;
  for (TTCore& core : ttl.cores) params.push_back(&core.data);
  params.push_back(&*ttl.bias);
  params.push_back(&x);

  DiffObjective objective;
  objective.loss = [&]() {
    const Vector y = ttl_forward(ttl, x);
    return (y - target).squaredNorm() / scale;
  };
  objective.gradient = [&]() {
    TTLForwardCache cache;
    const Vector y = ttl_forward(ttl, x, &cache);
    const Vector dy = 2.0 * (y - target) / scale;
    TTLGradients g = ttl_backward(ttl, cache, dy);
    std::vector<Vector> grads = std::move(g.core_grads);
    grads.push_back(std::move(g.bias_grad));
    grads.push_back(std::move(g.input_grad));
    maybe_inject(grads, inject_fault);
    return grads;
  };

  std::ostringstream name;
  name << "ttl d=" << order << " ranks<=" << ranks[order / 2];
  return {name.str(), finite_diff_check(objective, params, 1e-6)};
}

TTLSTMPlan small_lstm_plan() {
  TTLSTMPlan plan;
  plan.hidden = 4;
  plan.input = 5;
  plan.concat_factors = {3, 3};  // 9 = 4 + 5
  plan.hidden_factors = {2, 2};
  plan.ranks = {1, 2, 1};
  plan.table1_input_factors = {5, 1};
  return plan;
}

GradCheckResult check_lstm(std::uint64_t seed, int steps, bool inject_fault) {
  std::mt19937_64 rng(seed);
  TTLSTMCell cell = make_tt_lstm(small_lstm_plan(), seed);

  RowMatrix xs = random_matrix(rng, steps, cell.input);
  const RowMatrix target = random_matrix(rng, steps, cell.hidden);
  const double scale = static_cast<double>(target.size());

  std::vector<Vector*> params;
  for (TTCore& core : cell.gates.cores) params.push_back(&core.data);
  params.push_back(&cell.b_i);
  params.push_back(&cell.b_f);
  params.push_back(&cell.b_o);
  params.push_back(&cell.b_c);

  DiffObjective objective;
  objective.loss = [&]() {
    const RowMatrix hs = lstm_sequence_forward(cell, xs);
    return (hs - target).squaredNorm() / scale;
  };
  objective.gradient = [&]() {
    SequenceCache cache;
    const RowMatrix hs = lstm_sequence_forward(cell, xs, &cache);
    const RowMatrix dhs = 2.0 * (hs - target) / scale;
    LSTMSequenceGradients g = lstm_sequence_backward(cell, cache, dhs);
    std::vector<Vector> grads = std::move(g.core_grads);
    grads.push_back(std::move(g.b_i));
    grads.push_back(std::move(g.b_f));
    grads.push_back(std::move(g.b_o));
    grads.push_back(std::move(g.b_c));
    maybe_inject(grads, inject_fault);
    return grads;
  };

  std::ostringstream name;
  name << "lstm bptt T=" << steps;
  return {name.str(), finite_diff_check(objective, params, 1e-6)};
}

}  // namespace

std::vector<GradCheckResult> gradcheck_small(std::uint64_t seed,
                                             bool inject_fault) {
  std::vector<GradCheckResult> results;
  int variant = 0;
  for (int order : {1, 2, 3, 4}) {
    for (int rank : {1, 2, 4}) {
      std::vector<int> ranks(order + 1, rank);
      ranks.front() = ranks.back() = 1;
      results.push_back(check_ttl(mix_seed(seed, variant), order, ranks,
                                  inject_fault && variant == 0));
      ++variant;
    }
  }
  results.push_back(check_lstm(mix_seed(seed, 100), 1, false));
  results.push_back(check_lstm(mix_seed(seed, 101), 3, false));
  return results;
}

std::vector<GradCheckResult> gradcheck_reduced(std::uint64_t seed,
                                               bool inject_fault) {
  std::mt19937_64 rng(mix_seed(seed, 7));
  TensorNetModel model = make_tensornet(reduced_model_config(), seed);
  model.dropout_p = 0.5;

  const int frames = 3;
  const RowMatrix features = random_matrix(rng, frames, model.feature_dim());
  RowMatrix target = random_matrix(rng, frames, model.mask_dim());
  target = (1.0 + (-target.array()).exp()).inverse().matrix();  // into (0,1)
  const std::uint64_t dropout_seed = mix_seed(seed, 11);

  const std::vector<Vector*> params = model.trainable_params();

  DiffObjective objective;
  objective.loss = [&]() {
    return mask_mse_loss(
        model_forward(model, features, true, dropout_seed), target);
  };
  objective.gradient = [&]() {
    ModelForwardCache cache;
    model_forward(model, features, true, dropout_seed, &cache);
    std::vector<Vector> grads = model_backward(model, cache, target);
    maybe_inject(grads, inject_fault);
    return grads;
  };

  // End-to-end gradients span many decades; entries below 1e-5 are checked
  // against the central-difference noise level in absolute terms.
  return {{"tensornet reduced end-to-end",
           finite_diff_check(objective, params, 1e-6, 1e-5)}};
}

}  // namespace ttnet::tools
