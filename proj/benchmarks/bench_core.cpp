// benchmarks/bench_core.cpp

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

#include <benchmark/benchmark.h>

#include <random>

#include "ttnet/tensornet.hpp"
#include "ttnet/tt_grad.hpp"
#include "ttnet/tt_lstm.hpp"

namespace {

using namespace ttnet;

Vector random_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = gauss(rng);
  return v;
}

// Gate map of the first recurrent layer in the reference stack.
TTLinear layer1_gates() {
  TTShape shape{{16, 16, 5}, {16, 16, 2}, {1, 4, 4, 1}, 4};
  return tt_random_init(shape, 7, InitScalePolicy::kGlorotChain, false);
}

void BM_ttl_forward_layer1(benchmark::State& state) {
  const TTLinear ttl = layer1_gates();
  std::mt19937_64 rng(1);
  const Vector x = random_vector(rng, ttl.input_dim());
  for (auto _ : state) {
    benchmark::DoNotOptimize(ttl_forward(ttl, x));
  }
}
BENCHMARK(BM_ttl_forward_layer1);

void BM_ttl_backward_layer1(benchmark::State& state) {
  const TTLinear ttl = layer1_gates();
  std::mt19937_64 rng(2);
  const Vector x = random_vector(rng, ttl.input_dim());
  const Vector dy = random_vector(rng, ttl.output_dim());
  TTLForwardCache cache;
  ttl_forward(ttl, x, &cache);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ttl_backward(ttl, cache, dy));
  }
}
BENCHMARK(BM_ttl_backward_layer1);

void BM_dense_matvec_layer1_equivalent(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const Matrix w = Matrix::NullaryExpr(1280, 2048, [&rng]() {
    std::normal_distribution<double> gauss(0.0, 0.03);
    return gauss(rng);
  });
  const Vector x = random_vector(rng, 1280);
  for (auto _ : state) {
    benchmark::DoNotOptimize((w.transpose() * x).eval());
  }
}
BENCHMARK(BM_dense_matvec_layer1_equivalent);

void BM_lstm_step_h512(benchmark::State& state) {
  TTLSTMPlan plan;
  plan.hidden = 512;
  plan.input = 768;
  plan.concat_factors = {16, 16, 5};
  plan.hidden_factors = {16, 16, 2};
  plan.ranks = {1, 4, 4, 1};
  plan.table1_input_factors = {16, 16, 3};
  const TTLSTMCell cell = make_tt_lstm(plan, 4);
  std::mt19937_64 rng(5);
  const Vector x = random_vector(rng, cell.input);
  LSTMState s{Vector::Zero(cell.hidden), Vector::Zero(cell.hidden)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(lstm_step(cell, x, s));
  }
}
BENCHMARK(BM_lstm_step_h512);

void BM_model_forward_one_second(benchmark::State& state) {
  const TensorNetModel model = make_tensornet(reference_model_config(), 6);
  std::mt19937_64 rng(7);
  RowMatrix features(99, model.feature_dim());
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (Eigen::Index r = 0; r < features.rows(); ++r)
    for (Eigen::Index c = 0; c < features.cols(); ++c)
      features(r, c) = gauss(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(model_forward(model, features, false));
  }
}
BENCHMARK(BM_model_forward_one_second);

}  // namespace

BENCHMARK_MAIN();
