// core/src/tt_linear.cpp

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

#include "ttnet/tt_linear.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "tt_contract.hpp"

namespace ttnet {

void TTLinear::validate() const {
  shape.validate();
  const int d = shape.order();
  if (static_cast<int>(cores.size()) != d)
    throw ShapeError("TTLinear: core count does not match shape order");
  for (int k = 0; k < d; ++k) {
    const TTCore& c = cores[k];
    if (c.index != k + 1 || c.p != shape.p[k] ||
        c.fused_q != shape.core_output_dim(k) || c.r_in != shape.ranks[k] ||
        c.r_out != shape.ranks[k + 1])
      throw ShapeError("TTLinear: core extents disagree with shape");
    if (c.data.size() !=
        static_cast<std::int64_t>(c.p) * c.fused_q * c.r_in * c.r_out)
      throw ShapeError("TTLinear: core data size mismatch");
  }
  if (bias && bias->size() != output_dim())
    throw ShapeError("TTLinear: bias length must equal the output dimension");
}

namespace detail {

RowMatrix contraction_matrix(const TTCore& core) {
  RowMatrix m(static_cast<Eigen::Index>(core.fused_q) * core.r_out,
              static_cast<Eigen::Index>(core.r_in) * core.p);
  for (int i = 0; i < core.p; ++i)
    for (int j = 0; j < core.fused_q; ++j)
      for (int a = 0; a < core.r_in; ++a)
        for (int b = 0; b < core.r_out; ++b)
          m(static_cast<Eigen::Index>(j) * core.r_out + b,
            static_cast<Eigen::Index>(a) * core.p + i) = core.at(i, j, a, b);
  return m;
}

}  // namespace detail

Vector ttl_forward(const TTLinear& ttl, const Vector& x,
                   TTLForwardCache* cache) {
  ttl.validate();
  if (x.size() != ttl.input_dim()) {
    std::ostringstream msg;
    msg << "ttl_forward: input length " << x.size() << " != " << ttl.input_dim();
    throw ShapeError(msg.str());
  }
  const int d = ttl.shape.order();

  if (cache) {
    cache->partials.clear();
    cache->partials.reserve(d + 1);
    cache->partials.push_back(x);
  }

  // Remaining input extent after core k has been absorbed.
  std::int64_t p_rest = ttl.input_dim();
  std::int64_t j_done = 1;  // output extent produced so far
  Vector current = x;       // layout [j_done][r][p_k][p_rest]

  for (int k = 0; k < d; ++k) {
    const TTCore& core = ttl.cores[k];
    p_rest /= core.p;
    const RowMatrix contract = detail::contraction_matrix(core);
    const std::int64_t in_block =
        static_cast<std::int64_t>(core.r_in) * core.p * p_rest;
    const std::int64_t out_block =
        static_cast<std::int64_t>(core.fused_q) * core.r_out * p_rest;
    Vector next(j_done * out_block);
    for (std::int64_t jp = 0; jp < j_done; ++jp) {
      Eigen::Map<const RowMatrix> in(current.data() + jp * in_block,
                                     static_cast<Eigen::Index>(core.r_in) * core.p,
                                     p_rest);
      Eigen::Map<RowMatrix> out(next.data() + jp * out_block,
                                static_cast<Eigen::Index>(core.fused_q) * core.r_out,
                                p_rest);
      out.noalias() = contract * in;
    }
    current = std::move(next);
    j_done *= core.fused_q;
    if (cache) cache->partials.push_back(current);
  }

  if (ttl.bias) current += *ttl.bias;
  return current;
}

Matrix tt_reconstruct(const TTLinear& ttl, std::int64_t entry_cap) {
  ttl.validate();
  const std::int64_t rows = ttl.input_dim();
  const std::int64_t cols = ttl.output_dim();
  if (rows * cols > entry_cap) {
    std::ostringstream msg;
    msg << "tt_reconstruct: " << rows << "x" << cols
        << " exceeds the entry cap " << entry_cap;
    throw ShapeError(msg.str());
  }
  const int d = ttl.shape.order();

  Matrix w(rows, cols);
  std::vector<int> mi(d), mj(d);
  Eigen::RowVectorXd chain, next;
  for (std::int64_t i = 0; i < rows; ++i) {
    // Row-major multi-index over the input factors.
    std::int64_t rem = i;
    for (int k = d - 1; k >= 0; --k) {
      mi[k] = static_cast<int>(rem % ttl.shape.p[k]);
      rem /= ttl.shape.p[k];
    }
    for (std::int64_t j = 0; j < cols; ++j) {
      rem = j;
      for (int k = d - 1; k >= 0; --k) {
        const int extent = ttl.shape.core_output_dim(k);
        mj[k] = static_cast<int>(rem % extent);
        rem /= extent;
      }
      chain.resize(1);
      chain[0] = 1.0;
      for (int k = 0; k < d; ++k) {
        const TTCore& core = ttl.cores[k];
        next.resize(core.r_out);
        next.setZero();
        for (int a = 0; a < core.r_in; ++a) {
          const double va = chain[a];
          if (va == 0.0) continue;
          for (int b = 0; b < core.r_out; ++b)
            next[b] += va * core.at(mi[k], mj[k], a, b);
        }
        chain.swap(next);
      }
      w(i, j) = chain[0];
    }
  }
  return w;
}

TTLinear tt_random_init(const TTShape& shape, std::uint64_t seed,
                        InitScalePolicy policy, bool with_bias) {
  shape.validate();
  const int d = shape.order();

  double stddev = 1.0;
  if (policy == InitScalePolicy::kGlorotChain) {
    double rank_product = 1.0;
    for (int k = 1; k < d; ++k) rank_product *= shape.ranks[k];
    const double target =
        2.0 / (static_cast<double>(shape.input_dim()) +
               static_cast<double>(shape.output_dim()));
    stddev = std::pow(target / rank_product, 1.0 / (2.0 * d));
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, stddev);

  TTLinear ttl;
  ttl.shape = shape;
  ttl.cores.resize(d);
  for (int k = 0; k < d; ++k) {
    TTCore& core = ttl.cores[k];
    core.index = k + 1;
    core.p = shape.p[k];
    core.fused_q = shape.core_output_dim(k);
    core.r_in = shape.ranks[k];
    core.r_out = shape.ranks[k + 1];
    core.data.resize(static_cast<std::int64_t>(core.p) * core.fused_q *
                     core.r_in * core.r_out);
    for (std::int64_t n = 0; n < core.data.size(); ++n) core.data[n] = gauss(rng);
  }
  if (with_bias) ttl.bias = Vector::Zero(shape.output_dim());
  return ttl;
}

TTLinear tt_zeros(const TTShape& shape, bool with_bias) {
  TTLinear ttl = tt_random_init(shape, 0, InitScalePolicy::kUnitNormal, with_bias);
  for (TTCore& core : ttl.cores) core.data.setZero();
  return ttl;
}

}  // namespace ttnet
