// core/src/tt_shape.cpp

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

#include "ttnet/tt_shape.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

namespace ttnet {

namespace {

std::int64_t product(const std::vector<int>& v) {
  std::int64_t r = 1;
  for (int x : v) r *= x;
  return r;
}

}  // namespace

std::int64_t TTShape::input_dim() const { return product(p); }

std::int64_t TTShape::output_dim() const {
  return static_cast<std::int64_t>(gate_fusion) * product(q);
}

int TTShape::core_output_dim(int k) const {
  return k == 0 ? gate_fusion * q[0] : q[k];
}

void TTShape::validate() const {
  const int d = order();
  if (d < 1) throw ShapeError("TTShape: need at least one core");
  if (static_cast<int>(q.size()) != d)
    throw ShapeError("TTShape: p and q must have the same length");
  if (static_cast<int>(ranks.size()) != d + 1)
    throw ShapeError("TTShape: need d+1 ranks");
  if (ranks.front() != 1 || ranks.back() != 1)
    throw ShapeError("TTShape: boundary ranks must be 1");
  if (gate_fusion < 1) throw ShapeError("TTShape: gate_fusion must be >= 1");
  for (int x : p)
    if (x < 1) throw ShapeError("TTShape: input factors must be >= 1");
  for (int x : q)
    if (x < 1) throw ShapeError("TTShape: output factors must be >= 1");
  for (int r : ranks)
    if (r < 1) throw ShapeError("TTShape: ranks must be >= 1");
}

std::pair<int, int> index_map(std::int64_t l, int q) {
  return {static_cast<int>(l / q), static_cast<int>(l % q)};
}

std::int64_t index_unmap(int i, int j, int q) {
  return static_cast<std::int64_t>(i) * q + j;
}

std::int64_t param_count(const TTShape& shape, bool include_bias) {
  shape.validate();
  std::int64_t n = 0;
  for (int k = 0; k < shape.order(); ++k) {
    n += static_cast<std::int64_t>(shape.p[k]) * shape.q[k] * shape.ranks[k] *
         shape.ranks[k + 1];
  }
  n += static_cast<std::int64_t>(shape.gate_fusion - 1) * shape.p[0] *
       shape.q[0] * shape.ranks[0] * shape.ranks[1];
  if (include_bias) n += shape.output_dim();
  return n;
}

double compression_rate(const TTShape& shape, CompressionMode mode) {
  shape.validate();
  const double wide_p = static_cast<double>(shape.input_dim());
  const double wide_q = static_cast<double>(shape.output_dim());
  if (mode == CompressionMode::kWeightsOnly) {
    return static_cast<double>(param_count(shape, false)) / (wide_p * wide_q);
  }
  const double tt = static_cast<double>(param_count(shape, true));
  double dense;
  if (shape.gate_fusion > 1) {
    // Fused recurrent shape: p factors the layer input, q the hidden size.
    // The dense baseline is g gate matrices over the concatenated
    // [hidden, input] vector plus g bias vectors.
    const double hidden = static_cast<double>(product(shape.q));
    dense = shape.gate_fusion * hidden * (hidden + wide_p) +
            shape.gate_fusion * hidden;
  } else {
    dense = wide_p * wide_q + wide_q;
  }
  return tt / dense;
}

namespace {

// Enumerates all non-increasing factor sequences of n with d entries,
// keeping the best under (max factor, lexicographic) ordering.
void search_factors(std::int64_t n, int d, int cap, int min_factor,
                    std::vector<int>& current, std::vector<int>& best,
                    bool& found) {
  if (d == 1) {
    if (n > cap || n < min_factor) return;
    current.push_back(static_cast<int>(n));
    const int candidate_max = current.front();
    if (!found || candidate_max < best.front() ||
        (candidate_max == best.front() &&
         std::lexicographical_compare(current.begin(), current.end(),
                                      best.begin(), best.end()))) {
      best = current;
      found = true;
    }
    current.pop_back();
    return;
  }
  for (std::int64_t f = std::min<std::int64_t>(cap, n); f >= min_factor; --f) {
    if (n % f != 0) continue;
    current.push_back(static_cast<int>(f));
    search_factors(n / f, d - 1, static_cast<int>(f), min_factor, current,
                   best, found);
    current.pop_back();
  }
}

}  // namespace

std::vector<int> balanced_factors(std::int64_t n, int d, bool allow_ones) {
  if (n < 1 || d < 1) throw ShapeError("balanced_factors: need n >= 1, d >= 1");
  std::vector<int> best, current;
  bool found = false;
  const int min_factor = allow_ones ? 1 : 2;
  const int cap = static_cast<int>(
      std::min<std::int64_t>(n, std::numeric_limits<int>::max()));
  search_factors(n, d, cap, min_factor, current, best, found);
  if (!found) {
    std::ostringstream msg;
    msg << "balanced_factors: " << n << " has no " << d
        << "-way factorization with factors >= " << min_factor;
    throw ShapeError(msg.str());
  }
  return best;
}

Factorization factorize_dims(std::int64_t input_dim, std::int64_t output_dim,
                             int d, bool allow_ones) {
  return {balanced_factors(input_dim, d, allow_ones),
          balanced_factors(output_dim, d, allow_ones)};
}

std::vector<int> full_ranks(const std::vector<int>& p,
                            const std::vector<int>& q) {
  if (p.size() != q.size() || p.empty())
    throw ShapeError("full_ranks: p and q must be equal-length, non-empty");
  const int d = static_cast<int>(p.size());
  std::vector<int> ranks(d + 1, 1);
  for (int k = 1; k < d; ++k) {
    std::int64_t left = 1, right = 1;
    for (int m = 0; m < k; ++m) left *= static_cast<std::int64_t>(p[m]) * q[m];
    for (int m = k; m < d; ++m)
      right *= static_cast<std::int64_t>(p[m]) * q[m];
    ranks[k] = static_cast<int>(std::min(left, right));
  }
  return ranks;
}

}  // namespace ttnet
