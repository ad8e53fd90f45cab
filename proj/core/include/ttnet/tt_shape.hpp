// core/include/ttnet/tt_shape.hpp

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
#include <utility>
#include <vector>

#include "ttnet/common.hpp"

namespace ttnet {

/// Factorization plan for one tensor-train represented weight matrix.
///
/// A P x Q matrix is addressed through d pairs of factors with
/// P = prod(p_k) and Q = gate_fusion * prod(q_k). The chain carries d+1
/// ranks whose boundary entries must be 1 so that each reconstructed entry
/// is a scalar chain product. `gate_fusion` multiplies the output dimension
/// of the first core; it is how all four recurrent gates are stored as a
/// single train.
struct TTShape {
  std::vector<int> p;      ///< input factors, one per core
  std::vector<int> q;      ///< output factors, one per core (before fusion)
  std::vector<int> ranks;  ///< d+1 ranks; ranks.front() == ranks.back() == 1
  int gate_fusion = 1;     ///< fused output copies applied to core 1

  int order() const { return static_cast<int>(p.size()); }
  std::int64_t input_dim() const;
  std::int64_t output_dim() const;
  /// Output extent of core k (0-based): gate_fusion*q[0] for k==0, else q[k].
  int core_output_dim(int k) const;

  /// Throws ShapeError when any invariant is violated.
  void validate() const;

  bool operator==(const TTShape&) const = default;
};

/// Splits a flat index l in [0, p*q) into the (i, j) double index with the
/// row-major pairing l = i*q + j, 0-based.
std::pair<int, int> index_map(std::int64_t l, int q);

/// Inverse of index_map.
std::int64_t index_unmap(int i, int j, int q);

/// Number of stored weight entries:
///   sum_k p_k q_k r_{k-1} r_k + (g-1) p_1 q_1 r_0 r_1,
/// plus g*prod(q_k) bias terms when include_bias is set.
std::int64_t param_count(const TTShape& shape, bool include_bias);

enum class CompressionMode {
  kWeightsOnly,  ///< stored weight entries / P*Q
  kWithBias,     ///< (weights+bias) / dense baseline incl. bias, see below
};

/// Ratio of tensor-train parameters to the dense baseline.
///
/// kWithBias follows the published counting convention: a fused shape
/// (gate_fusion > 1) is read as the input-to-hidden factorization of a
/// recurrent layer whose dense baseline maps the concatenated
/// [hidden, input] vector to all gates, i.e.
///   g * prod(q) * (prod(q) + prod(p)) + g * prod(q).
/// For unfused shapes the baseline is P*Q + Q. No clamping: ratios above 1
/// are returned as computed.
double compression_rate(const TTShape& shape, CompressionMode mode);

/// Most balanced d-way factorization of n (minimal max factor; ties broken
/// by the lexicographically smallest sequence when written non-increasing).
/// With allow_ones unset, every factor must be >= 2.
/// Throws ShapeError when no valid factorization exists.
std::vector<int> balanced_factors(std::int64_t n, int d, bool allow_ones = true);

struct Factorization {
  std::vector<int> p, q;
};

/// balanced_factors applied to both dimensions of a P x Q matrix.
Factorization factorize_dims(std::int64_t input_dim, std::int64_t output_dim,
                             int d, bool allow_ones = true);

/// Maximal rank profile for given factors:
///   r_k = min(prod_{m<=k} p_m q_m, prod_{m>k} p_m q_m), boundaries 1.
std::vector<int> full_ranks(const std::vector<int>& p, const std::vector<int>& q);

}  // namespace ttnet
