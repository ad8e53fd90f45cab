// core/include/ttnet/tt_linear.hpp

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
#include <optional>
#include <vector>

#include "ttnet/common.hpp"
#include "ttnet/tt_shape.hpp"

namespace ttnet {

/// One 4-way core of a tensor train. `data` is row-major over
/// (i, j, a, b) with extents (p, fused_q, r_in, r_out): the rank pair
/// (a, b) varies fastest. fused_q includes the gate-fusion multiple on
/// core 1 and equals the plain output factor elsewhere.
struct TTCore {
  int index = 0;  ///< 1-based position in the chain
  int p = 0;
  int fused_q = 0;
  int r_in = 0;
  int r_out = 0;
  Vector data;

  std::int64_t flat_index(int i, int j, int a, int b) const {
    return ((static_cast<std::int64_t>(i) * fused_q + j) * r_in + a) * r_out + b;
  }
  double at(int i, int j, int a, int b) const {
    return data[flat_index(i, j, a, b)];
  }
  double& at(int i, int j, int a, int b) {
    return data[flat_index(i, j, a, b)];
  }
  std::int64_t size() const { return data.size(); }
};

/// A linear map stored only in tensor-train form, plus an optional bias.
/// Immutable after construction in all library code paths; safe to share.
struct TTLinear {
  TTShape shape;
  std::vector<TTCore> cores;
  std::optional<Vector> bias;  ///< length output_dim() when present

  std::int64_t input_dim() const { return shape.input_dim(); }
  std::int64_t output_dim() const { return shape.output_dim(); }

  /// Throws ShapeError when core extents disagree with the shape or the
  /// bias length is wrong.
  void validate() const;
};

/// Partial contractions B_0..B_d kept by the forward pass. B_0 is the input
/// itself, B_d the pre-bias output; the backward sweep consumes all of them.
struct TTLForwardCache {
  std::vector<Vector> partials;
};

/// Applies the layer: y(j) = sum_i W(i, j) x(i) + b(j), computed by
/// sequential core contraction. W is never materialized; working memory is
/// bounded by the largest intermediate partial, not by P*Q.
Vector ttl_forward(const TTLinear& ttl, const Vector& x,
                   TTLForwardCache* cache = nullptr);

inline constexpr std::int64_t kReconstructEntryCap = std::int64_t{1} << 24;

/// Materializes the P x Q matrix with W(i, j) equal to the chain product
/// over the double indices of (i, j). With gate fusion the result is the
/// fused blocks stacked along the output dimension in gate order.
///
/// This is a test oracle, not a runtime path: it refuses P*Q beyond
/// entry_cap (throws ShapeError).
Matrix tt_reconstruct(const TTLinear& ttl,
                      std::int64_t entry_cap = kReconstructEntryCap);

enum class InitScalePolicy {
  /// Per-core std (2 / ((P+Q) * prod intermediate ranks))^(1/2d), which puts
  /// the reconstructed matrix at the 2/(P+Q) variance target.
  kGlorotChain,
  /// Unit normal entries; for tests and diagnostics.
  kUnitNormal,
};

/// Deterministic seeded Gaussian init. Bias (when with_bias) starts at zero.
TTLinear tt_random_init(const TTShape& shape, std::uint64_t seed,
                        InitScalePolicy policy = InitScalePolicy::kGlorotChain,
                        bool with_bias = true);

/// All-zero cores (and bias when with_bias); mostly for tests.
TTLinear tt_zeros(const TTShape& shape, bool with_bias = true);

}  // namespace ttnet
