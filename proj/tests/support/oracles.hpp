// tests/support/oracles.hpp

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
//
// Test-only oracles. Everything here is deliberately written the dumb,
// obviously-correct way and stays independent of the library's contraction
// code paths.

#pragma once

#include <random>
#include <vector>

#include <Eigen/QR>

#include "ttnet/tt_linear.hpp"

namespace ttnet::testing {

/// y(j) = sum_i w(i, j) x(i): the dense oracle for ttl_forward.
inline Vector dense_forward(const Matrix& w, const Vector& x) {
  return w.transpose() * x;
}

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n,
                            double stddev = 1.0) {
  std::normal_distribution<double> gauss(0.0, stddev);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = gauss(rng);
  return v;
}

inline RowMatrix random_row_matrix(std::mt19937_64& rng, Eigen::Index rows,
                                   Eigen::Index cols, double stddev = 1.0) {
  std::normal_distribution<double> gauss(0.0, stddev);
  RowMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = gauss(rng);
  return m;
}

/// Exact full-rank tensor-train embedding of a dense matrix: sequential
/// unfolding, thin QR per mode, maximal ranks. The double-index pairing is
/// the library's row-major convention; gate fusion folds into core 1's
/// output extent.
inline TTLinear tt_from_dense_full_rank(const Matrix& w,
                                        const std::vector<int>& p,
                                        const std::vector<int>& q,
                                        int gate_fusion = 1) {
  const int d = static_cast<int>(p.size());
  std::vector<int> fused_q(q);
  fused_q[0] *= gate_fusion;

  std::vector<std::int64_t> mode(d);
  std::int64_t total = 1;
  for (int k = 0; k < d; ++k) {
    mode[k] = static_cast<std::int64_t>(p[k]) * fused_q[k];
    total *= mode[k];
  }

  // Scatter W into mode-major order: flat = row-major over (l_1, ..., l_d)
  // with l_k = i_k * fused_q_k + j_k.
  Vector scattered(total);
  std::vector<int> mi(d), mj(d);
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    std::int64_t rem = i;
    for (int k = d - 1; k >= 0; --k) {
      mi[k] = static_cast<int>(rem % p[k]);
      rem /= p[k];
    }
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      rem = j;
      for (int k = d - 1; k >= 0; --k) {
        mj[k] = static_cast<int>(rem % fused_q[k]);
        rem /= fused_q[k];
      }
      std::int64_t flat = 0;
      for (int k = 0; k < d; ++k)
        flat = flat * mode[k] + (static_cast<std::int64_t>(mi[k]) * fused_q[k] + mj[k]);
      scattered[flat] = w(i, j);
    }
  }

  TTLinear ttl;
  ttl.shape.p = p;
  ttl.shape.q = q;
  ttl.shape.gate_fusion = gate_fusion;
  ttl.shape.ranks.assign(d + 1, 1);
  ttl.cores.resize(d);

  std::int64_t rest = total;
  int r_prev = 1;
  Matrix current = Eigen::Map<Matrix>(scattered.data(), 1, total);
  for (int k = 0; k < d; ++k) {
    rest /= mode[k];
    // current holds (r_prev x mode_k*rest); refold to (r_prev*mode_k x rest)
    // with row index a*mode_k + l_k.
    Matrix unfolded(r_prev * mode[k], rest);
    for (int a = 0; a < r_prev; ++a)
      for (std::int64_t l = 0; l < mode[k]; ++l)
        for (std::int64_t c = 0; c < rest; ++c)
          unfolded(a * mode[k] + l, c) = current(a, l * rest + c);

    int r_next = 1;
    Matrix q_factor;
    if (k == d - 1) {
      q_factor = unfolded;  // rest == 1; the last core absorbs everything
    } else {
      const Eigen::Index rank =
          std::min<Eigen::Index>(unfolded.rows(), unfolded.cols());
      Eigen::HouseholderQR<Matrix> qr(unfolded);
      q_factor = qr.householderQ() * Matrix::Identity(unfolded.rows(), rank);
      current = qr.matrixQR()
                    .topRows(rank)
                    .triangularView<Eigen::Upper>()
                    .toDenseMatrix();
      r_next = static_cast<int>(rank);
    }

    TTCore& core = ttl.cores[k];
    core.index = k + 1;
    core.p = p[k];
    core.fused_q = fused_q[k];
    core.r_in = r_prev;
    core.r_out = r_next;
    core.data.resize(static_cast<std::int64_t>(core.p) * core.fused_q *
                     core.r_in * core.r_out);
    for (int i = 0; i < core.p; ++i)
      for (int j = 0; j < core.fused_q; ++j)
        for (int a = 0; a < core.r_in; ++a)
          for (int b = 0; b < core.r_out; ++b)
            core.at(i, j, a, b) =
                q_factor(static_cast<std::int64_t>(a) * mode[k] +
                             (static_cast<std::int64_t>(i) * core.fused_q + j),
                         b);

    ttl.shape.ranks[k + 1] = r_next;
    r_prev = r_next;
  }
  ttl.shape.ranks[d] = 1;
  ttl.validate();
  return ttl;
}

}  // namespace ttnet::testing
