// tests/test_tt_linear.cpp

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

#include <doctest.h>

#include <random>

#include "support/oracles.hpp"
#include "ttnet/tt_linear.hpp"

using namespace ttnet;
using testing::dense_forward;
using testing::random_vector;
using testing::tt_from_dense_full_rank;

namespace {

TTLinear d1_example() {
  TTShape shape{{2}, {2}, {1, 1}, 1};
  TTLinear ttl = tt_zeros(shape, false);
  // W = [[1, 2], [3, 4]] in the input-major orientation.
  ttl.cores[0].at(0, 0, 0, 0) = 1.0;
  ttl.cores[0].at(0, 1, 0, 0) = 2.0;
  ttl.cores[0].at(1, 0, 0, 0) = 3.0;
  ttl.cores[0].at(1, 1, 0, 0) = 4.0;
  return ttl;
}

}  // namespace

TEST_CASE("tt_reconstruct: order-1 train is the identity embedding") {
  const Matrix w = tt_reconstruct(d1_example());
  CHECK(w(0, 0) == 1.0);
  CHECK(w(0, 1) == 2.0);
  CHECK(w(1, 0) == 3.0);
  CHECK(w(1, 1) == 4.0);
}

TEST_CASE("tt_reconstruct: zero cores give the zero matrix") {
  TTShape shape{{2, 3}, {3, 2}, {1, 2, 1}, 1};
  const Matrix w = tt_reconstruct(tt_zeros(shape, false));
  CHECK(w.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("tt_reconstruct refuses matrices above the entry cap") {
  TTShape shape{{2, 3}, {3, 2}, {1, 2, 1}, 1};
  const TTLinear ttl = tt_zeros(shape, false);
  CHECK_THROWS_AS(tt_reconstruct(ttl, 35), ShapeError);
  CHECK_NOTHROW(tt_reconstruct(ttl, 36));
}

TEST_CASE("ttl_forward: order-1 dense case") {
  TTLinear ttl = d1_example();
  Vector x(2);
  x << 1.0, 1.0;
  const Vector y = ttl_forward(ttl, x);
  CHECK(y[0] == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(y[1] == doctest::Approx(6.0).epsilon(1e-15));
}

TEST_CASE("ttl_forward: zero input returns the bias") {
  std::mt19937_64 rng(3);
  TTShape shape{{2, 3, 2}, {2, 2, 3}, {1, 2, 2, 1}, 1};
  TTLinear ttl = tt_random_init(shape, 17);
  *ttl.bias = random_vector(rng, ttl.output_dim());
  const Vector y = ttl_forward(ttl, Vector::Zero(ttl.input_dim()));
  CHECK((y - *ttl.bias).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ttl_forward rejects a wrong input length") {
  TTLinear ttl = d1_example();
  CHECK_THROWS_AS(ttl_forward(ttl, Vector::Zero(3)), ShapeError);
}

TEST_CASE("ttl_forward matches the dense reconstruction oracle") {
  std::mt19937_64 rng(11);

  SUBCASE("the reference random shape") {
    TTShape shape{{2, 3, 2}, {2, 2, 3}, {1, 2, 2, 1}, 1};
    TTLinear ttl = tt_random_init(shape, 5);
    *ttl.bias = random_vector(rng, ttl.output_dim());
    const Matrix w = tt_reconstruct(ttl);
    for (int trial = 0; trial < 100; ++trial) {
      const Vector x = random_vector(rng, ttl.input_dim());
      const Vector expected = dense_forward(w, x) + *ttl.bias;
      const Vector actual = ttl_forward(ttl, x);
      CHECK((actual - expected).norm() <= 1e-12 * expected.norm());
    }
  }

  SUBCASE("randomized shapes incl. gate fusion") {
    std::uniform_int_distribution<int> factor(1, 4), order(1, 4), rank(1, 4);
    for (int trial = 0; trial < 60; ++trial) {
      TTShape shape;
      const int d = order(rng);
      for (int k = 0; k < d; ++k) {
        shape.p.push_back(factor(rng));
        shape.q.push_back(factor(rng));
      }
      shape.ranks.assign(d + 1, 1);
      for (int k = 1; k < d; ++k) shape.ranks[k] = rank(rng);
      shape.gate_fusion = trial % 3 == 0 ? 4 : 1;

      TTLinear ttl = tt_random_init(shape, 1000 + trial);
      const Matrix w = tt_reconstruct(ttl);
      const Vector x = random_vector(rng, ttl.input_dim());
      const Vector expected = dense_forward(w, x);
      const Vector actual = ttl_forward(ttl, x);
      const double scale = std::max(expected.norm(), 1e-30);
      CHECK((actual - expected).norm() <= 1e-12 * scale);
    }
  }
}

TEST_CASE("full-rank embedding reconstructs any dense matrix exactly") {
  std::mt19937_64 rng(23);
  struct Case {
    std::vector<int> p, q;
  };
  for (const Case& c : {Case{{4, 4}, {4, 4}},        // 16 x 16
                        Case{{4, 4, 4}, {2, 4, 4}},  // 64 x 32
                        Case{{16, 16}, {16, 16}},    // 256 x 256
                        Case{{5, 3}, {3, 7}}}) {     // 15 x 21
    std::int64_t rows = 1, cols = 1;
    for (int x : c.p) rows *= x;
    for (int x : c.q) cols *= x;
    const Matrix w = testing::random_row_matrix(rng, rows, cols);
    const TTLinear ttl = tt_from_dense_full_rank(w, c.p, c.q);
    const Matrix back = tt_reconstruct(ttl);
    CHECK((back - w).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("tt_random_init") {
  const TTShape shape{{16, 16, 3}, {16, 16, 2}, {1, 4, 4, 1}, 1};

  SUBCASE("deterministic for a fixed seed") {
    const TTLinear a = tt_random_init(shape, 99);
    const TTLinear b = tt_random_init(shape, 99);
    for (std::size_t k = 0; k < a.cores.size(); ++k)
      CHECK(a.cores[k].data == b.cores[k].data);
  }

  SUBCASE("seed change alters at least one entry") {
    const TTLinear a = tt_random_init(shape, 99);
    const TTLinear b = tt_random_init(shape, 100);
    bool any_diff = false;
    for (std::size_t k = 0; k < a.cores.size(); ++k)
      if (a.cores[k].data != b.cores[k].data) any_diff = true;
    CHECK(any_diff);
  }

  SUBCASE("reconstructed variance sits near the 2/(P+Q) target") {
    const TTLinear ttl = tt_random_init(shape, 7);
    const Matrix w = tt_reconstruct(ttl);
    const double variance = w.array().square().mean();
    const double target = 2.0 / (768.0 + 512.0);
    CHECK(variance > target / 3.0);
    CHECK(variance < target * 3.0);
  }

  SUBCASE("bias starts at zero") {
    const TTLinear ttl = tt_random_init(shape, 7);
    REQUIRE(ttl.bias.has_value());
    CHECK(ttl.bias->cwiseAbs().maxCoeff() == 0.0);
  }
}
