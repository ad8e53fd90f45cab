// core/include/ttnet/common.hpp

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
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace ttnet {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
// Row-major matrix; frame-indexed data (features, masks) and core scratch
// buffers are laid out row-major throughout.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed shapes, dimension mismatches, invalid arguments.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// File, format and serialization failures.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values, divergence, failed numeric checks.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Config file problems: unknown keys, unparsable values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// splitmix64 step; used to derive independent seed streams from a base seed
/// so that e.g. per-epoch dropout draws do not alias the shuffling stream.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace ttnet
