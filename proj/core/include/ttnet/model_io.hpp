// core/include/ttnet/model_io.hpp

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
#include <filesystem>
#include <span>

#include "ttnet/tensornet.hpp"

namespace ttnet {

/// Model file layout (all integers little-endian):
///   magic "TTNN" | u32 version=1 | u8 float width (4|8) |
///   u64 creation seed | f64 dropout probability | u32 layer count |
///   per layer:
///     u8 kind (1 recurrent, 2 dense+relu, 3 dense+sigmoid)
///     kind 1: u32 hidden, u32 input
///     shape: u32 d | d x u32 p | d x u32 q | (d+1) x u32 ranks | u32 fusion
///     cores in chain order, each row-major over (p, fused q, r_in, r_out)
///     u8 has_bias | bias values
///     kind 1: 4*hidden gate-bias values in gate order (i, f, o, cbar)
///     kind 1: u32 m | m x u32 input-only counting factors
///   u32 CRC-32 of every preceding byte.
inline constexpr std::uint32_t kModelFormatVersion = 1;

void save_model(const TensorNetModel& model, const std::filesystem::path& path,
                int float_width = 8);

/// Verifies magic, version, checksum and the layer dimension chain.
/// Throws IoError on any of: truncation, checksum mismatch, unknown or
/// future version, malformed chain.
TensorNetModel load_model(const std::filesystem::path& path);

/// CRC-32 (IEEE reflected polynomial 0xEDB88320), as used by the model and
/// exposed for tests.
std::uint32_t crc32(std::span<const std::byte> bytes);

}  // namespace ttnet
