// core/include/ttnet/feature_io.hpp

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

#include <filesystem>

#include "ttnet/common.hpp"

namespace ttnet::audio {

/// Feature/mask dump format (little-endian):
///   magic "TTFM" | u32 rows | u32 cols | u8 float width (4|8) |
///   row-major payload.
void write_ttfm(const std::filesystem::path& path, const RowMatrix& data,
                int float_width = 8);

RowMatrix read_ttfm(const std::filesystem::path& path);

}  // namespace ttnet::audio
