// core/src/feature_io.cpp

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

#include "ttnet/feature_io.hpp"

#include <cstring>
#include <fstream>
#include <vector>

namespace ttnet::audio {

void write_ttfm(const std::filesystem::path& path, const RowMatrix& data,
                int float_width) {
  if (float_width != 4 && float_width != 8)
    throw IoError("ttfm: float width must be 4 or 8");

  std::vector<char> out;
  out.insert(out.end(), {'T', 'T', 'F', 'M'});
  const auto put_u32 = [&out](std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
      out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  };
  put_u32(static_cast<std::uint32_t>(data.rows()));
  put_u32(static_cast<std::uint32_t>(data.cols()));
  out.push_back(static_cast<char>(float_width));

  for (Eigen::Index r = 0; r < data.rows(); ++r) {
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
      if (float_width == 4) {
        const float v = static_cast<float>(data(r, c));
        char buf[4];
        std::memcpy(buf, &v, 4);
        out.insert(out.end(), buf, buf + 4);
      } else {
        const double v = data(r, c);
        char buf[8];
        std::memcpy(buf, &v, 8);
        out.insert(out.end(), buf, buf + 8);
      }
    }
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("ttfm: cannot open " + path.string() + " for writing");
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw IoError("ttfm: write failed for " + path.string());
}

RowMatrix read_ttfm(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("ttfm: cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(file)),
                          std::istreambuf_iterator<char>());
  if (bytes.size() < 13) throw IoError("ttfm: truncated header");
  if (std::memcmp(bytes.data(), "TTFM", 4) != 0)
    throw IoError("ttfm: bad magic");

  const auto get_u32 = [&bytes](std::size_t pos) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(bytes[pos + i]))
           << (8 * i);
    return v;
  };
  const std::uint32_t rows = get_u32(4);
  const std::uint32_t cols = get_u32(8);
  const int width = static_cast<std::uint8_t>(bytes[12]);
  if (width != 4 && width != 8) throw IoError("ttfm: bad float width");

  const std::size_t expected =
      13 + static_cast<std::size_t>(rows) * cols * width;
  if (bytes.size() != expected) throw IoError("ttfm: payload size mismatch");

  RowMatrix data(rows, cols);
  std::size_t pos = 13;
  for (std::uint32_t r = 0; r < rows; ++r) {
    for (std::uint32_t c = 0; c < cols; ++c) {
      if (width == 4) {
        float v;
        std::memcpy(&v, bytes.data() + pos, 4);
        data(r, c) = v;
        pos += 4;
      } else {
        double v;
        std::memcpy(&v, bytes.data() + pos, 8);
        data(r, c) = v;
        pos += 8;
      }
    }
  }
  return data;
}

}  // namespace ttnet::audio
