// core/src/model_io.cpp

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

#include "ttnet/model_io.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <vector>

namespace ttnet {

namespace {

constexpr std::uint8_t kKindLstm = 1;
constexpr std::uint8_t kKindDenseRelu = 2;
constexpr std::uint8_t kKindDenseSigmoid = 3;

class ByteWriter {
 public:
  void u8(std::uint8_t v) { buffer_.push_back(static_cast<std::byte>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    u64(bits);
  }
  void f32(float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    u32(bits);
  }
  void real(double v, int width) {
    if (width == 4)
      f32(static_cast<float>(v));
    else
      f64(v);
  }
  void values(const Vector& v, int width) {
    for (Eigen::Index i = 0; i < v.size(); ++i) real(v[i], width);
  }
  const std::vector<std::byte>& bytes() const { return buffer_; }

 private:
  std::vector<std::byte> buffer_;
};

class ByteReader {
 public:
  explicit ByteReader(std::vector<std::byte> bytes) : bytes_(std::move(bytes)) {}

  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(bytes_[pos_++]);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }
  double f64() {
    const std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }
  double f32() {
    const std::uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }
  double real(int width) { return width == 4 ? f32() : f64(); }
  Vector values(std::int64_t n, int width) {
    Vector v(n);
    for (std::int64_t i = 0; i < n; ++i) v[i] = real(width);
    return v;
  }
  std::size_t position() const { return pos_; }
  std::size_t size() const { return bytes_.size(); }
  std::span<const std::byte> prefix(std::size_t n) const {
    return {bytes_.data(), n};
  }

 private:
  void need(std::size_t n) {
    if (pos_ + n > bytes_.size())
      throw IoError("model file truncated");
  }
  std::vector<std::byte> bytes_;
  std::size_t pos_ = 0;
};

void write_shape(ByteWriter& out, const TTShape& shape) {
  out.u32(static_cast<std::uint32_t>(shape.order()));
  for (int x : shape.p) out.u32(static_cast<std::uint32_t>(x));
  for (int x : shape.q) out.u32(static_cast<std::uint32_t>(x));
  for (int x : shape.ranks) out.u32(static_cast<std::uint32_t>(x));
  out.u32(static_cast<std::uint32_t>(shape.gate_fusion));
}

TTShape read_shape(ByteReader& in) {
  TTShape shape;
  const std::uint32_t d = in.u32();
  if (d == 0 || d > 64) throw IoError("model file: implausible core count");
  shape.p.resize(d);
  shape.q.resize(d);
  shape.ranks.resize(d + 1);
  for (auto& x : shape.p) x = static_cast<int>(in.u32());
  for (auto& x : shape.q) x = static_cast<int>(in.u32());
  for (auto& x : shape.ranks) x = static_cast<int>(in.u32());
  shape.gate_fusion = static_cast<int>(in.u32());
  try {
    shape.validate();
  } catch (const ShapeError& e) {
    throw IoError(std::string("model file: bad shape: ") + e.what());
  }
  return shape;
}

void write_ttl(ByteWriter& out, const TTLinear& ttl, int width) {
  write_shape(out, ttl.shape);
  for (const TTCore& core : ttl.cores) out.values(core.data, width);
  out.u8(ttl.bias ? 1 : 0);
  if (ttl.bias) out.values(*ttl.bias, width);
}

TTLinear read_ttl(ByteReader& in, int width) {
  TTLinear ttl;
  ttl.shape = read_shape(in);
  const int d = ttl.shape.order();
  ttl.cores.resize(d);
  for (int k = 0; k < d; ++k) {
    TTCore& core = ttl.cores[k];
    core.index = k + 1;
    core.p = ttl.shape.p[k];
    core.fused_q = ttl.shape.core_output_dim(k);
    core.r_in = ttl.shape.ranks[k];
    core.r_out = ttl.shape.ranks[k + 1];
    core.data = in.values(
        static_cast<std::int64_t>(core.p) * core.fused_q * core.r_in * core.r_out,
        width);
  }
  if (in.u8() != 0) ttl.bias = in.values(ttl.shape.output_dim(), width);
  return ttl;
}

}  // namespace

std::uint32_t crc32(std::span<const std::byte> bytes) {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t n = 0; n < 256; ++n) {
      std::uint32_t c = n;
      for (int k = 0; k < 8; ++k)
        c = (c & 1u) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      t[n] = c;
    }
    return t;
  }();
  std::uint32_t crc = 0xFFFFFFFFu;
  for (std::byte b : bytes)
    crc = table[(crc ^ static_cast<std::uint8_t>(b)) & 0xFFu] ^ (crc >> 8);
  return crc ^ 0xFFFFFFFFu;
}

void save_model(const TensorNetModel& model, const std::filesystem::path& path,
                int float_width) {
  model.validate();
  if (float_width != 4 && float_width != 8)
    throw IoError("save_model: float width must be 4 or 8");

  ByteWriter out;
  out.u8('T');
  out.u8('T');
  out.u8('N');
  out.u8('N');
  out.u32(kModelFormatVersion);
  out.u8(static_cast<std::uint8_t>(float_width));
  out.u64(model.creation_seed);
  out.f64(model.dropout_p);
  out.u32(static_cast<std::uint32_t>(model.lstm_layers.size() + 2));

  for (const TTLSTMCell& cell : model.lstm_layers) {
    out.u8(kKindLstm);
    out.u32(static_cast<std::uint32_t>(cell.hidden));
    out.u32(static_cast<std::uint32_t>(cell.input));
    write_ttl(out, cell.gates, float_width);
    out.values(cell.b_i, float_width);
    out.values(cell.b_f, float_width);
    out.values(cell.b_o, float_width);
    out.values(cell.b_c, float_width);
    out.u32(static_cast<std::uint32_t>(cell.table1_input_factors.size()));
    for (int x : cell.table1_input_factors)
      out.u32(static_cast<std::uint32_t>(x));
  }
  out.u8(kKindDenseRelu);
  write_ttl(out, model.dense, float_width);
  out.u8(kKindDenseSigmoid);
  write_ttl(out, model.output, float_width);

  const std::uint32_t checksum = crc32(out.bytes());

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("save_model: cannot open " + path.string());
  file.write(reinterpret_cast<const char*>(out.bytes().data()),
             static_cast<std::streamsize>(out.bytes().size()));
  std::array<char, 4> trailer;
  for (int i = 0; i < 4; ++i)
    trailer[i] = static_cast<char>((checksum >> (8 * i)) & 0xFFu);
  file.write(trailer.data(), trailer.size());
  if (!file) throw IoError("save_model: write failed for " + path.string());
}

TensorNetModel load_model(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("load_model: cannot open " + path.string());
  std::vector<std::byte> bytes;
  {
    std::vector<char> raw((std::istreambuf_iterator<char>(file)),
                          std::istreambuf_iterator<char>());
    bytes.resize(raw.size());
    std::memcpy(bytes.data(), raw.data(), raw.size());
  }
  if (bytes.size() < 4 + 4) throw IoError("model file truncated");

  // Verify the trailing checksum over everything that precedes it.
  std::uint32_t stored = 0;
  for (int i = 0; i < 4; ++i)
    stored |= static_cast<std::uint32_t>(
                  static_cast<std::uint8_t>(bytes[bytes.size() - 4 + i]))
              << (8 * i);
  const std::uint32_t computed =
      crc32({bytes.data(), bytes.size() - 4});
  if (stored != computed) throw IoError("model file: checksum mismatch");
  bytes.resize(bytes.size() - 4);

  ByteReader in(std::move(bytes));
  if (in.u8() != 'T' || in.u8() != 'T' || in.u8() != 'N' || in.u8() != 'N')
    throw IoError("model file: bad magic");
  const std::uint32_t version = in.u32();
  if (version != kModelFormatVersion) {
    throw IoError("model file: unsupported format version " +
                  std::to_string(version));
  }
  const int width = in.u8();
  if (width != 4 && width != 8)
    throw IoError("model file: bad float width");

  TensorNetModel model;
  model.creation_seed = in.u64();
  model.dropout_p = in.f64();
  const std::uint32_t layer_count = in.u32();
  if (layer_count < 3) throw IoError("model file: too few layers");

  for (std::uint32_t l = 0; l < layer_count; ++l) {
    const std::uint8_t kind = in.u8();
    if (kind == kKindLstm) {
      TTLSTMCell cell;
      cell.hidden = static_cast<int>(in.u32());
      cell.input = static_cast<int>(in.u32());
      cell.gates = read_ttl(in, width);
      cell.b_i = in.values(cell.hidden, width);
      cell.b_f = in.values(cell.hidden, width);
      cell.b_o = in.values(cell.hidden, width);
      cell.b_c = in.values(cell.hidden, width);
      const std::uint32_t m = in.u32();
      if (m > 64) throw IoError("model file: implausible factor count");
      cell.table1_input_factors.resize(m);
      for (auto& x : cell.table1_input_factors) x = static_cast<int>(in.u32());
      model.lstm_layers.push_back(std::move(cell));
    } else if (kind == kKindDenseRelu) {
      model.dense = read_ttl(in, width);
    } else if (kind == kKindDenseSigmoid) {
      model.output = read_ttl(in, width);
    } else {
      throw IoError("model file: unknown layer kind " + std::to_string(kind));
    }
  }
  if (in.position() != in.size())
    throw IoError("model file: trailing bytes after last layer");

  try {
    model.validate();
  } catch (const ShapeError& e) {
    throw IoError(std::string("model file: broken dimension chain: ") + e.what());
  }
  return model;
}

}  // namespace ttnet
