// core/src/wav_io.cpp

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

#include "ttnet/wav_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <vector>

namespace ttnet::audio {

namespace {

struct LittleEndianReader {
  const std::vector<char>& bytes;
  std::size_t pos = 0;

  void need(std::size_t n, const char* what) const {
    if (pos + n > bytes.size())
      throw IoError(std::string("wav: truncated file while reading ") + what);
  }
  std::uint16_t u16(const char* what) {
    need(2, what);
    std::uint16_t v = static_cast<std::uint8_t>(bytes[pos]) |
                      (static_cast<std::uint16_t>(
                           static_cast<std::uint8_t>(bytes[pos + 1]))
                       << 8);
    pos += 2;
    return v;
  }
  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(bytes[pos + i]))
           << (8 * i);
    pos += 4;
    return v;
  }
  std::string tag(const char* what) {
    need(4, what);
    std::string s(bytes.data() + pos, 4);
    pos += 4;
    return s;
  }
};

void put_u16(std::vector<char>& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void put_u32(std::vector<char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

}  // namespace

Waveform read_wav(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("wav: cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(file)),
                          std::istreambuf_iterator<char>());

  LittleEndianReader in{bytes};
  if (in.tag("RIFF tag") != "RIFF") throw IoError("wav: not a RIFF file");
  in.u32("RIFF size");
  if (in.tag("WAVE tag") != "WAVE") throw IoError("wav: not a WAVE file");

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  Vector samples;
  bool have_data = false;

  while (in.pos + 8 <= bytes.size()) {
    const std::string id = in.tag("chunk id");
    const std::uint32_t size = in.u32("chunk size");
    if (id == "fmt ") {
      if (size < 16) throw IoError("wav: fmt chunk too small");
      format = in.u16("audio format");
      channels = in.u16("channel count");
      rate = in.u32("sample rate");
      in.u32("byte rate");
      in.u16("block align");
      bits = in.u16("bits per sample");
      in.pos += size - 16;
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw IoError("wav: data chunk before fmt chunk");
      if (format != 1)
        throw IoError("wav: only PCM (format 1) is supported, got format " +
                      std::to_string(format));
      if (channels != 1)
        throw IoError("wav: only mono is supported, got " +
                      std::to_string(channels) + " channels");
      if (bits != 16)
        throw IoError("wav: only 16-bit samples are supported, got " +
                      std::to_string(bits) + " bits");
      if (rate != kSampleRate)
        throw IoError("wav: only 16000 Hz is supported, got " +
                      std::to_string(rate) + " Hz");
      in.need(size, "sample data");
      const std::size_t count = size / 2;
      samples.resize(count);
      for (std::size_t i = 0; i < count; ++i) {
        const std::int16_t raw = static_cast<std::int16_t>(
            static_cast<std::uint8_t>(bytes[in.pos + 2 * i]) |
            (static_cast<std::uint16_t>(
                 static_cast<std::uint8_t>(bytes[in.pos + 2 * i + 1]))
             << 8));
        samples[i] = raw / 32768.0;
      }
      in.pos += size;
      have_data = true;
    } else {
      // Skip unknown chunks (padded to even size).
      in.need(size, "chunk body");
      in.pos += size + (size % 2);
    }
  }
  if (!have_data) throw IoError("wav: no data chunk in " + path.string());
  return {samples, kSampleRate};
}

void write_wav(const std::filesystem::path& path, const Waveform& wave) {
  if (wave.sample_rate != kSampleRate)
    throw IoError("wav: only 16000 Hz output is supported");
  const std::uint32_t count = static_cast<std::uint32_t>(wave.samples.size());
  const std::uint32_t data_size = count * 2;

  std::vector<char> out;
  out.reserve(44 + data_size);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put_u32(out, 36 + data_size);
  out.insert(out.end(), {'W', 'A', 'V', 'E'});
  out.insert(out.end(), {'f', 'm', 't', ' '});
  put_u32(out, 16);
  put_u16(out, 1);                       // PCM
  put_u16(out, 1);                       // mono
  put_u32(out, kSampleRate);
  put_u32(out, kSampleRate * 2);         // byte rate
  put_u16(out, 2);                       // block align
  put_u16(out, 16);                      // bits
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put_u32(out, data_size);
  for (std::uint32_t i = 0; i < count; ++i) {
    // Symmetric with the read scaling (x = raw / 32768), clamped at full scale.
    const long quantized = std::lrint(wave.samples[i] * 32768.0);
    const auto raw = static_cast<std::int16_t>(std::clamp(quantized, -32768l, 32767l));
    put_u16(out, static_cast<std::uint16_t>(raw));
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("wav: cannot open " + path.string() + " for writing");
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw IoError("wav: write failed for " + path.string());
}

}  // namespace ttnet::audio
