// core/include/ttnet/wav_io.hpp

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

inline constexpr int kSampleRate = 16000;

struct Waveform {
  Vector samples;  ///< in [-1, 1)
  int sample_rate = kSampleRate;
};

/// Reads 16-bit PCM, mono, 16 kHz RIFF/WAVE. Anything else (other encodings,
/// channel counts or rates) is rejected with a precise IoError.
Waveform read_wav(const std::filesystem::path& path);

/// Writes 16-bit PCM, mono, 16 kHz. Samples are clamped to [-1, 1] and
/// rounded deterministically.
void write_wav(const std::filesystem::path& path, const Waveform& wave);

}  // namespace ttnet::audio
