// core/include/ttnet/synth_data.hpp

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
#include <string>
#include <vector>

#include "ttnet/audio_features.hpp"
#include "ttnet/tensornet.hpp"

namespace ttnet::synth {

/// Harmonic tone complex with slow pitch drift and syllabic amplitude
/// modulation; spectrally concentrated, speech-shaped enough for mask
/// learning. RMS-normalized.
audio::Waveform synth_speech(std::uint64_t seed, std::int64_t samples);

/// Colored noise; `type` cycles through white, pink, low-passed rumble and
/// high-passed hiss. RMS-normalized.
audio::Waveform synth_noise(std::uint64_t seed, int type, std::int64_t samples);

struct DatasetConfig {
  int utterances = 8;
  std::vector<double> snr_db = {-6.0, -3.0, 0.0, 3.0, 6.0, 9.0};
  std::uint64_t seed = 0;
  double seconds = 1.0;
};

struct UtteranceRecord {
  std::string id;
  std::string clean_wav;
  std::string noisy_wav;
  std::string features;  ///< TTFM dump of the standardized network input
  std::string mask;      ///< TTFM dump of the ideal-ratio-mask target
  double snr_db = 0.0;
};

struct Manifest {
  std::vector<UtteranceRecord> items;
};

/// Generates the dataset under out_dir: per utterance a clean/noisy WAV
/// pair, the feature dump and the mask target, mixed at the SNR list in
/// round-robin order, plus manifest.json. Fully deterministic in the seed.
Manifest generate_dataset(const DatasetConfig& config,
                          const std::filesystem::path& out_dir);

Manifest load_manifest(const std::filesystem::path& dir);
void save_manifest(const Manifest& manifest, const std::filesystem::path& dir);

/// Reads the feature/mask dumps referenced by a manifest.
MaskDataset load_training_data(const Manifest& manifest,
                               const std::filesystem::path& dir);

}  // namespace ttnet::synth
