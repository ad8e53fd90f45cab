// core/src/synth_data.cpp

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

#include "ttnet/synth_data.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "ttnet/feature_io.hpp"

namespace ttnet::synth {

using audio::Waveform;

namespace {

constexpr int kRate = audio::kSampleRate;

void normalize_rms(Vector& samples, double target) {
  const double current = audio::rms(samples);
  if (current > 0.0) samples *= target / current;
}

}  // namespace

Waveform synth_speech(std::uint64_t seed, std::int64_t samples) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pitch(110.0, 220.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const double f0 = pitch(rng);
  const double drift_rate = 0.5 + unit(rng);        // Hz of the pitch wobble
  const double drift_depth = 0.04 + 0.04 * unit(rng);
  const double syllable_rate = 2.5 + 2.5 * unit(rng);
  const double syllable_phase = 2.0 * std::numbers::pi * unit(rng);
  const int harmonics =
      std::min(12, static_cast<int>(4000.0 / f0));
  std::vector<double> harmonic_phase(harmonics);
  for (int h = 0; h < harmonics; ++h)
    harmonic_phase[h] = 2.0 * std::numbers::pi * unit(rng);

  Vector out(samples);
  double phase = 0.0;
  for (std::int64_t s = 0; s < samples; ++s) {
    const double t = static_cast<double>(s) / kRate;
    const double instantaneous =
        f0 * (1.0 + drift_depth *
                        std::sin(2.0 * std::numbers::pi * drift_rate * t));
    phase += 2.0 * std::numbers::pi * instantaneous / kRate;
    double value = 0.0;
    for (int h = 0; h < harmonics; ++h)
      value += std::sin((h + 1) * phase + harmonic_phase[h]) / (h + 1);
    // Raised-cosine syllabic envelope plus a short fade at both ends.
    double envelope =
        0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * syllable_rate * t +
                              syllable_phase));
    const double edge = 0.02 * kRate;
    if (s < edge) envelope *= s / edge;
    if (samples - 1 - s < edge) envelope *= (samples - 1 - s) / edge;
    out[s] = envelope * value;
  }
  normalize_rms(out, 0.1);
  return {out, kRate};
}

Waveform synth_noise(std::uint64_t seed, int type, std::int64_t samples) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Vector out(samples);
  switch (type % 4) {
    case 0:  // white
      for (std::int64_t s = 0; s < samples; ++s) out[s] = gauss(rng);
      break;
    case 1: {  // pink-ish: three relaxing one-pole states summed
      double s1 = 0.0, s2 = 0.0, s3 = 0.0;
      for (std::int64_t s = 0; s < samples; ++s) {
        const double white = gauss(rng);
        s1 = 0.99886 * s1 + 0.0555179 * white;
        s2 = 0.96300 * s2 + 0.2965164 * white;
        s3 = 0.57000 * s3 + 1.0526913 * white;
        out[s] = s1 + s2 + s3 + 0.1848 * white;
      }
      break;
    }
    case 2: {  // low-passed rumble (one-pole at ~400 Hz)
      const double a = std::exp(-2.0 * std::numbers::pi * 400.0 / kRate);
      double state = 0.0;
      for (std::int64_t s = 0; s < samples; ++s) {
        state = a * state + (1.0 - a) * gauss(rng);
        out[s] = state;
      }
      break;
    }
    default: {  // high-passed hiss (white minus one-pole low-pass at ~2 kHz)
      const double a = std::exp(-2.0 * std::numbers::pi * 2000.0 / kRate);
      double state = 0.0;
      for (std::int64_t s = 0; s < samples; ++s) {
        const double white = gauss(rng);
        state = a * state + (1.0 - a) * white;
        out[s] = white - state;
      }
      break;
    }
  }
  normalize_rms(out, 0.1);
  return {out, kRate};
}

Manifest generate_dataset(const DatasetConfig& config,
                          const std::filesystem::path& out_dir) {
  if (config.utterances < 0)
    throw ShapeError("generate_dataset: utterance count must be >= 0");
  if (config.snr_db.empty())
    throw ShapeError("generate_dataset: need at least one SNR level");
  if (config.seconds <= 0.0)
    throw ShapeError("generate_dataset: duration must be positive");

  std::filesystem::create_directories(out_dir);
  const auto bank = audio::make_gammatone_bank();
  const auto samples = static_cast<std::int64_t>(config.seconds * kRate);

  Manifest manifest;
  for (int u = 0; u < config.utterances; ++u) {
    const double snr = config.snr_db[u % config.snr_db.size()];
    const std::uint64_t base = mix_seed(config.seed, static_cast<std::uint64_t>(u));

    const Waveform clean = synth_speech(mix_seed(base, 1), samples);
    const Waveform noise =
        synth_noise(mix_seed(base, 2), u, samples + kRate / 2);
    const audio::MixResult mixed =
        audio::mix_at_snr(clean, noise, snr, mix_seed(base, 3));

    const RowMatrix features = audio::model_input_features(bank, mixed.noisy);
    const audio::Cochleagram clean_cg =
        audio::cochleagram(audio::gammatone_analyze(bank, clean));
    const audio::Cochleagram noise_cg = audio::cochleagram(
        audio::gammatone_analyze(bank, mixed.scaled_noise));
    const RowMatrix mask = audio::ideal_ratio_mask(clean_cg, noise_cg);

    std::ostringstream id;
    id << "utt_" << std::setfill('0') << std::setw(4) << u;
    UtteranceRecord record;
    record.id = id.str();
    record.clean_wav = record.id + "_clean.wav";
    record.noisy_wav = record.id + "_noisy.wav";
    record.features = record.id + "_feat.ttfm";
    record.mask = record.id + "_mask.ttfm";
    record.snr_db = snr;

    audio::write_wav(out_dir / record.clean_wav, clean);
    audio::write_wav(out_dir / record.noisy_wav, mixed.noisy);
    audio::write_ttfm(out_dir / record.features, features);
    audio::write_ttfm(out_dir / record.mask, mask);
    manifest.items.push_back(std::move(record));
  }

  save_manifest(manifest, out_dir);
  return manifest;
}

void save_manifest(const Manifest& manifest, const std::filesystem::path& dir) {
  nlohmann::json doc = nlohmann::json::array();
  for (const UtteranceRecord& r : manifest.items) {
    doc.push_back({{"id", r.id},
                   {"clean_wav", r.clean_wav},
                   {"noisy_wav", r.noisy_wav},
                   {"features", r.features},
                   {"mask", r.mask},
                   {"snr_db", r.snr_db}});
  }
  std::ofstream file(dir / "manifest.json", std::ios::trunc);
  if (!file) throw IoError("manifest: cannot write to " + dir.string());
  file << doc.dump(2) << "\n";
}

Manifest load_manifest(const std::filesystem::path& dir) {
  const auto path = dir / "manifest.json";
  std::ifstream file(path);
  if (!file) throw IoError("manifest: cannot open " + path.string());
  nlohmann::json doc;
  try {
    file >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("manifest: parse error: " + std::string(e.what()));
  }
  if (!doc.is_array()) throw IoError("manifest: expected a JSON array");

  Manifest manifest;
  for (const auto& item : doc) {
    UtteranceRecord r;
    try {
      r.id = item.at("id").get<std::string>();
      r.clean_wav = item.at("clean_wav").get<std::string>();
      r.noisy_wav = item.at("noisy_wav").get<std::string>();
      r.features = item.at("features").get<std::string>();
      r.mask = item.at("mask").get<std::string>();
      r.snr_db = item.at("snr_db").get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw IoError("manifest: bad record: " + std::string(e.what()));
    }
    manifest.items.push_back(std::move(r));
  }
  return manifest;
}

MaskDataset load_training_data(const Manifest& manifest,
                               const std::filesystem::path& dir) {
  MaskDataset data;
  for (const UtteranceRecord& r : manifest.items) {
    TrainSample sample;
    sample.features = audio::read_ttfm(dir / r.features);
    sample.mask = audio::read_ttfm(dir / r.mask);
    sample.snr_db = r.snr_db;
    if (sample.features.rows() != sample.mask.rows())
      throw IoError("dataset: feature/mask frame mismatch for " + r.id);
    data.push_back(std::move(sample));
  }
  return data;
}

}  // namespace ttnet::synth
