// tests/test_data_io.cpp

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

#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include "support/oracles.hpp"
#include "ttnet/feature_io.hpp"
#include "ttnet/synth_data.hpp"
#include "ttnet/wav_io.hpp"

using namespace ttnet;
using namespace ttnet::audio;

namespace {

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "ttnet_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

std::vector<char> slurp(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(file),
          std::istreambuf_iterator<char>()};
}

void spit(const std::filesystem::path& path, const std::vector<char>& bytes) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("wav round trip") {
  std::mt19937_64 rng(11);
  Waveform wave{testing::random_vector(rng, 4321, 0.2), kSampleRate};
  const auto path = scratch_dir() / "roundtrip.wav";
  write_wav(path, wave);
  const Waveform back = read_wav(path);
  REQUIRE(back.samples.size() == wave.samples.size());
  CHECK(back.sample_rate == kSampleRate);
  CHECK((back.samples - wave.samples).cwiseAbs().maxCoeff() <= 1.0 / 32768.0);

  SUBCASE("samples beyond full scale are clamped, not wrapped") {
    Waveform loud{Vector::Constant(100, 2.0), kSampleRate};
    write_wav(path, loud);
    const Waveform clamped = read_wav(path);
    CHECK(clamped.samples.maxCoeff() <= 1.0);
    CHECK(clamped.samples.minCoeff() > 0.99);
  }
}

TEST_CASE("wav rejects everything but 16-bit mono PCM at 16 kHz") {
  std::mt19937_64 rng(13);
  const auto path = scratch_dir() / "reject.wav";
  write_wav(path, {testing::random_vector(rng, 500, 0.1), kSampleRate});
  const std::vector<char> good = slurp(path);

  SUBCASE("stereo") {
    std::vector<char> bytes = good;
    bytes[22] = 2;  // channel count
    spit(path, bytes);
    CHECK_THROWS_WITH_AS(read_wav(path), doctest::Contains("mono"), IoError);
  }

  SUBCASE("wrong rate") {
    std::vector<char> bytes = good;
    // sample rate little-endian at offset 24: patch to 22050
    bytes[24] = 0x22;
    bytes[25] = 0x56;
    bytes[26] = 0;
    bytes[27] = 0;
    spit(path, bytes);
    CHECK_THROWS_WITH_AS(read_wav(path), doctest::Contains("16000"), IoError);
  }

  SUBCASE("8-bit samples") {
    std::vector<char> bytes = good;
    bytes[34] = 8;  // bits per sample
    spit(path, bytes);
    CHECK_THROWS_WITH_AS(read_wav(path), doctest::Contains("16-bit"), IoError);
  }

  SUBCASE("non-PCM format code") {
    std::vector<char> bytes = good;
    bytes[20] = 3;  // IEEE float
    spit(path, bytes);
    CHECK_THROWS_WITH_AS(read_wav(path), doctest::Contains("PCM"), IoError);
  }

  SUBCASE("not a RIFF file") {
    spit(path, {'n', 'o', 'p', 'e'});
    CHECK_THROWS_AS(read_wav(path), IoError);
  }
}

TEST_CASE("feature dump round trip") {
  std::mt19937_64 rng(17);
  const RowMatrix data = testing::random_row_matrix(rng, 7, 5);
  const auto path = scratch_dir() / "feat.ttfm";

  SUBCASE("double precision is exact") {
    write_ttfm(path, data, 8);
    CHECK(read_ttfm(path) == data);
  }

  SUBCASE("single precision is close") {
    write_ttfm(path, data, 4);
    CHECK((read_ttfm(path) - data).cwiseAbs().maxCoeff() <= 1e-6);
  }

  SUBCASE("format violations") {
    write_ttfm(path, data, 8);
    std::vector<char> bytes = slurp(path);

    std::vector<char> bad_magic = bytes;
    bad_magic[0] = 'X';
    spit(path, bad_magic);
    CHECK_THROWS_WITH_AS(read_ttfm(path), doctest::Contains("magic"), IoError);

    std::vector<char> truncated = bytes;
    truncated.resize(truncated.size() - 17);
    spit(path, truncated);
    CHECK_THROWS_AS(read_ttfm(path), IoError);

    CHECK_THROWS_AS(write_ttfm(path, data, 2), IoError);
  }
}

TEST_CASE("synthetic generators are deterministic and spectrally distinct") {
  const Waveform a = synth::synth_speech(5, 4000);
  const Waveform b = synth::synth_speech(5, 4000);
  CHECK(a.samples == b.samples);
  const Waveform c = synth::synth_speech(6, 4000);
  CHECK(a.samples != c.samples);

  const Waveform noise_a = synth::synth_noise(5, 2, 4000);
  const Waveform noise_b = synth::synth_noise(5, 2, 4000);
  CHECK(noise_a.samples == noise_b.samples);

  // RMS-normalized output.
  CHECK(rms(a.samples) == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(rms(noise_a.samples) == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("dataset generation writes a loadable, consistent manifest") {
  const auto dir = scratch_dir() / "mini_dataset";
  std::filesystem::remove_all(dir);

  synth::DatasetConfig config;
  config.utterances = 2;
  config.seed = 31;
  const synth::Manifest manifest = synth::generate_dataset(config, dir);
  REQUIRE(manifest.items.size() == 2);
  CHECK(manifest.items[0].snr_db == -6.0);
  CHECK(manifest.items[1].snr_db == -3.0);

  const synth::Manifest loaded = synth::load_manifest(dir);
  REQUIRE(loaded.items.size() == 2);
  CHECK(loaded.items[0].id == manifest.items[0].id);

  const MaskDataset data = synth::load_training_data(loaded, dir);
  REQUIRE(data.size() == 2);
  CHECK(data[0].features.cols() == 768);
  CHECK(data[0].mask.cols() == 64);
  CHECK(data[0].features.rows() == data[0].mask.rows());
  CHECK(data[0].mask.minCoeff() >= 0.0);
  CHECK(data[0].mask.maxCoeff() <= 1.0);

  SUBCASE("zero utterances still produce a valid empty manifest") {
    const auto empty_dir = scratch_dir() / "empty_dataset";
    std::filesystem::remove_all(empty_dir);
    config.utterances = 0;
    const synth::Manifest empty = synth::generate_dataset(config, empty_dir);
    CHECK(empty.items.empty());
    CHECK(synth::load_manifest(empty_dir).items.empty());
  }
}
