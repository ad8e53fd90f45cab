// tests/test_model_io.cpp

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

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include "support/oracles.hpp"
#include "ttnet/model_io.hpp"

using namespace ttnet;

namespace {

std::filesystem::path scratch_file(const char* name) {
  const auto dir = std::filesystem::temp_directory_path() / "ttnet_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
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

void refresh_crc(std::vector<char>& bytes) {
  const std::uint32_t sum = crc32(
      {reinterpret_cast<const std::byte*>(bytes.data()), bytes.size() - 4});
  for (int i = 0; i < 4; ++i)
    bytes[bytes.size() - 4 + i] = static_cast<char>((sum >> (8 * i)) & 0xFF);
}

}  // namespace

TEST_CASE("crc32 reference values") {
  const char* text = "123456789";
  CHECK(crc32({reinterpret_cast<const std::byte*>(text), 9}) == 0xCBF43926u);
  CHECK(crc32({}) == 0u);
}

TEST_CASE("model round trip is bitwise lossless") {
  const TensorNetModel model = make_tensornet(reduced_model_config(), 1234);
  const auto path = scratch_file("roundtrip.ttnn");
  save_model(model, path);
  const TensorNetModel loaded = load_model(path);

  CHECK(loaded.creation_seed == model.creation_seed);
  CHECK(loaded.dropout_p == model.dropout_p);
  const auto expected =
      static_cast<const TensorNetModel&>(model).trainable_params();
  const auto actual =
      static_cast<const TensorNetModel&>(loaded).trainable_params();
  REQUIRE(expected.size() == actual.size());
  for (std::size_t n = 0; n < expected.size(); ++n)
    CHECK(*expected[n] == *actual[n]);
  for (std::size_t l = 0; l < model.lstm_layers.size(); ++l)
    CHECK(loaded.lstm_layers[l].table1_input_factors ==
          model.lstm_layers[l].table1_input_factors);

  SUBCASE("save-load-save is byte stable") {
    const auto path2 = scratch_file("roundtrip2.ttnn");
    save_model(loaded, path2);
    CHECK(slurp(path) == slurp(path2));
  }

  SUBCASE("forward outputs and parameter counts survive") {
    std::mt19937_64 rng(4);
    const RowMatrix feats =
        testing::random_row_matrix(rng, 4, model.feature_dim());
    CHECK(model_forward(model, feats, false) ==
          model_forward(loaded, feats, false));
    const auto a = count_model_params(model, CountConvention::kTable1);
    const auto b = count_model_params(loaded, CountConvention::kTable1);
    for (std::size_t n = 0; n < a.size(); ++n) CHECK(a[n].tt == b[n].tt);
  }
}

TEST_CASE("single-precision serialization") {
  const TensorNetModel model = make_tensornet(reduced_model_config(), 9);
  const auto path = scratch_file("narrow.ttnn");
  save_model(model, path, 4);
  const TensorNetModel loaded = load_model(path);
  const auto expected =
      static_cast<const TensorNetModel&>(model).trainable_params();
  const auto actual =
      static_cast<const TensorNetModel&>(loaded).trainable_params();
  for (std::size_t n = 0; n < expected.size(); ++n)
    CHECK((*expected[n] - *actual[n]).cwiseAbs().maxCoeff() <= 1e-6);

  CHECK_THROWS_AS(save_model(model, path, 5), IoError);
}

TEST_CASE("corruption and version handling") {
  const TensorNetModel model = make_tensornet(reduced_model_config(), 77);
  const auto path = scratch_file("corrupt.ttnn");
  save_model(model, path);
  const std::vector<char> original = slurp(path);

  SUBCASE("a flipped payload byte fails the checksum") {
    std::vector<char> bytes = original;
    bytes[bytes.size() / 2] = static_cast<char>(bytes[bytes.size() / 2] ^ 0x40);
    spit(path, bytes);
    CHECK_THROWS_WITH_AS(load_model(path), doctest::Contains("checksum"),
                         IoError);
  }

  SUBCASE("a future format version is rejected explicitly") {
    std::vector<char> bytes = original;
    bytes[4] = 2;  // version field follows the 4-byte magic
    refresh_crc(bytes);
    spit(path, bytes);
    CHECK_THROWS_WITH_AS(load_model(path), doctest::Contains("version"),
                         IoError);
  }

  SUBCASE("truncated files are rejected") {
    std::vector<char> bytes = original;
    bytes.resize(bytes.size() / 3);
    spit(path, bytes);
    CHECK_THROWS_AS(load_model(path), IoError);
  }

  SUBCASE("bad magic is rejected") {
    std::vector<char> bytes = original;
    bytes[0] = 'X';
    refresh_crc(bytes);
    spit(path, bytes);
    CHECK_THROWS_WITH_AS(load_model(path), doctest::Contains("magic"), IoError);
  }
}
