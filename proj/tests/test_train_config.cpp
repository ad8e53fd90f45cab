// tests/test_train_config.cpp

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

#include "ttnet/train_config.hpp"

using namespace ttnet;

TEST_CASE("config parsing") {
  SUBCASE("defaults survive an empty file") {
    const ParsedConfig parsed = parse_config_text("");
    CHECK(parsed.train.epochs == 20);
    CHECK(parsed.train.momentum == 0.9);
    CHECK(parsed.factor_overrides.empty());
  }

  SUBCASE("comments, blanks and all known keys") {
    const ParsedConfig parsed = parse_config_text(
        "# a comment\n"
        "\n"
        "learning_rate = 0.05   # trailing comment\n"
        "momentum = 0.8\n"
        "clip_norm = 2.5\n"
        "epochs = 7\n"
        "batch_size = 2\n"
        "dropout = 0.25\n"
        "seed = 99\n"
        "truncation_window = 4\n"
        "lstm1.ranks = 1,2,2,1\n"
        "dense.p = 8,8,8\n");
    CHECK(parsed.train.learning_rate == 0.05);
    CHECK(parsed.train.momentum == 0.8);
    CHECK(parsed.train.clip_norm == 2.5);
    CHECK(parsed.train.epochs == 7);
    CHECK(parsed.train.batch_size == 2);
    CHECK(parsed.train.dropout_p == 0.25);
    CHECK(parsed.train.seed == 99);
    CHECK(parsed.train.truncation_window == 4);
    CHECK(parsed.factor_overrides.at("lstm1.ranks") ==
          std::vector<int>{1, 2, 2, 1});
    CHECK(parsed.factor_overrides.at("dense.p") == std::vector<int>{8, 8, 8});
  }

  SUBCASE("unknown keys are rejected") {
    CHECK_THROWS_WITH_AS(parse_config_text("learning_rte = 0.1\n"),
                         doctest::Contains("unknown key"), ConfigError);
  }

  SUBCASE("malformed values are rejected") {
    CHECK_THROWS_AS(parse_config_text("epochs = seven\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("learning_rate = 0.1x\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("just a line\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("epochs =\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("lstm1.ranks = 1,,1\n"), ConfigError);
  }

  SUBCASE("out-of-range hyperparameters are rejected") {
    CHECK_THROWS_AS(parse_config_text("dropout = 1.0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("learning_rate = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("epochs = -3\n"), ConfigError);
  }
}

TEST_CASE("factor overrides") {
  SUBCASE("a valid override lands in the model config") {
    ModelConfig config = reference_model_config();
    const ParsedConfig parsed = parse_config_text(
        "lstm1.p = 20,16,4\n"
        "lstm1.ranks = 1,2,2,1\n"
        "dense.q = 8,4,4\n");
    apply_factor_overrides(config, parsed.factor_overrides);
    CHECK(config.lstm[0].concat_factors == std::vector<int>{20, 16, 4});
    CHECK(config.lstm[0].ranks == std::vector<int>{1, 2, 2, 1});
    CHECK(config.dense.q == std::vector<int>{8, 4, 4});
    CHECK_NOTHROW(make_tensornet(config, 1));
  }

  SUBCASE("products must match the layer widths") {
    ModelConfig config = reference_model_config();
    const ParsedConfig parsed = parse_config_text("lstm1.p = 16,16,4\n");
    CHECK_THROWS_WITH_AS(apply_factor_overrides(config, parsed.factor_overrides),
                         doctest::Contains("1280"), ConfigError);

    const ParsedConfig parsed_q = parse_config_text("output.q = 8,4\n");
    CHECK_THROWS_AS(apply_factor_overrides(config, parsed_q.factor_overrides),
                    ConfigError);
  }

  SUBCASE("table1 overrides check the input product") {
    ModelConfig config = reference_model_config();
    const ParsedConfig good = parse_config_text("lstm1.table1_p = 24,16,2\n");
    apply_factor_overrides(config, good.factor_overrides);
    CHECK(config.lstm[0].table1_input_factors == std::vector<int>{24, 16, 2});

    const ParsedConfig bad = parse_config_text("lstm1.table1_p = 16,16,2\n");
    CHECK_THROWS_AS(apply_factor_overrides(config, bad.factor_overrides),
                    ConfigError);
  }
}
