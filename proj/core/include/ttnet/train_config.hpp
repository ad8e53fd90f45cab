// core/include/ttnet/train_config.hpp

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
#include <map>
#include <string>

#include "ttnet/tensornet.hpp"

namespace ttnet {

/// Parsed "key = value" config: training hyperparameters plus factorization
/// overrides for the reference architecture. Unknown keys are rejected.
///
/// Recognized keys:
///   learning_rate, momentum, clip_norm, epochs, batch_size, dropout, seed,
///   truncation_window
///   <layer>.p, <layer>.q, <layer>.ranks           (comma-separated ints)
///   lstm1.table1_p, lstm2.table1_p, lstm3.table1_p
/// with <layer> one of lstm1, lstm2, lstm3, dense, output.
struct ParsedConfig {
  TrainConfig train;
  std::map<std::string, std::vector<int>> factor_overrides;
};

/// Lines are "key = value"; blank lines and '#' comments are skipped.
/// Throws ConfigError on unknown keys or unparsable values.
ParsedConfig parse_config_text(const std::string& text);
ParsedConfig parse_config_file(const std::filesystem::path& path);

/// Applies factor overrides onto a model config (factorizations only; layer
/// widths stay fixed). Throws ConfigError when an override breaks the
/// required products.
void apply_factor_overrides(
    ModelConfig& config,
    const std::map<std::string, std::vector<int>>& overrides);

}  // namespace ttnet
