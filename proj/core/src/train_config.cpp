// core/src/train_config.cpp

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

#include "ttnet/train_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace ttnet {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t consumed = 0;
  double v;
  try {
    v = std::stod(value, &consumed);
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for " + key + ": " + value);
  }
  if (consumed != value.size())
    throw ConfigError("config: bad numeric value for " + key + ": " + value);
  return v;
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  std::size_t consumed = 0;
  std::int64_t v;
  try {
    v = std::stoll(value, &consumed);
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer value for " + key + ": " + value);
  }
  if (consumed != value.size())
    throw ConfigError("config: bad integer value for " + key + ": " + value);
  return v;
}

std::vector<int> parse_int_list(const std::string& key,
                                const std::string& value) {
  std::vector<int> out;
  std::stringstream stream(value);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (item.empty())
      throw ConfigError("config: empty list entry for " + key);
    out.push_back(static_cast<int>(parse_int(key, item)));
  }
  if (out.empty()) throw ConfigError("config: empty list for " + key);
  return out;
}

const std::set<std::string>& factor_keys() {
  static const std::set<std::string> keys = [] {
    std::set<std::string> k;
    for (const char* layer : {"lstm1", "lstm2", "lstm3", "dense", "output"}) {
      k.insert(std::string(layer) + ".p");
      k.insert(std::string(layer) + ".q");
      k.insert(std::string(layer) + ".ranks");
    }
    for (const char* layer : {"lstm1", "lstm2", "lstm3"})
      k.insert(std::string(layer) + ".table1_p");
    return k;
  }();
  return keys;
}

}  // namespace

ParsedConfig parse_config_text(const std::string& text) {
  ParsedConfig parsed;
  std::istringstream stream(text);
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": empty key or value");
    }

    if (key == "learning_rate") {
      parsed.train.learning_rate = parse_double(key, value);
    } else if (key == "momentum") {
      parsed.train.momentum = parse_double(key, value);
    } else if (key == "clip_norm") {
      parsed.train.clip_norm = parse_double(key, value);
    } else if (key == "epochs") {
      parsed.train.epochs = static_cast<int>(parse_int(key, value));
    } else if (key == "batch_size") {
      parsed.train.batch_size = static_cast<int>(parse_int(key, value));
    } else if (key == "dropout") {
      parsed.train.dropout_p = parse_double(key, value);
    } else if (key == "seed") {
      parsed.train.seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "truncation_window") {
      parsed.train.truncation_window = static_cast<int>(parse_int(key, value));
    } else if (factor_keys().count(key)) {
      parsed.factor_overrides[key] = parse_int_list(key, value);
    } else {
      throw ConfigError("config: unknown key: " + key);
    }
  }
  try {
    parsed.train.validate();
  } catch (const ShapeError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return parsed;
}

ParsedConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw IoError("config: cannot open " + path.string());
  std::stringstream buffer;
  buffer << file.rdbuf();
  return parse_config_text(buffer.str());
}

namespace {

std::int64_t product(const std::vector<int>& v) {
  std::int64_t r = 1;
  for (int x : v) r *= x;
  return r;
}

void apply_ttl_override(TTPlan& plan, const std::string& layer,
                        const std::string& field, const std::vector<int>& v,
                        std::int64_t want_p, std::int64_t want_q) {
  if (field == "p") {
    if (product(v) != want_p)
      throw ConfigError("config: " + layer + ".p must multiply to " +
                        std::to_string(want_p));
    plan.p = v;
  } else if (field == "q") {
    if (product(v) != want_q)
      throw ConfigError("config: " + layer + ".q must multiply to " +
                        std::to_string(want_q));
    plan.q = v;
  } else {
    plan.ranks = v;
  }
}

}  // namespace

void apply_factor_overrides(
    ModelConfig& config,
    const std::map<std::string, std::vector<int>>& overrides) {
  for (const auto& [key, value] : overrides) {
    const auto dot = key.find('.');
    const std::string layer = key.substr(0, dot);
    const std::string field = key.substr(dot + 1);

    if (layer.rfind("lstm", 0) == 0) {
      const std::size_t idx = static_cast<std::size_t>(layer[4] - '1');
      if (idx >= config.lstm.size())
        throw ConfigError("config: no such layer: " + layer);
      TTLSTMPlan& plan = config.lstm[idx];
      if (field == "p") {
        if (product(value) != plan.hidden + plan.input)
          throw ConfigError("config: " + layer + ".p must multiply to " +
                            std::to_string(plan.hidden + plan.input));
        plan.concat_factors = value;
      } else if (field == "q") {
        if (product(value) != plan.hidden)
          throw ConfigError("config: " + layer + ".q must multiply to " +
                            std::to_string(plan.hidden));
        plan.hidden_factors = value;
      } else if (field == "ranks") {
        plan.ranks = value;
      } else {  // table1_p
        if (product(value) != plan.input)
          throw ConfigError("config: " + layer + ".table1_p must multiply to " +
                            std::to_string(plan.input));
        plan.table1_input_factors = value;
      }
    } else if (layer == "dense") {
      apply_ttl_override(config.dense, layer, field, value,
                         config.lstm.back().hidden, config.dense_width);
    } else {  // output
      apply_ttl_override(config.output, layer, field, value,
                         config.dense_width, config.mask_dim);
    }
  }
}

}  // namespace ttnet
