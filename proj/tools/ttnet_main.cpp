// tools/ttnet_main.cpp

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

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gradcheck.hpp"
#include "ttnet/audio_features.hpp"
#include "ttnet/feature_io.hpp"
#include "ttnet/model_io.hpp"
#include "ttnet/synth_data.hpp"
#include "ttnet/tensornet.hpp"
#include "ttnet/train_config.hpp"
#include "ttnet/wav_io.hpp"

namespace {

using namespace ttnet;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumeric = 2;

std::string with_separators(std::int64_t value) {
  const std::string raw = std::to_string(value);
  std::string out;
  int digits = 0;
  for (auto it = raw.rbegin(); it != raw.rend(); ++it) {
    if (digits > 0 && digits % 3 == 0 && *it != '-') out.push_back(',');
    out.push_back(*it);
    ++digits;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

ModelConfig model_config_from(const ParsedConfig& parsed) {
  ModelConfig config = reference_model_config();
  apply_factor_overrides(config, parsed.factor_overrides);
  config.dropout_p = parsed.train.dropout_p;
  return config;
}

int cmd_count_params(const std::string& convention,
                     const std::string& config_path) {
  ParsedConfig parsed;
  if (!config_path.empty()) parsed = parse_config_file(config_path);
  const TensorNetModel model = make_tensornet(model_config_from(parsed), 0);

  const CountConvention mode = convention == "table1"
                                   ? CountConvention::kTable1
                                   : CountConvention::kModel;
  const std::vector<LayerParamCount> rows = count_model_params(model, mode);

  std::printf("parameter accounting (%s convention)\n\n", convention.c_str());
  std::printf("%-8s %14s %14s %14s\n", "layer", "tensor-train", "dense",
              "compression");
  for (const LayerParamCount& row : rows) {
    std::printf("%-8s %14s %14s %14.2e\n", row.name.c_str(),
                with_separators(row.tt).c_str(),
                with_separators(row.dense).c_str(), row.rate());
  }
  if (mode == CountConvention::kTable1) {
    std::printf(
        "\nnote: lstm2/lstm3 hold 10,256 parameters each; a commonly quoted\n"
        "per-layer figure of 10,255 is inconsistent with the 32,760 total,\n"
        "which requires 10,256.\n");
  } else {
    std::printf(
        "\nnote: the model convention counts the trains as stored, i.e.\n"
        "factorized over the concatenated [hidden, input] vector; totals\n"
        "therefore differ from the table1 (input-only) convention.\n");
  }
  return kExitOk;
}

int cmd_gradcheck(const std::string& size, std::uint64_t seed,
                  bool inject_fault) {
  std::vector<tools::GradCheckResult> results;
  if (size == "small") {
    results = tools::gradcheck_small(seed, inject_fault);
  } else {
    results = tools::gradcheck_reduced(seed, inject_fault);
  }

  std::printf("gradient check: %s (seed %llu)\n\n", size.c_str(),
              static_cast<unsigned long long>(seed));
  std::printf("%-36s %18s\n", "check", "max relative error");
  double overall = 0.0;
  for (const tools::GradCheckResult& r : results) {
    std::printf("%-36s %18.3e\n", r.name.c_str(), r.max_relative_error);
    overall = std::max(overall, r.max_relative_error);
  }
  const bool pass = overall <= tools::kGradCheckTolerance;
  std::printf("\noverall max %.3e (tolerance %.1e): %s\n", overall,
              tools::kGradCheckTolerance, pass ? "PASS" : "FAIL");
  return pass ? kExitOk : kExitNumeric;
}

int cmd_synth_data(const std::string& out_dir, int utterances,
                   const std::string& snr_list, std::uint64_t seed) {
  synth::DatasetConfig config;
  config.utterances = utterances;
  config.seed = seed;
  if (!snr_list.empty()) {
    config.snr_db.clear();
    std::stringstream stream(snr_list);
    std::string item;
    while (std::getline(stream, item, ',')) {
      try {
        config.snr_db.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw ConfigError("synth-data: bad SNR entry: " + item);
      }
    }
  }
  const synth::Manifest manifest = synth::generate_dataset(config, out_dir);
  std::printf("wrote %zu utterances to %s\n", manifest.items.size(),
              out_dir.c_str());
  return kExitOk;
}

void write_train_report(const std::filesystem::path& path,
                        const TrainConfig& config, const TrainReport& report) {
  std::ofstream file(path, std::ios::trunc);
  if (!file) throw IoError("train: cannot write report to " + path.string());
  file << "# training report (losses are inference-mode evaluations)\n";
  file << "learning_rate = " << config.learning_rate << "\n";
  file << "momentum = " << config.momentum << "\n";
  file << "clip_norm = " << config.clip_norm << "\n";
  file << "epochs = " << config.epochs << "\n";
  file << "batch_size = " << config.batch_size << "\n";
  file << "dropout = " << config.dropout_p << "\n";
  file << "seed = " << config.seed << "\n";
  file << "truncation_window = " << config.truncation_window << "\n";
  file << "diverged = " << (report.diverged ? 1 : 0) << "\n";
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", report.initial_train_loss);
  file << "initial_train_loss = " << buffer << "\n";
  for (std::size_t e = 0; e < report.train_loss.size(); ++e) {
    std::snprintf(buffer, sizeof buffer, "%.17g", report.train_loss[e]);
    file << "epoch " << (e + 1) << " train " << buffer;
    std::snprintf(buffer, sizeof buffer, "%.17g", report.val_loss[e]);
    file << " val " << buffer << "\n";
  }
}

int cmd_train(const std::string& data_dir, const std::string& config_path,
              const std::string& out_path) {
  if (!std::filesystem::is_directory(data_dir))
    throw IoError("train: data directory not found: " + data_dir);

  ParsedConfig parsed;
  if (!config_path.empty()) parsed = parse_config_file(config_path);

  const synth::Manifest manifest = synth::load_manifest(data_dir);
  if (manifest.items.empty()) throw IoError("train: dataset is empty");
  const MaskDataset dataset = synth::load_training_data(manifest, data_dir);

  TensorNetModel model =
      make_tensornet(model_config_from(parsed), parsed.train.seed);
  const TrainReport report = train(model, dataset, {}, parsed.train);

  save_model(model, out_path);
  write_train_report(std::filesystem::path(out_path).string() + ".report",
                     parsed.train, report);

  if (report.diverged) {
    std::fprintf(stderr, "train: diverged; saved last good state\n");
    return kExitNumeric;
  }
  std::printf("initial loss %.6g", report.initial_train_loss);
  if (!report.train_loss.empty())
    std::printf(", final loss %.6g", report.train_loss.back());
  std::printf("; model written to %s\n", out_path.c_str());
  return kExitOk;
}

int cmd_enhance(const std::string& model_path, const std::string& in_path,
                const std::string& out_path) {
  const TensorNetModel model = load_model(model_path);
  const audio::Waveform noisy = audio::read_wav(in_path);
  const auto bank = audio::make_gammatone_bank();

  const RowMatrix features = audio::model_input_features(bank, noisy);
  const RowMatrix mask = model_forward(model, features, false);
  const audio::Waveform enhanced =
      audio::apply_mask_resynthesize(bank, noisy, mask);
  audio::write_wav(out_path, enhanced);
  std::printf("enhanced %s -> %s (%lld samples)\n", in_path.c_str(),
              out_path.c_str(),
              static_cast<long long>(enhanced.samples.size()));
  return kExitOk;
}

struct MetricBucket {
  int count = 0;
  double mask_mse = 0.0;
  double segsnr_gain = 0.0;
};

int cmd_evaluate(const std::string& model_path, const std::string& data_dir,
                 bool oracle, std::string csv_path) {
  if (!std::filesystem::is_directory(data_dir))
    throw IoError("evaluate: data directory not found: " + data_dir);
  const synth::Manifest manifest = synth::load_manifest(data_dir);
  if (manifest.items.empty()) throw IoError("evaluate: dataset is empty");

  TensorNetModel model;
  if (!oracle) {
    if (model_path.empty())
      throw ConfigError("evaluate: --model is required unless --oracle is set");
    model = load_model(model_path);
  }
  const auto bank = audio::make_gammatone_bank();

  std::map<double, MetricBucket> buckets;
  for (const synth::UtteranceRecord& record : manifest.items) {
    const auto dir = std::filesystem::path(data_dir);
    const audio::Waveform clean = audio::read_wav(dir / record.clean_wav);
    const audio::Waveform noisy = audio::read_wav(dir / record.noisy_wav);
    const RowMatrix features = audio::read_ttfm(dir / record.features);
    const RowMatrix target = audio::read_ttfm(dir / record.mask);

    const RowMatrix mask =
        oracle ? target : model_forward(model, features, false);
    const audio::Waveform enhanced =
        audio::apply_mask_resynthesize(bank, noisy, mask);

    MetricBucket& bucket = buckets[record.snr_db];
    bucket.count += 1;
    bucket.mask_mse += mask_mse_loss(mask, target);
    bucket.segsnr_gain +=
        audio::segmental_snr(clean.samples, enhanced.samples) -
        audio::segmental_snr(clean.samples, noisy.samples);
  }

  std::printf("evaluation (%s)\n\n", oracle ? "oracle mask" : "model mask");
  std::printf("%8s %6s %12s %12s\n", "snr", "count", "mask_mse",
              "segsnr_gain");
  std::ostringstream csv;
  csv << "snr,count,mask_mse,segsnr_gain\n";
  for (const auto& [snr, bucket] : buckets) {
    const double mse = bucket.mask_mse / bucket.count;
    const double gain = bucket.segsnr_gain / bucket.count;
    std::printf("%8.1f %6d %12.6f %12.3f\n", snr, bucket.count, mse, gain);
    char line[128];
    std::snprintf(line, sizeof line, "%.1f,%d,%.6f,%.3f\n", snr, bucket.count,
                  mse, gain);
    csv << line;
  }

  if (csv_path.empty())
    csv_path = (std::filesystem::path(data_dir) / "metrics.csv").string();
  std::ofstream file(csv_path, std::ios::trunc);
  if (!file) throw IoError("evaluate: cannot write " + csv_path);
  file << csv.str();
  std::printf("\nmetrics written to %s\n", csv_path.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tensor-train speech enhancement toolkit"};
  app.require_subcommand(1);

  // count-params
  auto* count = app.add_subcommand(
      "count-params", "per-layer parameter counts and compression rates");
  std::string convention = "table1";
  std::string count_config;
  count->add_option("--convention", convention, "model|table1")
      ->check(CLI::IsMember({"model", "table1"}));
  count->add_option("--config", count_config, "config file with overrides");

  // gradcheck
  auto* grad = app.add_subcommand("gradcheck",
                                  "finite-difference gradient verification");
  std::string size = "small";
  std::uint64_t grad_seed = 42;
  bool inject_fault = false;
  grad->add_option("--size", size, "small|fig2-reduced")
      ->check(CLI::IsMember({"small", "fig2-reduced"}));
  grad->add_option("--seed", grad_seed, "rng seed");
  grad->add_flag("--inject-fault", inject_fault,
                 "perturb one analytic gradient (self-test of the checker)");

  // synth-data
  auto* synth_cmd =
      app.add_subcommand("synth-data", "generate a synthetic dataset");
  std::string out_dir;
  int utterances = 8;
  std::string snr_list;
  std::uint64_t synth_seed = 0;
  synth_cmd->add_option("--out", out_dir, "output directory")->required();
  synth_cmd->add_option("--utterances", utterances, "number of utterances");
  synth_cmd->add_option("--snr", snr_list,
                        "comma-separated SNR levels in dB (default -6..9)");
  synth_cmd->add_option("--seed", synth_seed, "rng seed");

  // train
  auto* train_cmd = app.add_subcommand("train", "train a mask estimator");
  std::string data_dir, train_config, model_out;
  train_cmd->add_option("--data", data_dir, "dataset directory")->required();
  train_cmd->add_option("--config", train_config, "training config file");
  train_cmd->add_option("--out", model_out, "output model path")->required();

  // enhance
  auto* enhance_cmd = app.add_subcommand("enhance", "enhance a noisy wav");
  std::string enhance_model, wav_in, wav_out;
  enhance_cmd->add_option("--model", enhance_model, "model file")->required();
  enhance_cmd->add_option("--in", wav_in, "noisy input wav")->required();
  enhance_cmd->add_option("--out", wav_out, "enhanced output wav")->required();

  // evaluate
  auto* eval_cmd =
      app.add_subcommand("evaluate", "mask MSE and segmental-SNR metrics");
  std::string eval_model, eval_data, csv_path;
  bool oracle = false;
  eval_cmd->add_option("--model", eval_model, "model file");
  eval_cmd->add_option("--data", eval_data, "dataset directory")->required();
  eval_cmd->add_flag("--oracle", oracle,
                     "score the stored ideal-ratio-mask targets instead of a model");
  eval_cmd->add_option("--csv", csv_path,
                       "metrics CSV path (default <data>/metrics.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (count->parsed()) return cmd_count_params(convention, count_config);
    if (grad->parsed()) return cmd_gradcheck(size, grad_seed, inject_fault);
    if (synth_cmd->parsed())
      return cmd_synth_data(out_dir, utterances, snr_list, synth_seed);
    if (train_cmd->parsed())
      return cmd_train(data_dir, train_config, model_out);
    if (enhance_cmd->parsed())
      return cmd_enhance(enhance_model, wav_in, wav_out);
    if (eval_cmd->parsed())
      return cmd_evaluate(eval_model, eval_data, oracle, csv_path);
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return kExitNumeric;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
  return kExitValidation;
}
