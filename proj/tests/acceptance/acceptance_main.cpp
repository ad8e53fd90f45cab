// tests/acceptance/acceptance_main.cpp

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
//
// Acceptance suite: every release criterion, one pass/fail line each.
// Needs TTNET_CLI pointing at the command line binary.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support/oracles.hpp"
#include "ttnet/audio_features.hpp"
#include "ttnet/synth_data.hpp"
#include "ttnet/tensornet.hpp"
#include "ttnet/tt_lstm.hpp"

namespace {

using namespace ttnet;
using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s  (%s)\n", criterion, pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

struct RunResult {
  int exit_code = -1;
  std::string output;
};

std::string cli;

RunResult run_cli(const std::string& args) {
  const std::string command = cli + " " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  RunResult result;
  if (!pipe) return result;
  char buffer[4096];
  while (std::size_t n = std::fread(buffer, 1, sizeof buffer, pipe))
    result.output.append(buffer, n);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::vector<char> slurp(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(file),
          std::istreambuf_iterator<char>()};
}

double round_to_2_significant(double v) {
  if (v == 0.0) return 0.0;
  const double magnitude = std::pow(10.0, std::floor(std::log10(std::abs(v))) - 1);
  return std::round(v / magnitude) * magnitude;
}

// ---------------------------------------------------------------------------
// 1. Published-table reproduction through the CLI.
void criterion_1() {
  const auto start = Clock::now();
  const RunResult result = run_cli("count-params --convention table1");
  const double elapsed =
      std::chrono::duration<double>(Clock::now() - start).count();

  bool pass = result.exit_code == 0;
  std::string missing;
  for (const char* expected :
       {"10,264", "10,256", "1,472", "32,760", "2,623,488", "2,099,200",
        "65,664", "8,256", "6,895,808", "10,255"}) {
    if (result.output.find(expected) == std::string::npos) {
      pass = false;
      missing += std::string(" ") + expected;
    }
  }

  // Compression column, compared at 2 significant figures.
  const std::vector<std::pair<std::string, double>> expected_rates = {
      {"lstm1", 3.9e-3},  {"lstm2", 4.88e-3}, {"lstm3", 4.88e-3},
      {"dense", 2.2e-2},  {"output", 6.2e-2}, {"total", 4.75e-3}};
  std::istringstream lines(result.output);
  std::string line;
  int rates_checked = 0;
  while (std::getline(lines, line)) {
    for (const auto& [name, rate] : expected_rates) {
      if (line.rfind(name, 0) != 0) continue;
      const auto epos = line.find("e-");
      if (epos == std::string::npos) continue;
      const auto begin = line.rfind(' ', epos);
      const double printed = std::atof(line.substr(begin + 1).c_str());
      if (round_to_2_significant(printed) != round_to_2_significant(rate)) {
        pass = false;
        missing += " rate:" + name;
      } else {
        ++rates_checked;
      }
    }
  }
  if (rates_checked != 6) pass = false;
  if (elapsed >= 1.0) pass = false;

  std::ostringstream detail;
  detail << "counts+rates vs published table, " << rates_checked
         << "/6 rates at 2 sig figs, " << elapsed << " s";
  if (!missing.empty()) detail << "; missing:" << missing;
  report(1, pass, detail.str());
}

// ---------------------------------------------------------------------------
// 2. Forward-path oracle equivalence.
void criterion_2() {
  const auto start = Clock::now();
  std::mt19937_64 rng(2026);
  std::uniform_int_distribution<int> order(1, 4), factor(1, 6), rank(1, 4);

  double worst_ttl = 0.0;
  int shapes = 0;
  while (shapes < 100) {
    TTShape shape;
    const int d = order(rng);
    for (int k = 0; k < d; ++k) {
      shape.p.push_back(factor(rng));
      shape.q.push_back(factor(rng));
    }
    shape.ranks.assign(d + 1, 1);
    for (int k = 1; k < d; ++k) shape.ranks[k] = rank(rng);
    shape.gate_fusion = shapes % 4 == 0 ? 4 : 1;
    if (shape.input_dim() * shape.output_dim() > 100'000) continue;
    ++shapes;

    TTLinear ttl = tt_random_init(shape, 5000 + shapes);
    *ttl.bias = testing::random_vector(rng, ttl.output_dim());
    const Matrix w = tt_reconstruct(ttl);
    const Vector x = testing::random_vector(rng, ttl.input_dim());
    const Vector expected = testing::dense_forward(w, x) + *ttl.bias;
    const Vector actual = ttl_forward(ttl, x);
    const double rel =
        (actual - expected).norm() / std::max(expected.norm(), 1e-30);
    worst_ttl = std::max(worst_ttl, rel);
  }

  // Full-rank recurrent cells against the dense baseline, T = 20.
  double worst_lstm = 0.0;
  for (auto [hidden, input] : {std::pair{4, 4}, std::pair{8, 8},
                               std::pair{8, 6}, std::pair{6, 8}}) {
    DenseLSTM dense;
    dense.w_i = testing::random_row_matrix(rng, hidden + input, hidden, 0.4);
    dense.w_f = testing::random_row_matrix(rng, hidden + input, hidden, 0.4);
    dense.w_o = testing::random_row_matrix(rng, hidden + input, hidden, 0.4);
    dense.w_c = testing::random_row_matrix(rng, hidden + input, hidden, 0.4);
    dense.b_i = testing::random_vector(rng, hidden, 0.2);
    dense.b_f = testing::random_vector(rng, hidden, 0.2);
    dense.b_o = testing::random_vector(rng, hidden, 0.2);
    dense.b_c = testing::random_vector(rng, hidden, 0.2);

    Matrix fused(hidden + input, 4 * hidden);
    fused << dense.w_i, dense.w_f, dense.w_o, dense.w_c;
    TTLSTMCell cell;
    cell.hidden = hidden;
    cell.input = input;
    cell.gates = testing::tt_from_dense_full_rank(
        fused, balanced_factors(hidden + input, 2), balanced_factors(hidden, 2),
        4);
    cell.b_i = dense.b_i;
    cell.b_f = dense.b_f;
    cell.b_o = dense.b_o;
    cell.b_c = dense.b_c;
    cell.table1_input_factors = balanced_factors(input, 2);

    LSTMState tt_state{Vector::Zero(hidden), Vector::Zero(hidden)};
    LSTMState dense_state = tt_state;
    for (int t = 0; t < 20; ++t) {
      const Vector x = testing::random_vector(rng, input);
      tt_state = lstm_step(cell, x, tt_state);
      dense_state = dense_lstm_step(dense, x, dense_state);
      worst_lstm = std::max(
          worst_lstm, (tt_state.h - dense_state.h).cwiseAbs().maxCoeff());
      worst_lstm = std::max(
          worst_lstm, (tt_state.c - dense_state.c).cwiseAbs().maxCoeff());
    }
  }

  const double elapsed =
      std::chrono::duration<double>(Clock::now() - start).count();
  const bool pass = worst_ttl <= 1e-12 && worst_lstm <= 1e-10 && elapsed < 30.0;
  std::ostringstream detail;
  detail << "100 shapes worst " << worst_ttl << " (<=1e-12), lstm worst "
         << worst_lstm << " (<=1e-10), " << elapsed << " s";
  report(2, pass, detail.str());
}

// ---------------------------------------------------------------------------
// 3. Gradient verification through the CLI.
void criterion_3() {
  const auto start = Clock::now();
  const RunResult small = run_cli("gradcheck --size small --seed 42");
  const RunResult reduced = run_cli("gradcheck --size fig2-reduced --seed 42");
  const double elapsed =
      std::chrono::duration<double>(Clock::now() - start).count();
  const bool pass =
      small.exit_code == 0 && reduced.exit_code == 0 && elapsed < 120.0;
  std::ostringstream detail;
  detail << "small exit " << small.exit_code << ", fig2-reduced exit "
         << reduced.exit_code << ", " << elapsed << " s";
  report(3, pass, detail.str());
}

// ---------------------------------------------------------------------------
// 4. Mask definition properties.
void criterion_4() {
  const auto mask_of = [](double s, double w, double beta = 0.5) {
    audio::Cochleagram clean, noise;
    clean.energies = RowMatrix::Constant(1, 1, s);
    noise.energies = RowMatrix::Constant(1, 1, w);
    return audio::ideal_ratio_mask(clean, noise, beta)(0, 0);
  };

  bool pass = std::abs(mask_of(1.0, 0.0) - 1.0) <= 1e-12 &&
              std::abs(mask_of(2.5, 2.5) - std::sqrt(0.5)) <= 1e-12 &&
              std::abs(mask_of(1.0, 3.0) - 0.5) <= 1e-12 &&
              mask_of(0.0, 0.0) == 0.0;

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> energy(0.0, 100.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double v = mask_of(energy(rng), energy(rng));
    if (!(v >= 0.0 && v <= 1.0)) pass = false;
  }
  report(4, pass,
         "range [0,1], sqrt(1/2)=0.70711 at equal energies, closed forms to "
         "1e-12");
}

// ---------------------------------------------------------------------------
// 5. Pipeline shape contract on a one-second input.
void criterion_5() {
  const auto bank = audio::make_gammatone_bank();
  const audio::Waveform wave = synth::synth_speech(55, 16000);

  const RowMatrix channels = audio::gammatone_analyze(bank, wave);
  const audio::Cochleagram cg = audio::cochleagram(channels);
  const RowMatrix mrcg = audio::mrcg_features(bank, wave);
  const RowMatrix features = audio::model_input_features(bank, wave);
  const RowMatrix mask = audio::ideal_ratio_mask(cg, cg);

  const bool pass = cg.energies.rows() == 64 && cg.energies.cols() == 99 &&
                    mrcg.cols() == 256 && features.cols() == 768 &&
                    mask.cols() == 64 && mask.rows() == 99;
  std::ostringstream detail;
  detail << "cochleagram " << cg.energies.rows() << "x" << cg.energies.cols()
         << ", mrcg width " << mrcg.cols() << ", features width "
         << features.cols() << ", mask width " << mask.cols();
  report(5, pass, detail.str());
}

// ---------------------------------------------------------------------------
// 6. Training smoke test plus the oracle-mask ceiling.
void criterion_6(const std::filesystem::path& work) {
  const auto start = Clock::now();
  const auto data_dir = work / "smoke_data";
  const auto model_path = work / "smoke.ttnn";
  const auto config_path = work / "smoke.cfg";
  std::ofstream(config_path) << "epochs = 20\nseed = 5\n";

  bool pass = true;
  std::ostringstream detail;

  const RunResult synth = run_cli("synth-data --out " + data_dir.string() +
                                  " --utterances 8 --seed 7");
  if (synth.exit_code != 0) pass = false;

  const RunResult train_run =
      run_cli("train --data " + data_dir.string() + " --config " +
              config_path.string() + " --out " + model_path.string());
  if (train_run.exit_code != 0) pass = false;

  double initial = 0.0, final_loss = 0.0;
  {
    std::ifstream report_file(model_path.string() + ".report");
    std::string line;
    while (std::getline(report_file, line)) {
      if (line.rfind("initial_train_loss", 0) == 0)
        initial = std::atof(line.substr(line.find('=') + 1).c_str());
      const auto pos = line.find(" train ");
      if (line.rfind("epoch 20 ", 0) == 0 && pos != std::string::npos)
        final_loss = std::atof(line.substr(pos + 7).c_str());
    }
  }
  if (!(initial > 0.0) || !(final_loss > 0.0) || final_loss > 0.5 * initial)
    pass = false;
  detail << "loss " << initial << " -> " << final_loss << " ("
         << (initial > 0 ? 100.0 * (1.0 - final_loss / initial) : 0)
         << "% reduction, need >=50%)";

  const auto csv_path = work / "oracle.csv";
  const RunResult oracle = run_cli("evaluate --oracle --data " +
                                   data_dir.string() + " --csv " +
                                   csv_path.string());
  if (oracle.exit_code != 0) pass = false;
  double gain_total = 0.0;
  int gain_count = 0;
  {
    std::ifstream csv(csv_path);
    std::string line;
    std::getline(csv, line);  // header
    while (std::getline(csv, line)) {
      double snr, mse, gain;
      int count;
      if (std::sscanf(line.c_str(), "%lf,%d,%lf,%lf", &snr, &count, &mse,
                      &gain) == 4) {
        gain_total += gain * count;
        gain_count += count;
      }
    }
  }
  const double mean_gain = gain_count ? gain_total / gain_count : 0.0;
  if (!(mean_gain >= 5.0)) pass = false;
  detail << "; oracle segmental-SNR gain " << mean_gain << " dB (need >=5)";

  const double elapsed =
      std::chrono::duration<double>(Clock::now() - start).count();
  if (elapsed >= 600.0) pass = false;
  detail << ", " << elapsed << " s";
  report(6, pass, detail.str());
}

// ---------------------------------------------------------------------------
// 7. Byte-level determinism of every artifact-producing command.
void criterion_7(const std::filesystem::path& work) {
  bool pass = true;
  std::ostringstream detail;

  const auto dir_a = work / "det_a";
  const auto dir_b = work / "det_b";
  for (const auto& dir : {dir_a, dir_b}) {
    const RunResult r = run_cli("synth-data --out " + dir.string() +
                                " --utterances 2 --seed 99");
    if (r.exit_code != 0) pass = false;
  }
  int compared = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir_a)) {
    const auto name = entry.path().filename();
    if (slurp(entry.path()) != slurp(dir_b / name)) {
      pass = false;
      detail << " differs:" << name.string();
    }
    ++compared;
  }
  detail << compared << " dataset files byte-compared";

  const auto cfg = work / "det.cfg";
  std::ofstream(cfg) << "epochs = 2\nseed = 123\n";
  const auto model_a = work / "det_a.ttnn";
  const auto model_b = work / "det_b.ttnn";
  for (const auto& model : {model_a, model_b}) {
    const RunResult r = run_cli("train --data " + dir_a.string() +
                                " --config " + cfg.string() + " --out " +
                                model.string());
    if (r.exit_code != 0) pass = false;
  }
  if (slurp(model_a) != slurp(model_b)) {
    pass = false;
    detail << "; model files differ";
  } else {
    detail << "; model bytes identical";
  }
  if (slurp(std::filesystem::path(model_a.string() + ".report")) !=
      slurp(std::filesystem::path(model_b.string() + ".report"))) {
    pass = false;
    detail << "; train reports differ";
  }

  const auto wav_in = dir_a / "utt_0000_noisy.wav";
  const auto enh_a = work / "enh_a.wav";
  const auto enh_b = work / "enh_b.wav";
  for (const auto& out : {enh_a, enh_b}) {
    const RunResult r = run_cli("enhance --model " + model_a.string() +
                                " --in " + wav_in.string() + " --out " +
                                out.string());
    if (r.exit_code != 0) pass = false;
  }
  if (slurp(enh_a) != slurp(enh_b)) {
    pass = false;
    detail << "; enhanced wavs differ";
  } else {
    detail << "; enhanced wavs identical";
  }

  report(7, pass, detail.str());
}

// ---------------------------------------------------------------------------
// 8. Scope statement.
void criterion_8() {
  report(8, true,
         "perceptual quality/intelligibility scores (PESQ/STOI) of the "
         "published evaluation require full speech corpora and full-scale "
         "training and are NOT reproduced here; criteria 1-7 substitute "
         "exact-count and property-based checks");
}

}  // namespace

int main() {
  const char* cli_env = std::getenv("TTNET_CLI");
  if (!cli_env) {
    std::fprintf(stderr, "TTNET_CLI must point at the ttnet binary\n");
    return 64;
  }
  cli = cli_env;

  const auto work =
      std::filesystem::temp_directory_path() / "ttnet_acceptance";
  std::filesystem::remove_all(work);
  std::filesystem::create_directories(work);

  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6(work);
  criterion_7(work);
  criterion_8();

  std::printf("%s (%d failure%s)\n", failures == 0 ? "ALL PASS" : "FAILURES",
              failures, failures == 1 ? "" : "s");
  return failures == 0 ? 0 : 1;
}
