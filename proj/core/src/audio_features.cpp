// core/src/audio_features.cpp

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

#include "ttnet/audio_features.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <Eigen/Cholesky>
#include <numbers>
#include <random>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace ttnet::audio {

namespace {

constexpr double kLogFloor = 1e-12;

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void check_rate(const Waveform& wave, const char* where) {
  if (wave.sample_rate != kSampleRate)
    throw ShapeError(std::string(where) + ": sample rate must be 16000 Hz");
}

}  // namespace

double erb_rate(double hz) { return 21.4 * std::log10(1.0 + 0.00437 * hz); }

double erb_rate_inverse(double erb) {
  return (std::pow(10.0, erb / 21.4) - 1.0) / 0.00437;
}

double erb_bandwidth(double hz) { return 24.7 * (0.00437 * hz + 1.0); }

Vector erb_center_frequencies(int n, double lo, double hi) {
  if (n < 2 || lo <= 0.0 || lo >= hi)
    throw ShapeError("erb_center_frequencies: need n >= 2 and 0 < lo < hi");
  const double e_lo = erb_rate(lo);
  const double e_hi = erb_rate(hi);
  Vector cf(n);
  for (int k = 0; k < n; ++k)
    cf[k] = erb_rate_inverse(e_lo + (e_hi - e_lo) * k / (n - 1));
  cf[0] = lo;  // pin the endpoints exactly
  cf[n - 1] = hi;
  return cf;
}

GammatoneBank make_gammatone_bank(int n, double lo, double hi) {
  GammatoneBank bank;
  bank.center_hz = erb_center_frequencies(n, lo, hi);
  bank.impulse_responses.resize(n, kGammatoneFirLength);
  bank.peak_lags.resize(n);

  for (int k = 0; k < n; ++k) {
    const double cf = bank.center_hz[k];
    const double decay = 2.0 * std::numbers::pi * 1.019 * erb_bandwidth(cf);
    const double omega = 2.0 * std::numbers::pi * cf;
    const double envelope_peak = 3.0 / decay;  // argmax of t^3 exp(-decay t)
    for (int s = 0; s < kGammatoneFirLength; ++s) {
      const double t = static_cast<double>(s) / kSampleRate;
      bank.impulse_responses(k, s) =
          t * t * t * std::exp(-decay * t) * std::cos(omega * (t - envelope_peak));
    }
    // Unit peak magnitude response. Normalizing at the analytic center
    // frequency instead would let the aliased mirror lobe push the two
    // uppermost channels above unity near the Nyquist edge.
    {
      constexpr int kProbe = 16384;
      Eigen::FFT<double> fft;
      std::vector<double> padded(kProbe, 0.0);
      for (int s = 0; s < kGammatoneFirLength; ++s)
        padded[s] = bank.impulse_responses(k, s);
      std::vector<std::complex<double>> spectrum;
      fft.fwd(spectrum, padded);
      double peak_gain = 0.0;
      for (int bin = 0; bin <= kProbe / 2; ++bin)
        peak_gain = std::max(peak_gain, std::abs(spectrum[bin]));
      bank.impulse_responses.row(k) /= peak_gain;
    }

    int lag = 0;
    double peak = 0.0;
    for (int s = 0; s < kGammatoneFirLength; ++s) {
      const double mag = std::abs(bank.impulse_responses(k, s));
      if (mag > peak) {
        peak = mag;
        lag = s;
      }
    }
    bank.peak_lags[k] = lag;
  }

  // Per-channel resynthesis gains: least-squares fit of the lag-aligned
  // channel responses against a flat unity target over 100..7000 Hz.
  {
    constexpr int kProbe = 8192;
    const int lo_bin = 100 * kProbe / kSampleRate;
    const int hi_bin = 7000 * kProbe / kSampleRate;
    const int bins = hi_bin - lo_bin + 1;

    Eigen::FFT<double> fft;
    Matrix design(2 * bins, n);  // stacked real and imaginary parts
    std::vector<double> padded(kProbe);
    std::vector<std::complex<double>> spectrum;
    for (int k = 0; k < n; ++k) {
      std::fill(padded.begin(), padded.end(), 0.0);
      for (int s = 0; s < kGammatoneFirLength; ++s)
        padded[s] = bank.impulse_responses(k, s);
      fft.fwd(spectrum, padded);
      const double lag = bank.peak_lags[k];
      for (int b = 0; b < bins; ++b) {
        const double w = 2.0 * std::numbers::pi * (lo_bin + b) / kProbe;
        // Advancing by the peak lag multiplies the response by e^{+i w lag}.
        const std::complex<double> aligned =
            spectrum[lo_bin + b] *
            std::complex<double>(std::cos(w * lag), std::sin(w * lag));
        design(b, k) = aligned.real();
        design(bins + b, k) = aligned.imag();
      }
    }
    Vector target = Vector::Zero(2 * bins);
    target.head(bins).setOnes();
    // Ridge-stabilized normal equations; the overlap matrix is near-singular
    // only when channels coincide, which valid banks exclude.
    Matrix gram = design.transpose() * design;
    gram.diagonal().array() += 1e-8;
    bank.resynthesis_weights =
        gram.ldlt().solve(design.transpose() * target);
  }
  return bank;
}

RowMatrix gammatone_analyze(const GammatoneBank& bank, const Waveform& wave) {
  check_rate(wave, "gammatone_analyze");
  const Eigen::Index n = wave.samples.size();
  const int channels = static_cast<int>(bank.center_hz.size());
  RowMatrix out(channels, n);
  if (n == 0) return out;

  const std::size_t fft_size =
      next_pow2(static_cast<std::size_t>(n) + kGammatoneFirLength - 1);
  Eigen::FFT<double> fft;

  std::vector<double> padded(fft_size, 0.0);
  for (Eigen::Index s = 0; s < n; ++s) padded[s] = wave.samples[s];
  std::vector<std::complex<double>> signal_spec;
  fft.fwd(signal_spec, padded);

  std::vector<double> ir(fft_size), conv;
  std::vector<std::complex<double>> ir_spec, prod(fft_size);
  for (int k = 0; k < channels; ++k) {
    std::fill(ir.begin(), ir.end(), 0.0);
    for (int s = 0; s < kGammatoneFirLength; ++s)
      ir[s] = bank.impulse_responses(k, s);
    fft.fwd(ir_spec, ir);
    for (std::size_t i = 0; i < fft_size; ++i)
      prod[i] = signal_spec[i] * ir_spec[i];
    fft.inv(conv, prod);
    for (Eigen::Index s = 0; s < n; ++s) out(k, s) = conv[s];
  }
  return out;
}

int frame_count(std::int64_t samples, int win, int hop) {
  if (samples < win) return 0;
  return static_cast<int>((samples - win) / hop + 1);
}

Cochleagram cochleagram(const RowMatrix& channel_signals, int win, int hop) {
  if (win < 1 || hop < 1) throw ShapeError("cochleagram: bad framing");
  const Eigen::Index n = channel_signals.cols();
  const int frames = frame_count(n, win, hop);
  if (frames < 1)
    throw ShapeError("cochleagram: signal shorter than one window");

  Cochleagram cg;
  cg.win = win;
  cg.hop = hop;
  cg.energies.resize(channel_signals.rows(), frames);
  for (Eigen::Index k = 0; k < channel_signals.rows(); ++k)
    for (int t = 0; t < frames; ++t)
      cg.energies(k, t) =
          channel_signals.row(k).segment(static_cast<Eigen::Index>(t) * hop, win)
              .squaredNorm();
  return cg;
}

namespace {

RowMatrix log_compress(const RowMatrix& energies) {
  return (energies.array() + kLogFloor).log().matrix();
}

// Mean filter over a (channel, frame) grid with truncated windows at the
// edges; half is the one-sided extent, so the window is (2*half+1)^2.
RowMatrix mean_smooth(const RowMatrix& grid, int half) {
  const Eigen::Index rows = grid.rows(), cols = grid.cols();
  RowMatrix out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::Index r0 = std::max<Eigen::Index>(0, r - half);
    const Eigen::Index r1 = std::min(rows - 1, r + half);
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Eigen::Index c0 = std::max<Eigen::Index>(0, c - half);
      const Eigen::Index c1 = std::min(cols - 1, c + half);
      out(r, c) = grid.block(r0, c0, r1 - r0 + 1, c1 - c0 + 1).mean();
    }
  }
  return out;
}

// 200 ms window energies aligned on the centers of the 20 ms frames; edge
// windows are truncated to the signal.
RowMatrix long_window_log(const RowMatrix& channels, int frames) {
  constexpr int kLongWin = 3200;
  const Eigen::Index n = channels.cols();
  RowMatrix energies(channels.rows(), frames);
  for (int t = 0; t < frames; ++t) {
    const std::int64_t center = static_cast<std::int64_t>(t) * kFrameHop +
                                kFrameLength / 2;
    const Eigen::Index begin =
        std::max<std::int64_t>(0, center - kLongWin / 2);
    const Eigen::Index end = std::min<std::int64_t>(n, center + kLongWin / 2);
    for (Eigen::Index k = 0; k < channels.rows(); ++k)
      energies(k, t) = channels.row(k).segment(begin, end - begin).squaredNorm();
  }
  return log_compress(energies);
}

}  // namespace

RowMatrix mrcg_features(const GammatoneBank& bank, const Waveform& wave) {
  check_rate(wave, "mrcg_features");
  const RowMatrix channels = gammatone_analyze(bank, wave);
  const Cochleagram cg = cochleagram(channels);
  const int frames = static_cast<int>(cg.frames());
  const int width = static_cast<int>(cg.energies.rows());

  const RowMatrix cg1 = log_compress(cg.energies);
  const RowMatrix cg2 = long_window_log(channels, frames);
  const RowMatrix cg3 = mean_smooth(cg1, 5);
  const RowMatrix cg4 = mean_smooth(cg1, 11);

  RowMatrix features(frames, 4 * width);
  for (int t = 0; t < frames; ++t) {
    features.row(t).segment(0, width) = cg1.col(t).transpose();
    features.row(t).segment(width, width) = cg2.col(t).transpose();
    features.row(t).segment(2 * width, width) = cg3.col(t).transpose();
    features.row(t).segment(3 * width, width) = cg4.col(t).transpose();
  }
  return features;
}

RowMatrix add_deltas(const RowMatrix& features) {
  const Eigen::Index frames = features.rows();
  if (frames < 5) throw ShapeError("add_deltas: sequence too short (need >= 5)");
  const Eigen::Index width = features.cols();

  const auto regression = [frames](const RowMatrix& x) {
    // delta_t = sum_{n=1,2} n (x_{t+n} - x_{t-n}) / (2 sum n^2), replicated
    // edges.
    RowMatrix d(x.rows(), x.cols());
    const auto clamp_row = [&x, frames](Eigen::Index t) {
      return x.row(std::clamp<Eigen::Index>(t, 0, frames - 1));
    };
    for (Eigen::Index t = 0; t < frames; ++t)
      d.row(t) = (1.0 * (clamp_row(t + 1) - clamp_row(t - 1)) +
                  2.0 * (clamp_row(t + 2) - clamp_row(t - 2))) /
                 10.0;
    return d;
  };

  const RowMatrix delta = regression(features);
  const RowMatrix delta2 = regression(delta);

  RowMatrix out(frames, 3 * width);
  out.leftCols(width) = features;
  out.middleCols(width, width) = delta;
  out.rightCols(width) = delta2;
  return out;
}

RowMatrix standardize_features(const RowMatrix& features) {
  if (features.rows() < 1) throw ShapeError("standardize_features: empty input");
  const double frames = static_cast<double>(features.rows());
  RowMatrix out(features.rows(), features.cols());
  for (Eigen::Index c = 0; c < features.cols(); ++c) {
    const double mean = features.col(c).mean();
    const double var =
        (features.col(c).array() - mean).square().sum() / frames;
    out.col(c) = (features.col(c).array() - mean) / (std::sqrt(var) + 1e-8);
  }
  return out;
}

RowMatrix model_input_features(const GammatoneBank& bank, const Waveform& wave) {
  return standardize_features(add_deltas(mrcg_features(bank, wave)));
}

RowMatrix ideal_ratio_mask(const Cochleagram& clean, const Cochleagram& noise,
                           double beta) {
  if (clean.energies.rows() != noise.energies.rows() ||
      clean.energies.cols() != noise.energies.cols())
    throw ShapeError("ideal_ratio_mask: cochleagram shapes differ");
  const Eigen::Index channels = clean.energies.rows();
  const Eigen::Index frames = clean.energies.cols();
  RowMatrix mask(frames, channels);
  for (Eigen::Index t = 0; t < frames; ++t) {
    for (Eigen::Index k = 0; k < channels; ++k) {
      const double s = clean.energies(k, t);
      const double w = noise.energies(k, t);
      // The 0/0 unit is silence: masked out.
      mask(t, k) = (s + w) > 0.0 ? std::pow(s / (s + w), beta) : 0.0;
    }
  }
  return mask;
}

double rms(const Vector& samples) {
  if (samples.size() == 0) return 0.0;
  return std::sqrt(samples.squaredNorm() / static_cast<double>(samples.size()));
}

MixResult mix_at_snr(const Waveform& clean, const Waveform& noise,
                     double snr_db, std::uint64_t seed) {
  check_rate(clean, "mix_at_snr");
  check_rate(noise, "mix_at_snr");
  if (noise.samples.size() < clean.samples.size())
    throw ShapeError("mix_at_snr: noise must be at least as long as the clean signal");

  const double clean_rms = rms(clean.samples);
  if (clean_rms == 0.0) throw NumericError("mix_at_snr: silent clean signal");

  std::mt19937_64 rng(seed);
  const std::int64_t max_offset = noise.samples.size() - clean.samples.size();
  std::uniform_int_distribution<std::int64_t> pick(0, max_offset);
  const std::int64_t offset = pick(rng);

  Vector crop = noise.samples.segment(offset, clean.samples.size());
  const double noise_rms = rms(crop);
  if (noise_rms == 0.0) throw NumericError("mix_at_snr: silent noise crop");

  // 10 log10(rms_c^2 / (scale rms_n)^2) == snr_db.
  const double scale = clean_rms / (noise_rms * std::pow(10.0, snr_db / 20.0));
  crop *= scale;

  MixResult result;
  result.scaled_noise = {crop, kSampleRate};
  result.noisy = {clean.samples + crop, kSampleRate};
  result.noise_offset = offset;
  return result;
}

Waveform apply_mask_resynthesize(const GammatoneBank& bank,
                                 const Waveform& noisy, const RowMatrix& mask) {
  check_rate(noisy, "apply_mask_resynthesize");
  const Eigen::Index n = noisy.samples.size();
  const int frames = frame_count(n);
  if (mask.rows() != frames)
    throw ShapeError("apply_mask_resynthesize: mask frame count mismatch");
  if (mask.cols() != bank.center_hz.size())
    throw ShapeError("apply_mask_resynthesize: mask channel count mismatch");

  const RowMatrix channels = gammatone_analyze(bank, noisy);
  Vector out = Vector::Zero(n);

  for (Eigen::Index k = 0; k < channels.rows(); ++k) {
    const int lag = bank.peak_lags[k];
    const double weight = bank.resynthesis_weights[k];
    for (Eigen::Index s = 0; s < n; ++s) {
      // Piecewise-linear per-sample gain between frame centers.
      const double pos =
          (static_cast<double>(s) - kFrameLength / 2) / kFrameHop;
      double gain;
      if (pos <= 0.0) {
        gain = mask(0, k);
      } else if (pos >= frames - 1) {
        gain = mask(frames - 1, k);
      } else {
        const int t = static_cast<int>(pos);
        const double frac = pos - t;
        gain = (1.0 - frac) * mask(t, k) + frac * mask(t + 1, k);
      }
      // Advance by the peak lag so channel outputs add coherently.
      const Eigen::Index src = s + lag;
      if (src < n) out[s] += weight * gain * channels(k, src);
    }
  }
  return {out, kSampleRate};
}

double segmental_snr(const Vector& reference, const Vector& processed,
                     int frame, int hop) {
  if (reference.size() != processed.size())
    throw ShapeError("segmental_snr: length mismatch");
  const int frames = frame_count(reference.size(), frame, hop);
  if (frames < 1) throw ShapeError("segmental_snr: signal shorter than one frame");

  double total = 0.0;
  int used = 0;
  for (int t = 0; t < frames; ++t) {
    const Eigen::Index begin = static_cast<Eigen::Index>(t) * hop;
    const double ref_energy = reference.segment(begin, frame).squaredNorm();
    if (ref_energy == 0.0) continue;
    const double err_energy =
        (reference.segment(begin, frame) - processed.segment(begin, frame))
            .squaredNorm();
    double snr = err_energy == 0.0
                     ? 35.0
                     : 10.0 * std::log10(ref_energy / err_energy);
    snr = std::clamp(snr, -10.0, 35.0);
    total += snr;
    ++used;
  }
  if (used == 0) throw NumericError("segmental_snr: all frames silent");
  return total / used;
}

}  // namespace ttnet::audio
