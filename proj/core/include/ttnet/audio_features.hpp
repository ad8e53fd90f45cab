// core/include/ttnet/audio_features.hpp

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
#include <vector>

#include "ttnet/common.hpp"
#include "ttnet/wav_io.hpp"

namespace ttnet::audio {

inline constexpr int kNumChannels = 64;
inline constexpr int kFrameLength = 320;  // 20 ms at 16 kHz
inline constexpr int kFrameHop = 160;     // 50% overlap
inline constexpr int kGammatoneFirLength = 2048;  // 128 ms truncation

/// ERB-rate scale: E(f) = 21.4 * log10(1 + 0.00437 f).
double erb_rate(double hz);
double erb_rate_inverse(double erb);
/// Equivalent rectangular bandwidth at a given frequency.
double erb_bandwidth(double hz);

/// n center frequencies equally spaced on the ERB-rate scale between lo and
/// hi (both included exactly). Strictly increasing.
Vector erb_center_frequencies(int n = kNumChannels, double lo = 50.0,
                              double hi = 8000.0);

/// 4th-order gammatone filterbank realized as truncated FIRs,
///   g(t) = t^3 exp(-2 pi 1.019 ERB(cf) t) cos(2 pi cf (t - t_peak)),
/// each channel scaled to unit peak magnitude response.
/// The carrier is referenced to the envelope peak t_peak = 3/decay so that
/// peak-lag alignment leaves every channel at zero carrier phase; without
/// this the summed resynthesis is phase-incoherent. resynthesis_weights are
/// per-channel least-squares gains that flatten the aligned all-channel sum
/// across the passband; analysis always uses the unweighted channels.
struct GammatoneBank {
  Vector center_hz;
  RowMatrix impulse_responses;  ///< kNumChannels x kGammatoneFirLength
  std::vector<int> peak_lags;   ///< per-channel impulse-response peak index
  Vector resynthesis_weights;
};

GammatoneBank make_gammatone_bank(int n = kNumChannels, double lo = 50.0,
                                  double hi = 8000.0);

/// Filters the waveform through every channel (FFT convolution, truncated
/// to the input length). Returns channels x samples.
RowMatrix gammatone_analyze(const GammatoneBank& bank, const Waveform& wave);

/// Time-frequency energy grid: per channel and frame, the sum of squares
/// within the window.
struct Cochleagram {
  RowMatrix energies;  ///< channels x frames, non-negative
  int win = kFrameLength;
  int hop = kFrameHop;
  Eigen::Index frames() const { return energies.cols(); }
};

int frame_count(std::int64_t samples, int win = kFrameLength,
                int hop = kFrameHop);

/// Throws ShapeError when the signal is shorter than one window.
Cochleagram cochleagram(const RowMatrix& channel_signals,
                        int win = kFrameLength, int hop = kFrameHop);

/// Multi-resolution cochleagram, frames x 256: the log 20 ms cochleagram,
/// a log 200 ms cochleagram center-aligned on the same hop, and 11x11 and
/// 23x23 mean smoothings of the first stream (truncated at the edges).
/// Log compression is ln(energy + 1e-12).
RowMatrix mrcg_features(const GammatoneBank& bank, const Waveform& wave);

/// Appends regression deltas (window +/-2, edge-replicated) and deltas of
/// deltas: frames x W in, frames x 3W out. Needs at least 5 frames.
RowMatrix add_deltas(const RowMatrix& features);

/// Per-column zero-mean unit-variance scaling over the utterance; the model
/// input conditioning applied after add_deltas everywhere in the pipeline.
RowMatrix standardize_features(const RowMatrix& features);

/// mrcg -> deltas -> standardization; the exact network input.
RowMatrix model_input_features(const GammatoneBank& bank, const Waveform& wave);

/// Per-unit ideal ratio mask (frames x channels, in [0, 1]):
///   ((S^2) / (S^2 + W^2))^beta, with the 0/0 unit defined as 0.
RowMatrix ideal_ratio_mask(const Cochleagram& clean, const Cochleagram& noise,
                           double beta = 0.5);

struct MixResult {
  Waveform noisy;
  Waveform scaled_noise;
  std::int64_t noise_offset = 0;
};

/// Scales a seeded random crop of the noise so that
/// 10 log10(rms_clean^2 / rms_noise^2) equals snr_db (full-utterance RMS),
/// then adds it to the clean signal. Throws NumericError on silent inputs.
MixResult mix_at_snr(const Waveform& clean, const Waveform& noise,
                     double snr_db, std::uint64_t seed);

double rms(const Vector& samples);

/// Per-channel masking and summation: each gammatone channel of the input
/// is weighted sample-wise by the linearly interpolated per-frame mask gain,
/// delay-compensated by the channel's impulse-response peak lag, and summed.
/// Output length equals the input length.
Waveform apply_mask_resynthesize(const GammatoneBank& bank,
                                 const Waveform& noisy, const RowMatrix& mask);

/// Mean over frames of 10 log10(sum ref^2 / sum (ref-proc)^2), each frame
/// clamped to [-10, 35] dB; frames with zero reference energy are skipped.
/// Throws NumericError when every frame is silent.
double segmental_snr(const Vector& reference, const Vector& processed,
                     int frame = kFrameLength, int hop = kFrameHop);

}  // namespace ttnet::audio
