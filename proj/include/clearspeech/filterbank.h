// Copyright 2026  The ClearSpeech Authors
//
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

#ifndef CLEARSPEECH_FILTERBANK_H_
#define CLEARSPEECH_FILTERBANK_H_

#include <cstddef>
#include <span>
#include <vector>

#include "clearspeech/audio.h"
#include "clearspeech/features.h"

namespace clearspeech {

enum class FirKind { kLowPass, kHighPass, kBandPass, kBandStop };

struct FirSpec {
  FirKind kind = FirKind::kLowPass;
  // One edge for low/high-pass, two (ascending) for band-pass/stop.
  std::vector<double> edge_hz;
  int num_taps = 101;
  int sample_rate = kDefaultSampleRate;
};

/// Hamming-windowed sinc, linear phase (type I). Low-pass prototypes are
/// normalized to unit DC gain; the other kinds are built from them by
/// spectral inversion.
std::vector<double> DesignFir(const FirSpec &spec);

/// Direct-form convolution; output has the input's length, zero state.
Waveform ApplyFir(const Waveform &wave, std::span<const double> taps);

/// |H(f)| of an FIR evaluated directly from its taps.
double FirMagnitude(std::span<const double> taps, double freq_hz,
                    int sample_rate);

struct AdaptiveParams {
  int order = 32;
  double mu = 0.01;
  double epsilon = 1e-6;  // NLMS regularizer
  // Keep a weight snapshot every `history_stride` steps (0 disables).
  std::size_t history_stride = 1;

  void Validate() const;
};

struct AdaptiveResult {
  Waveform enhanced;  // error signal e[n]
  std::vector<std::vector<double>> weight_history;
  std::vector<double> final_weights;
};

/// w <- w + mu e[n] x[n]; x[n] = (ref[n], ref[n-1], ...).
AdaptiveResult LmsCancel(const Waveform &primary, const Waveform &reference,
                         const AdaptiveParams &params);

/// w <- w + mu e[n] x[n] / (epsilon + |x[n]|^2).
AdaptiveResult NlmsCancel(const Waveform &primary, const Waveform &reference,
                          const AdaptiveParams &params);

/// 10 log10(sum mic^2 / sum residual^2).
double ErleDb(const Waveform &mic, const Waveform &residual);

/// Subtracts each row's (cepstral coefficient's) mean over time.
std::vector<std::vector<double>> CmnRows(std::vector<std::vector<double>> rows);
FeatureMatrix Cmn(const FeatureMatrix &features);

inline constexpr std::size_t kRastaMinFrames = 5;
inline constexpr double kRastaPole = 0.98;

enum class RastaInit {
  // Filter memory starts at zero.
  kZero,
  // The FIR memory is primed with the first four frames and those frames
  // are emitted as zero, so a constant trajectory yields exactly zero.
  kPrimed,
};

/// H(z) = 0.1 (2 + z^-1 - z^-3 - 2 z^-4) / (1 - 0.98 z^-1) along each row.
std::vector<std::vector<double>> RastaFilter(
    const std::vector<std::vector<double>> &trajectories,
    RastaInit init = RastaInit::kPrimed);

}  // namespace clearspeech

#endif  // CLEARSPEECH_FILTERBANK_H_
