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

#ifndef CLEARSPEECH_FEATURES_H_
#define CLEARSPEECH_FEATURES_H_

#include <array>
#include <cstddef>
#include <vector>

#include "clearspeech/audio.h"

namespace clearspeech {

inline constexpr int kNumCepstra = 20;
inline constexpr int kNumColumns = 20;
inline constexpr int kNumMelFilters = 26;
inline constexpr double kLogFloor = 1e-12;

/// Analysis framing. Window length is in samples; overlap in percent.
struct FrameParams {
  int window_len = 245;
  double overlap_pct = 45.0;
  int fft_size = 512;

  void Validate() const;
  int Hop() const;
  // fft_size, grown to the next power of two if the window is longer.
  int EffectiveFftSize() const;
  bool operator==(const FrameParams &) const = default;
};

using CepstralVector = std::array<double, kNumCepstra>;

/// Fixed 20x20 MFCC matrix: rows are cepstral indices 1..20, columns are
/// time positions. Columns are the observations the recognizer models.
class FeatureMatrix {
 public:
  static constexpr int kRows = kNumCepstra;
  static constexpr int kCols = kNumColumns;

  FeatureMatrix() { data_.fill(0.0); }

  double &operator()(int row, int col) { return data_[Index(row, col)]; }
  double operator()(int row, int col) const { return data_[Index(row, col)]; }

  CepstralVector Column(int col) const {
    CepstralVector v;
    for (int r = 0; r < kRows; ++r) v[r] = (*this)(r, col);
    return v;
  }

  FrameParams params;  // provenance

  bool operator==(const FeatureMatrix &o) const { return data_ == o.data_; }

 private:
  static constexpr std::size_t Index(int row, int col) {
    return static_cast<std::size_t>(row) * kCols + static_cast<std::size_t>(col);
  }
  std::array<double, kRows * kCols> data_;
};

/// w[k] = 0.54 - 0.46 cos(2 pi k / (n-1)).
std::vector<double> HammingWindow(int n);

/// Frames at stride Hop(); the final partial frame is zero-padded.
std::vector<std::vector<double>> FrameSignal(const Waveform &wave,
                                             const FrameParams &params);
std::size_t FrameCount(std::size_t length, const FrameParams &params);

double HzToMel(double hz);
double MelToHz(double mel);

struct MelFilterbank {
  std::vector<std::vector<double>> weights;  // n_filters x (fft_size/2+1)
  std::vector<double> centers_hz;
};

/// Triangular filters with centres equally spaced in mel on [0, sr/2].
MelFilterbank MakeMelFilterbank(int n_filters, int fft_size, int sample_rate);

struct FeatureOptions {
  // RASTA filtering of the log-mel trajectories before the DCT.
  bool rasta = false;
  // Cepstral mean normalization of the final matrix.
  bool cmn = false;
};

/// Log mel energies per frame (frames x kNumMelFilters).
std::vector<std::vector<double>> LogMelFrames(const Waveform &wave,
                                              const FrameParams &params);

/// Orthonormal DCT-II of `x`, coefficients 1..20 kept.
CepstralVector CepstraFromLogMel(const std::vector<double> &log_mel);

std::vector<CepstralVector> MfccFrames(const Waveform &wave,
                                       const FrameParams &params,
                                       const FeatureOptions &options = {});

/// Reduces any number of frames to exactly 20 columns by averaging frames
/// in 20 contiguous segments (fewer frames are repeated).
FeatureMatrix ToFeatureMatrix(const std::vector<CepstralVector> &frames);

FeatureMatrix ExtractFeatures(const Waveform &wave, const FrameParams &params,
                              const FeatureOptions &options = {});

}  // namespace clearspeech

#endif  // CLEARSPEECH_FEATURES_H_
