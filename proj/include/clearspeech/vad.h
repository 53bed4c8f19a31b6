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

#ifndef CLEARSPEECH_VAD_H_
#define CLEARSPEECH_VAD_H_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "clearspeech/audio.h"

namespace clearspeech {

struct VadParams {
  double frame_ms = 10.0;
  // Thresholds are multiples of the calibrated noise floor.
  double energy_high = 8.0;
  double energy_low = 3.0;
  double zcr_threshold = 0.25;  // crossings per sample
  int noise_calibration_frames = 10;

  void Validate() const;
  std::size_t FrameLength(int sample_rate) const;
};

enum class VusLabel { kVoiced, kUnvoiced, kSilent };

std::string_view VusName(VusLabel label);

/// (1/N) * sum s[k]^2.
double ShortTimeEnergy(std::span<const double> frame);

/// Sign changes between neighbours divided by N-1; zero counts as positive.
double ZeroCrossingRate(std::span<const double> frame);

VusLabel ClassifyVus(std::span<const double> frame, const VadParams &params,
                     double noise_floor);

struct Endpoints {
  std::size_t begin = 0;  // first sample of speech
  std::size_t end = 0;    // one past the last sample of speech
};

struct FrameReport {
  double energy = 0.0;
  double zcr = 0.0;
  VusLabel label = VusLabel::kSilent;
};

/// Mean energy of the first noise_calibration_frames frames.
double CalibrateNoiseFloor(const Waveform &wave, const VadParams &params);

/// Two-threshold endpoint search.
Endpoints DetectEndpoints(const Waveform &wave, const VadParams &params);

/// Per-frame energy, zcr and label (non-overlapping frames).
std::vector<FrameReport> LabelFrames(const Waveform &wave,
                                     const VadParams &params);

Waveform TrimToVoiced(const Waveform &wave, const VadParams &params);

}  // namespace clearspeech

#endif  // CLEARSPEECH_VAD_H_
