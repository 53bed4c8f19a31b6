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

#ifndef CLEARSPEECH_HYBRID_H_
#define CLEARSPEECH_HYBRID_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "clearspeech/audio.h"
#include "clearspeech/enhance.h"
#include "clearspeech/filterbank.h"

namespace clearspeech {

enum class StageKind {
  kFir,
  kLms,
  kNlms,
  // Time-domain no-op; tells the front end to apply RASTA and CMN.
  kRasta,
  kEnhance,
};

struct HybridStage {
  StageKind kind = StageKind::kEnhance;
  std::vector<double> fir_taps;   // kFir
  AdaptiveParams adaptive;        // kLms / kNlms
  EnhanceConfig enhance;          // kEnhance (any variant incl. Kalman)

  std::string Name() const;
};

enum class NoiseSource {
  kLeadingFrames,
  kVadGuided,
  // PSD of HybridContext::noise, the exact noise that was added.
  kOracle,
};

struct HybridContext {
  std::optional<Waveform> reference;  // for LMS/NLMS
  std::optional<Waveform> noise;      // for kOracle
  NoiseSource noise_source = NoiseSource::kLeadingFrames;
  std::size_t noise_frames = 10;
  StftParams stft;
};

/// Parses "nlms,logmmse" style stage lists. Tokens: lms, nlms, rasta, any
/// enhancement variant name, and fir:<lowpass|highpass|bandpass|bandstop>:
/// <hz>[:<hz>][:taps=<n>] (taps default 101).
std::vector<HybridStage> ParseStages(std::string_view spec,
                                     int sample_rate = kDefaultSampleRate);
std::string FormatStages(const std::vector<HybridStage> &stages);

/// Runs one stage on `wave`.
Waveform RunStage(const Waveform &wave, const HybridStage &stage,
                  const HybridContext &context);

/// Applies the stages in order with intermediate materialization.
Waveform RunHybrid(const Waveform &wave, const std::vector<HybridStage> &stages,
                   const HybridContext &context);

bool WantsFeatureNormalization(const std::vector<HybridStage> &stages);

}  // namespace clearspeech

#endif  // CLEARSPEECH_HYBRID_H_
