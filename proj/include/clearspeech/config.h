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

#ifndef CLEARSPEECH_CONFIG_H_
#define CLEARSPEECH_CONFIG_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "clearspeech/evalkit.h"

namespace clearspeech {

/// Flat key=value pipeline description. Blank lines and lines starting
/// with '#' are ignored. Keys:
///   stages        stage list as accepted by ParseStages (may be empty)
///   window, overlap, fft_size
///   noise_source  leading | vad | oracle
///   noise_frames  leading-frame count for the noise estimate
///   states, iters, tol, n_train
///   models        model directory
///   seed
struct PipelineConfig {
  std::string stages;
  FrameParams frame;
  NoiseSource noise_source = NoiseSource::kVadGuided;
  std::size_t noise_frames = 10;
  int n_states = kDefaultStates;
  int max_iters = 20;
  double tol = 1e-4;
  int n_train = 5;
  std::string model_dir = "models";
  std::uint64_t seed = 1;

  /// Throws on unknown stages or invalid frame parameters.
  void Validate() const;
  RecognitionConfig ToRecognitionConfig() const;
};

/// Applies the assignments in `text` on top of `base`.
PipelineConfig ParsePipelineConfig(std::string_view text,
                                   PipelineConfig base = {});
PipelineConfig LoadPipelineConfig(const std::string &path,
                                  PipelineConfig base = {});

NoiseSource ParseNoiseSource(std::string_view name);
std::string_view NoiseSourceName(NoiseSource source);

}  // namespace clearspeech

#endif  // CLEARSPEECH_CONFIG_H_
