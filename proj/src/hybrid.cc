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

#include "clearspeech/hybrid.h"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "clearspeech/error.h"

namespace clearspeech {

namespace {

std::vector<std::string> Split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ' && c != '\t') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double ParseNumber(const std::string &token, std::string_view what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw Error(ErrorCode::kInvalidArgument,
                "bad " + std::string(what) + " '" + token + "'");
  return v;
}

HybridStage ParseFir(const std::vector<std::string> &parts, int sample_rate) {
  if (parts.size() < 3)
    throw Error(ErrorCode::kInvalidArgument,
                "fir stage needs fir:<kind>:<hz>[:<hz>]");
  FirSpec spec;
  spec.sample_rate = sample_rate;
  const std::string &kind = parts[1];
  if (kind == "lowpass") spec.kind = FirKind::kLowPass;
  else if (kind == "highpass") spec.kind = FirKind::kHighPass;
  else if (kind == "bandpass") spec.kind = FirKind::kBandPass;
  else if (kind == "bandstop") spec.kind = FirKind::kBandStop;
  else throw Error(ErrorCode::kInvalidArgument, "unknown FIR kind '" + kind + "'");
  for (std::size_t i = 2; i < parts.size(); ++i) {
    if (parts[i].rfind("taps=", 0) == 0)
      spec.num_taps = static_cast<int>(ParseNumber(parts[i].substr(5), "tap count"));
    else
      spec.edge_hz.push_back(ParseNumber(parts[i], "cutoff"));
  }
  HybridStage stage;
  stage.kind = StageKind::kFir;
  stage.fir_taps = DesignFir(spec);
  return stage;
}

NoisePsd StageNoise(const SpectralFrames &spectrum, const Waveform &input,
                    const HybridContext &ctx) {
  switch (ctx.noise_source) {
    case NoiseSource::kOracle:
      if (!ctx.noise)
        throw Error(ErrorCode::kMissingReference,
                    "oracle noise PSD requested without a noise waveform");
      return NoisePsdOf(*ctx.noise, ctx.stft);
    case NoiseSource::kVadGuided: {
      auto mask = VadNoiseMask(input, ctx.stft);
      mask.resize(spectrum.frames(), false);
      if (std::find(mask.begin(), mask.end(), true) != mask.end())
        return EstimateNoise(spectrum, VadGuided{mask});
      break;  // nothing looked like noise; fall back to leading frames
    }
    case NoiseSource::kLeadingFrames:
      break;
  }
  return EstimateNoise(spectrum,
                       LeadingFrames{std::min(ctx.noise_frames, spectrum.frames())});
}

}  // namespace

std::string HybridStage::Name() const {
  switch (kind) {
    case StageKind::kFir: return "fir";
    case StageKind::kLms: return "lms";
    case StageKind::kNlms: return "nlms";
    case StageKind::kRasta: return "rasta";
    case StageKind::kEnhance: return std::string(VariantName(enhance.variant));
  }
  return "?";
}

std::vector<HybridStage> ParseStages(std::string_view spec, int sample_rate) {
  std::vector<HybridStage> stages;
  for (const auto &token : Split(spec, ',')) {
    if (token.empty()) continue;
    auto parts = Split(token, ':');
    const std::string &head = parts[0];
    HybridStage stage;
    if (head == "fir") {
      stage = ParseFir(parts, sample_rate);
    } else if (head == "lms" || head == "nlms") {
      stage.kind = head == "lms" ? StageKind::kLms : StageKind::kNlms;
      stage.adaptive.mu = head == "lms" ? 0.01 : 0.1;
      stage.adaptive.history_stride = 0;
      if (parts.size() > 1) stage.adaptive.mu = ParseNumber(parts[1], "mu");
      if (parts.size() > 2)
        stage.adaptive.order = static_cast<int>(ParseNumber(parts[2], "order"));
    } else if (head == "rasta") {
      stage.kind = StageKind::kRasta;
    } else if (auto v = ParseVariant(head)) {
      stage.kind = StageKind::kEnhance;
      stage.enhance.variant = *v;
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown stage '" + head + "'");
    }
    stages.push_back(std::move(stage));
  }
  if (stages.empty()) throw Error(ErrorCode::kEmptyPipeline, "no stages given");
  return stages;
}

std::string FormatStages(const std::vector<HybridStage> &stages) {
  std::string out;
  for (const auto &s : stages) {
    if (!out.empty()) out += ',';
    out += s.Name();
  }
  return out;
}

Waveform RunStage(const Waveform &wave, const HybridStage &stage,
                  const HybridContext &ctx) {
  switch (stage.kind) {
    case StageKind::kFir:
      return ApplyFir(wave, stage.fir_taps);
    case StageKind::kLms:
    case StageKind::kNlms: {
      if (!ctx.reference)
        throw Error(ErrorCode::kMissingReference,
                    stage.Name() + " stage needs a reference channel");
      AdaptiveParams p = stage.adaptive;
      p.history_stride = 0;
      return stage.kind == StageKind::kLms
                 ? LmsCancel(wave, *ctx.reference, p).enhanced
                 : NlmsCancel(wave, *ctx.reference, p).enhanced;
    }
    case StageKind::kRasta:
      return wave;
    case StageKind::kEnhance:
      break;
  }
  // Spectral and Kalman stages share the noise estimate logic.
  Waveform padded = wave;
  {
    const auto frame = static_cast<std::size_t>(ctx.stft.frame_len);
    const auto hop = static_cast<std::size_t>(ctx.stft.hop);
    std::size_t len = frame;
    if (wave.size() > frame) len += (wave.size() - frame + hop - 1) / hop * hop;
    padded.samples.resize(len, 0.0);
  }
  auto spectrum = Stft(padded, ctx.stft);
  NoisePsd noise = StageNoise(spectrum, wave, ctx);
  return EnhanceWaveform(wave, stage.enhance, ctx.stft, KnownPsd{std::move(noise)});
}

Waveform RunHybrid(const Waveform &wave, const std::vector<HybridStage> &stages,
                   const HybridContext &context) {
  if (stages.empty()) throw Error(ErrorCode::kEmptyPipeline, "no stages given");
  Waveform current = wave;
  for (const auto &stage : stages) current = RunStage(current, stage, context);
  current.samples.resize(wave.size(), 0.0);
  return current;
}

bool WantsFeatureNormalization(const std::vector<HybridStage> &stages) {
  return std::any_of(stages.begin(), stages.end(), [](const HybridStage &s) {
    return s.kind == StageKind::kRasta;
  });
}

}  // namespace clearspeech
