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

#include "clearspeech/vad.h"

#include <algorithm>
#include <cmath>

#include "clearspeech/error.h"

namespace clearspeech {

namespace {
// Floors a digitally silent calibration segment so the thresholds stay
// positive and an all-zero frame still classifies as Silent.
constexpr double kMinNoiseFloor = 1e-10;
constexpr std::size_t kSustainFrames = 3;

std::vector<double> FrameEnergies(const Waveform &wave, std::size_t frame_len) {
  std::size_t n = wave.size() / frame_len;
  std::vector<double> e(n);
  for (std::size_t i = 0; i < n; ++i)
    e[i] = ShortTimeEnergy(wave.view().subspan(i * frame_len, frame_len));
  return e;
}
}  // namespace

void VadParams::Validate() const {
  if (!(frame_ms > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "frame_ms must be positive");
  if (!(energy_low > 0.0 && energy_low < energy_high))
    throw Error(ErrorCode::kInvalidArgument,
                "need 0 < energy_low < energy_high");
  if (noise_calibration_frames < 1)
    throw Error(ErrorCode::kInvalidArgument,
                "noise_calibration_frames must be >= 1");
}

std::size_t VadParams::FrameLength(int sample_rate) const {
  auto n = static_cast<std::size_t>(std::lround(frame_ms * sample_rate / 1000.0));
  return std::max<std::size_t>(n, 2);
}

std::string_view VusName(VusLabel label) {
  switch (label) {
    case VusLabel::kVoiced: return "voiced";
    case VusLabel::kUnvoiced: return "unvoiced";
    case VusLabel::kSilent: return "silent";
  }
  return "?";
}

double ShortTimeEnergy(std::span<const double> frame) {
  if (frame.empty()) throw Error(ErrorCode::kEmptyFrame, "empty frame");
  double acc = 0.0;
  for (double v : frame) acc += v * v;
  return acc / static_cast<double>(frame.size());
}

double ZeroCrossingRate(std::span<const double> frame) {
  if (frame.size() < 2)
    throw Error(ErrorCode::kFrameTooShort, "zcr needs at least 2 samples");
  std::size_t crossings = 0;
  for (std::size_t i = 1; i < frame.size(); ++i)
    if ((frame[i] >= 0.0) != (frame[i - 1] >= 0.0)) ++crossings;
  return static_cast<double>(crossings) /
         static_cast<double>(frame.size() - 1);
}

VusLabel ClassifyVus(std::span<const double> frame, const VadParams &params,
                     double noise_floor) {
  double energy = ShortTimeEnergy(frame);
  double zcr = frame.size() >= 2 ? ZeroCrossingRate(frame) : 0.0;
  double floor = std::max(noise_floor, kMinNoiseFloor);
  if (energy < params.energy_low * floor) return VusLabel::kSilent;
  if (energy >= params.energy_high * floor && zcr < params.zcr_threshold)
    return VusLabel::kVoiced;
  return VusLabel::kUnvoiced;
}

double CalibrateNoiseFloor(const Waveform &wave, const VadParams &params) {
  params.Validate();
  std::size_t len = params.FrameLength(wave.sample_rate);
  auto k = static_cast<std::size_t>(params.noise_calibration_frames);
  if (wave.size() <= k * len)
    throw Error(ErrorCode::kTooShort,
                "waveform shorter than the noise calibration span");
  double acc = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    acc += ShortTimeEnergy(wave.view().subspan(i * len, len));
  return acc / static_cast<double>(k);
}

Endpoints DetectEndpoints(const Waveform &wave, const VadParams &params) {
  const double floor =
      std::max(CalibrateNoiseFloor(wave, params), kMinNoiseFloor);
  const std::size_t len = params.FrameLength(wave.sample_rate);
  const auto energy = FrameEnergies(wave, len);
  const std::size_t n = energy.size();
  const double peak = *std::max_element(energy.begin(), energy.end());

  // When voiced speech fills the calibration span the floor is speech
  // energy, so the upper threshold is capped at half the peak frame energy.
  // A noise-like lead-in (high zcr) keeps the plain relative threshold.
  double lead_zcr = 0.0;
  const auto k = static_cast<std::size_t>(params.noise_calibration_frames);
  for (std::size_t i = 0; i < k; ++i)
    lead_zcr += ZeroCrossingRate(wave.view().subspan(i * len, len));
  lead_zcr /= static_cast<double>(k);
  double high = params.energy_high * floor;
  if (lead_zcr < params.zcr_threshold) high = std::min(high, 0.5 * peak);
  const double low = high * (params.energy_low / params.energy_high);
  if (!(peak > 0.0))
    throw Error(ErrorCode::kNoSpeechFound, "signal is silent");

  const std::size_t sustain = std::min(kSustainFrames, n);
  auto sustained_from = [&](std::size_t i) {
    for (std::size_t k = 0; k < sustain; ++k)
      if (!(energy[i + k] > high)) return false;
    return true;
  };

  std::size_t first = n;
  for (std::size_t i = 0; i + sustain <= n; ++i)
    if (sustained_from(i)) {
      first = i;
      break;
    }
  if (first == n)
    throw Error(ErrorCode::kNoSpeechFound,
                "no frame run exceeds the upper energy threshold");
  std::size_t last = first;
  for (std::size_t i = n - sustain + 1; i-- > 0;)
    if (sustained_from(i)) {
      last = i + sustain - 1;
      break;
    }

  while (first > 0 && energy[first - 1] > low) --first;
  while (last + 1 < n && energy[last + 1] > low) ++last;

  Endpoints ep;
  ep.begin = first * len;
  ep.end = last + 1 == n ? wave.size() : (last + 1) * len;
  return ep;
}

std::vector<FrameReport> LabelFrames(const Waveform &wave,
                                     const VadParams &params) {
  const double floor = CalibrateNoiseFloor(wave, params);
  const std::size_t len = params.FrameLength(wave.sample_rate);
  std::vector<FrameReport> out;
  for (std::size_t start = 0; start + len <= wave.size(); start += len) {
    auto frame = wave.view().subspan(start, len);
    out.push_back({ShortTimeEnergy(frame), ZeroCrossingRate(frame),
                   ClassifyVus(frame, params, floor)});
  }
  return out;
}

Waveform TrimToVoiced(const Waveform &wave, const VadParams &params) {
  auto ep = DetectEndpoints(wave, params);
  return Waveform(std::vector<double>(wave.samples.begin() + static_cast<std::ptrdiff_t>(ep.begin),
                                      wave.samples.begin() + static_cast<std::ptrdiff_t>(ep.end)),
                  wave.sample_rate);
}

}  // namespace clearspeech
