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

#ifndef CLEARSPEECH_ENHANCE_H_
#define CLEARSPEECH_ENHANCE_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "clearspeech/audio.h"

namespace clearspeech {

enum class WindowKind { kHamming, kHann, kRect };

struct StftParams {
  int frame_len = 256;
  int hop = 128;
  int fft_size = 256;
  WindowKind window = WindowKind::kHamming;

  void Validate() const;
  int bins() const { return fft_size / 2 + 1; }
  bool operator==(const StftParams &) const = default;
};

/// Periodic analysis window of length n.
std::vector<double> AnalysisWindow(WindowKind kind, int n);

/// One-sided STFT: magnitude and phase per frame, frames x bins.
struct SpectralFrames {
  std::vector<std::vector<double>> magnitudes;
  std::vector<std::vector<double>> phases;
  StftParams params;
  std::size_t original_length = 0;
  int sample_rate = kDefaultSampleRate;

  std::size_t frames() const { return magnitudes.size(); }
  int bins() const { return params.bins(); }
};

std::size_t StftFrameCount(std::size_t length, const StftParams &params);

SpectralFrames Stft(const Waveform &wave, const StftParams &params);

/// Weighted overlap-add synthesis normalized by the summed squared window.
Waveform Istft(const SpectralFrames &frames);

struct NoisePsd {
  std::vector<double> power;  // per bin
  std::size_t frames_used = 0;
};

struct LeadingFrames {
  std::size_t count = 10;
};
struct VadGuided {
  // true marks a noise-only frame
  std::vector<bool> noise_frames;
};
// A PSD supplied by the caller, e.g. measured on the exact added noise.
struct KnownPsd {
  NoisePsd psd;
};
using NoiseMethod = std::variant<LeadingFrames, VadGuided, KnownPsd>;

/// Per-bin mean |Y|^2 over the selected noise-only frames (KnownPsd is
/// returned as given after a bin-count check).
NoisePsd EstimateNoise(const SpectralFrames &frames, const NoiseMethod &method);

/// Noise-only frame mask from the energy/zcr classifier: frames labelled
/// Silent against the leading-frame floor and no louder than twice the
/// 10th-percentile frame energy are noise.
std::vector<bool> VadNoiseMask(const Waveform &wave, const StftParams &params);

enum class EnhanceVariant {
  kBoll,
  kBerouti,
  kSim,
  kKamath,
  kWienerDD,
  kMmseStsa,
  kLogMmse,
  kOmlsa,
  kKalman,
};

std::string_view VariantName(EnhanceVariant v);
std::optional<EnhanceVariant> ParseVariant(std::string_view name);

struct EnhanceConfig {
  EnhanceVariant variant = EnhanceVariant::kBoll;
  // Fixed oversubtraction factor; unset selects the segmental-SNR schedule
  // alpha = 4 - 3 SNR/20 clamped to [1, 5].
  std::optional<double> alpha;
  double beta = 0.002;      // spectral floor, as a fraction of noise power
  double exponent = 2.0;    // Sim: magnitude exponent p
  double dd_alpha = 0.98;   // decision-directed smoothing
  double gain_floor_db = -25.0;
  int bands = 4;            // Kamath
  int ar_order = 10;        // Kalman
  int iterations = 3;       // Kalman
  // OM-LSA speech-presence estimator.
  double presence_smoothing = 0.7;
  double prior_absence = 0.5;

  void Validate() const;
  double GainFloor() const;
};

bool IsSubtractive(EnhanceVariant v);
bool IsStatistical(EnhanceVariant v);

/// Boll, Berouti, Sim and Kamath magnitude rules. Phase passes through.
SpectralFrames SpectralSubtract(const SpectralFrames &frames,
                                const NoisePsd &noise,
                                const EnhanceConfig &cfg);

/// Decision-directed Wiener, MMSE-STSA, log-MMSE and OM-LSA gains.
SpectralFrames StatisticalEnhance(const SpectralFrames &frames,
                                  const NoisePsd &noise,
                                  const EnhanceConfig &cfg);

// Gain functions of a-priori SNR xi and posterior SNR gamma, before the
// [G_min, 1] clamp.
double WienerGain(double xi);
double MmseStsaGain(double xi, double gamma);
double LogMmseGain(double xi, double gamma);
double SpeechPresenceProbability(double xi, double gamma, double prior_absence);

/// Exponential integral E1(x), x > 0.
double ExpIntE1(double x);

inline constexpr int kKalmanBlock = 256;

/// Iterative AR-model Kalman filter on 50%-overlapped triangular blocks.
Waveform KalmanEnhance(const Waveform &wave, double noise_variance,
                       const EnhanceConfig &cfg);

/// AR coefficients a[1..p] (x[n] ~ sum a[k] x[n-k]) and the prediction
/// error power, via Levinson-Durbin on the biased autocorrelation.
struct ArModel {
  std::vector<double> coeffs;
  double error_power = 0.0;
};
ArModel FitAr(std::span<const double> x, int order);
ArModel LevinsonDurbin(std::span<const double> autocorr, int order);

/// Noise PSD of a noise-only waveform over all of its frames.
NoisePsd NoisePsdOf(const Waveform &noise, const StftParams &params);

/// White-noise variance implied by a PSD measured with `params`' window.
double NoiseVarianceFromPsd(const NoisePsd &psd, const StftParams &params);

/// Convenience: STFT, noise estimate, the configured rule, ISTFT. The
/// signal is zero-padded to whole frames and cropped back afterwards.
Waveform EnhanceWaveform(const Waveform &wave, const EnhanceConfig &cfg,
                         const StftParams &stft, const NoiseMethod &method);

}  // namespace clearspeech

#endif  // CLEARSPEECH_ENHANCE_H_
