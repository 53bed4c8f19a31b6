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

#include "clearspeech/enhance.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "clearspeech/error.h"
#include "clearspeech/fft.h"
#include "clearspeech/vad.h"

namespace clearspeech {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

void RequireNoiseBins(const SpectralFrames &frames, const NoisePsd &noise) {
  if (noise.power.size() != static_cast<std::size_t>(frames.bins()))
    throw Error(ErrorCode::kDimensionMismatch,
                "noise PSD has " + std::to_string(noise.power.size()) +
                    " bins, spectrum has " + std::to_string(frames.bins()));
  for (const auto &row : frames.magnitudes)
    if (row.size() != noise.power.size())
      throw Error(ErrorCode::kDimensionMismatch, "ragged spectral frames");
}

double BeroutiAlpha(double snr_db) {
  return std::clamp(4.0 - 3.0 * snr_db / 20.0, 1.0, 5.0);
}

double SegmentalSnrDb(std::span<const double> mag, std::span<const double> noise) {
  double p = 0.0, d = 0.0;
  for (std::size_t k = 0; k < mag.size(); ++k) {
    p += mag[k] * mag[k];
    d += noise[k];
  }
  if (d <= 0.0) return 100.0;
  if (p <= 0.0) return -100.0;
  return 10.0 * std::log10(p / d);
}

// Kamath-Loizou per-band tweak: 1 below 1 kHz, 2.5 up to fs/2 - 2 kHz,
// 1.5 above, judged at the band's upper edge.
double KamathTweak(double upper_hz, double sample_rate) {
  if (upper_hz <= 1000.0) return 1.0;
  if (upper_hz <= sample_rate / 2.0 - 2000.0) return 2.5;
  return 1.5;
}

// exp(-z) I_n(z) for n in {0, 1}, switching to the asymptotic series where
// I_n would overflow.
double ScaledBesselI(int n, double z) {
  if (z < 500.0) return std::exp(-z) * std::cyl_bessel_i(static_cast<double>(n), z);
  double mu = 4.0 * n * n;
  double t1 = (mu - 1.0) / (8.0 * z);
  double t2 = t1 * (mu - 9.0) / (2.0 * 8.0 * z);
  return (1.0 - t1 + t2) / std::sqrt(2.0 * std::numbers::pi * z);
}

}  // namespace

void StftParams::Validate() const {
  if (!(hop > 0 && hop <= frame_len && frame_len <= fft_size))
    throw Error(ErrorCode::kBadParams, "need 0 < hop <= frame_len <= fft_size");
  if (!IsPowerOfTwo(fft_size))
    throw Error(ErrorCode::kBadParams, "fft_size must be a power of two");
}

std::vector<double> AnalysisWindow(WindowKind kind, int n) {
  std::vector<double> w(static_cast<std::size_t>(n), 1.0);
  const double step = 2.0 * std::numbers::pi / n;
  for (int i = 0; i < n; ++i) {
    switch (kind) {
      case WindowKind::kHamming: w[i] = 0.54 - 0.46 * std::cos(step * i); break;
      case WindowKind::kHann: w[i] = 0.5 - 0.5 * std::cos(step * i); break;
      case WindowKind::kRect: break;
    }
  }
  return w;
}

std::size_t StftFrameCount(std::size_t length, const StftParams &params) {
  auto frame = static_cast<std::size_t>(params.frame_len);
  if (length < frame) return 0;
  return 1 + (length - frame) / static_cast<std::size_t>(params.hop);
}

SpectralFrames Stft(const Waveform &wave, const StftParams &params) {
  params.Validate();
  if (wave.size() < static_cast<std::size_t>(params.frame_len))
    throw Error(ErrorCode::kTooShort,
                "signal shorter than one STFT frame");
  const std::size_t count = StftFrameCount(wave.size(), params);
  const auto window = AnalysisWindow(params.window, params.frame_len);
  RealFft fft(params.fft_size);
  std::vector<double> buf(static_cast<std::size_t>(params.fft_size));
  std::vector<std::complex<double>> spec(static_cast<std::size_t>(params.bins()));

  SpectralFrames out;
  out.params = params;
  out.original_length = wave.size();
  out.sample_rate = wave.sample_rate;
  out.magnitudes.reserve(count);
  out.phases.reserve(count);
  for (std::size_t f = 0; f < count; ++f) {
    std::fill(buf.begin(), buf.end(), 0.0);
    const std::size_t start = f * static_cast<std::size_t>(params.hop);
    for (int i = 0; i < params.frame_len; ++i)
      buf[i] = wave.samples[start + i] * window[i];
    fft.Forward(buf, spec);
    std::vector<double> mag(spec.size()), ph(spec.size());
    for (std::size_t k = 0; k < spec.size(); ++k) {
      mag[k] = std::abs(spec[k]);
      ph[k] = std::arg(spec[k]);
    }
    out.magnitudes.push_back(std::move(mag));
    out.phases.push_back(std::move(ph));
  }
  return out;
}

Waveform Istft(const SpectralFrames &frames) {
  const auto &p = frames.params;
  p.Validate();
  const auto bins = static_cast<std::size_t>(p.bins());
  if (frames.magnitudes.size() != frames.phases.size() ||
      frames.frames() != StftFrameCount(frames.original_length, p))
    throw Error(ErrorCode::kInconsistentGeometry,
                "frame count does not match original length and hop");
  for (std::size_t f = 0; f < frames.frames(); ++f)
    if (frames.magnitudes[f].size() != bins || frames.phases[f].size() != bins)
      throw Error(ErrorCode::kInconsistentGeometry, "bin count mismatch");

  const auto window = AnalysisWindow(p.window, p.frame_len);
  RealFft fft(p.fft_size);
  std::vector<std::complex<double>> spec(bins);
  std::vector<double> buf(static_cast<std::size_t>(p.fft_size));
  std::vector<double> acc(frames.original_length, 0.0);
  std::vector<double> norm(frames.original_length, 0.0);
  for (std::size_t f = 0; f < frames.frames(); ++f) {
    for (std::size_t k = 0; k < bins; ++k)
      spec[k] = std::polar(frames.magnitudes[f][k], frames.phases[f][k]);
    fft.Inverse(spec, buf);
    const std::size_t start = f * static_cast<std::size_t>(p.hop);
    for (int i = 0; i < p.frame_len; ++i) {
      acc[start + i] += window[i] * buf[i];
      norm[start + i] += window[i] * window[i];
    }
  }
  for (std::size_t n = 0; n < acc.size(); ++n)
    acc[n] = norm[n] > 1e-12 ? acc[n] / norm[n] : 0.0;
  return Waveform(std::move(acc), frames.sample_rate);
}

NoisePsd EstimateNoise(const SpectralFrames &frames, const NoiseMethod &method) {
  std::vector<bool> use(frames.frames(), false);
  if (const auto *lead = std::get_if<LeadingFrames>(&method)) {
    if (lead->count == 0 || lead->count > frames.frames())
      throw Error(ErrorCode::kNoNoiseFrames,
                  "need 1.." + std::to_string(frames.frames()) +
                      " leading frames, asked for " + std::to_string(lead->count));
    std::fill_n(use.begin(), lead->count, true);
  } else if (const auto *known = std::get_if<KnownPsd>(&method)) {
    if (known->psd.power.size() != static_cast<std::size_t>(frames.bins()))
      throw Error(ErrorCode::kDimensionMismatch,
                  "supplied noise PSD has the wrong bin count");
    return known->psd;
  } else {
    const auto &mask = std::get<VadGuided>(method).noise_frames;
    if (mask.size() != frames.frames())
      throw Error(ErrorCode::kDimensionMismatch,
                  "noise mask length differs from frame count");
    use = mask;
  }
  NoisePsd psd;
  psd.power.assign(static_cast<std::size_t>(frames.bins()), 0.0);
  for (std::size_t f = 0; f < frames.frames(); ++f) {
    if (!use[f]) continue;
    ++psd.frames_used;
    for (std::size_t k = 0; k < psd.power.size(); ++k)
      psd.power[k] += frames.magnitudes[f][k] * frames.magnitudes[f][k];
  }
  if (psd.frames_used == 0)
    throw Error(ErrorCode::kNoNoiseFrames, "no frame is marked noise-only");
  for (auto &v : psd.power) v /= static_cast<double>(psd.frames_used);
  return psd;
}

std::vector<bool> VadNoiseMask(const Waveform &wave, const StftParams &params) {
  VadParams vad;
  const double floor = CalibrateNoiseFloor(wave, vad);
  const std::size_t count = StftFrameCount(wave.size(), params);
  std::vector<bool> mask(count, false);
  std::vector<double> energy(count);
  for (std::size_t f = 0; f < count; ++f)
    energy[f] = ShortTimeEnergy(wave.view().subspan(
        f * static_cast<std::size_t>(params.hop), static_cast<std::size_t>(params.frame_len)));
  // At low SNR whole words can sit under the silence threshold, so frames
  // must also be close to the quietest tenth of the signal.
  std::vector<double> sorted = energy;
  auto nth = sorted.begin() + static_cast<std::ptrdiff_t>(count / 10);
  std::nth_element(sorted.begin(), nth, sorted.end());
  const double quiet = 2.0 * *nth;
  for (std::size_t f = 0; f < count; ++f) {
    auto frame = wave.view().subspan(f * static_cast<std::size_t>(params.hop),
                                     static_cast<std::size_t>(params.frame_len));
    mask[f] = energy[f] <= quiet && ClassifyVus(frame, vad, floor) == VusLabel::kSilent;
  }
  return mask;
}

std::string_view VariantName(EnhanceVariant v) {
  switch (v) {
    case EnhanceVariant::kBoll: return "boll";
    case EnhanceVariant::kBerouti: return "berouti";
    case EnhanceVariant::kSim: return "sim";
    case EnhanceVariant::kKamath: return "kamath";
    case EnhanceVariant::kWienerDD: return "wiener";
    case EnhanceVariant::kMmseStsa: return "mmse";
    case EnhanceVariant::kLogMmse: return "logmmse";
    case EnhanceVariant::kOmlsa: return "omlsa";
    case EnhanceVariant::kKalman: return "kalman";
  }
  return "?";
}

std::optional<EnhanceVariant> ParseVariant(std::string_view name) {
  for (auto v : {EnhanceVariant::kBoll, EnhanceVariant::kBerouti,
                 EnhanceVariant::kSim, EnhanceVariant::kKamath,
                 EnhanceVariant::kWienerDD, EnhanceVariant::kMmseStsa,
                 EnhanceVariant::kLogMmse, EnhanceVariant::kOmlsa,
                 EnhanceVariant::kKalman})
    if (VariantName(v) == name) return v;
  if (name == "wienerdd") return EnhanceVariant::kWienerDD;
  if (name == "mmsestsa" || name == "mmse-stsa") return EnhanceVariant::kMmseStsa;
  if (name == "cohen") return EnhanceVariant::kOmlsa;
  return std::nullopt;
}

bool IsSubtractive(EnhanceVariant v) {
  return v == EnhanceVariant::kBoll || v == EnhanceVariant::kBerouti ||
         v == EnhanceVariant::kSim || v == EnhanceVariant::kKamath;
}

bool IsStatistical(EnhanceVariant v) {
  return v == EnhanceVariant::kWienerDD || v == EnhanceVariant::kMmseStsa ||
         v == EnhanceVariant::kLogMmse || v == EnhanceVariant::kOmlsa;
}

void EnhanceConfig::Validate() const {
  if (alpha && variant == EnhanceVariant::kBerouti && *alpha < 1.0)
    throw Error(ErrorCode::kBadParams, "Berouti alpha must be >= 1");
  if (alpha && *alpha < 0.0)
    throw Error(ErrorCode::kBadParams, "alpha must be non-negative");
  if (!(beta >= 0.0 && beta <= 0.1))
    throw Error(ErrorCode::kBadParams, "beta must lie in [0, 0.1]");
  if (!(dd_alpha >= 0.0 && dd_alpha < 1.0))
    throw Error(ErrorCode::kBadParams, "dd_alpha must lie in [0, 1)");
  if (!(exponent > 0.0)) throw Error(ErrorCode::kBadParams, "exponent must be > 0");
  if (bands < 1) throw Error(ErrorCode::kBadParams, "bands must be >= 1");
  if (ar_order < 1) throw Error(ErrorCode::kBadParams, "ar_order must be >= 1");
  if (iterations < 1) throw Error(ErrorCode::kBadParams, "iterations must be >= 1");
  if (!(presence_smoothing >= 0.0 && presence_smoothing < 1.0))
    throw Error(ErrorCode::kBadParams, "presence_smoothing must lie in [0, 1)");
  if (!(prior_absence > 0.0 && prior_absence < 1.0))
    throw Error(ErrorCode::kBadParams, "prior_absence must lie in (0, 1)");
}

double EnhanceConfig::GainFloor() const {
  return std::pow(10.0, gain_floor_db / 20.0);
}

SpectralFrames SpectralSubtract(const SpectralFrames &frames,
                                const NoisePsd &noise,
                                const EnhanceConfig &cfg) {
  if (!IsSubtractive(cfg.variant))
    throw Error(ErrorCode::kWrongVariant,
                std::string(VariantName(cfg.variant)) +
                    " is not a spectral-subtraction variant");
  cfg.Validate();
  RequireNoiseBins(frames, noise);
  const auto &d = noise.power;
  const std::size_t bins = d.size();

  // Band layout (one band unless Kamath).
  const std::size_t n_bands =
      cfg.variant == EnhanceVariant::kKamath
          ? std::min<std::size_t>(static_cast<std::size_t>(cfg.bands), bins)
          : 1;
  std::vector<std::size_t> edges(n_bands + 1);
  for (std::size_t b = 0; b <= n_bands; ++b) edges[b] = b * bins / n_bands;

  SpectralFrames out = frames;
  for (std::size_t f = 0; f < frames.frames(); ++f) {
    const auto &y = frames.magnitudes[f];
    auto &x = out.magnitudes[f];
    for (std::size_t b = 0; b < n_bands; ++b) {
      const std::size_t lo = edges[b], hi = edges[b + 1];
      double alpha = 1.0;
      if (cfg.variant != EnhanceVariant::kBoll) {
        alpha = cfg.alpha ? *cfg.alpha
                          : BeroutiAlpha(SegmentalSnrDb(
                                std::span(y).subspan(lo, hi - lo),
                                std::span(d).subspan(lo, hi - lo)));
      }
      if (cfg.variant == EnhanceVariant::kKamath) {
        const double upper_hz = static_cast<double>(hi - 1) * frames.sample_rate /
                                frames.params.fft_size;
        alpha *= KamathTweak(upper_hz, frames.sample_rate);
      }
      for (std::size_t k = lo; k < hi; ++k) {
        if (d[k] <= 0.0) {
          x[k] = y[k];
          continue;
        }
        if (cfg.variant == EnhanceVariant::kSim) {
          const double p = cfg.exponent;
          const double dp = std::pow(d[k], p / 2.0);
          double v = std::max(std::pow(y[k], p) - alpha * dp, cfg.beta * dp);
          x[k] = std::pow(v, 1.0 / p);
        } else {
          double v = std::max(y[k] * y[k] - alpha * d[k], cfg.beta * d[k]);
          x[k] = std::sqrt(v);
        }
      }
    }
  }
  return out;
}

double ExpIntE1(double x) {
  if (!(x > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "E1 needs x > 0");
  if (x < 1.0) {
    // -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
    double sum = 0.0, term = 1.0;
    for (int k = 1; k < 100; ++k) {
      term *= -x / k;
      double add = term / k;
      sum += add;
      if (std::abs(add) < 1e-17 * std::abs(sum)) break;
    }
    return -kEulerGamma - std::log(x) - sum;
  }
  // Modified Lentz evaluation of the continued fraction.
  constexpr double kTiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x);
}

double WienerGain(double xi) { return xi / (1.0 + xi); }

double MmseStsaGain(double xi, double gamma) {
  gamma = std::max(gamma, 1e-10);
  const double v = std::max(xi * gamma / (1.0 + xi), 1e-12);
  const double z = v / 2.0;
  return (std::sqrt(std::numbers::pi) / 2.0) * (std::sqrt(v) / gamma) *
         ((1.0 + v) * ScaledBesselI(0, z) + v * ScaledBesselI(1, z));
}

double LogMmseGain(double xi, double gamma) {
  const double v = std::max(xi * gamma / (1.0 + xi), 1e-12);
  return WienerGain(xi) * std::exp(0.5 * ExpIntE1(v));
}

double SpeechPresenceProbability(double xi, double gamma, double prior_absence) {
  const double v = xi * gamma / (1.0 + xi);
  const double ratio = prior_absence / (1.0 - prior_absence);
  return 1.0 / (1.0 + ratio * (1.0 + xi) * std::exp(-v));
}

SpectralFrames StatisticalEnhance(const SpectralFrames &frames,
                                  const NoisePsd &noise,
                                  const EnhanceConfig &cfg) {
  if (!IsStatistical(cfg.variant))
    throw Error(ErrorCode::kWrongVariant,
                std::string(VariantName(cfg.variant)) +
                    " is not a statistical-model variant");
  cfg.Validate();
  RequireNoiseBins(frames, noise);
  const double g_min = cfg.GainFloor();
  const double xi_min = g_min * g_min;
  const std::size_t bins = noise.power.size();

  // Per-bin recursion state; frames must be visited in order.
  std::vector<double> prev_clean(bins, 1.0);  // G^2 gamma of the last frame
  std::vector<double> xi_smooth(bins, 0.0);

  SpectralFrames out = frames;
  for (std::size_t f = 0; f < frames.frames(); ++f) {
    for (std::size_t k = 0; k < bins; ++k) {
      const double y = frames.magnitudes[f][k];
      const double d = noise.power[k];
      if (d <= 0.0) {
        out.magnitudes[f][k] = y;
        prev_clean[k] = 1.0;
        continue;
      }
      const double gamma = y * y / d;
      double xi = cfg.dd_alpha * prev_clean[k] +
                  (1.0 - cfg.dd_alpha) * std::max(gamma - 1.0, 0.0);
      xi = std::max(xi, xi_min);

      double g = 1.0;
      switch (cfg.variant) {
        case EnhanceVariant::kWienerDD: g = WienerGain(xi); break;
        case EnhanceVariant::kMmseStsa: g = MmseStsaGain(xi, gamma); break;
        case EnhanceVariant::kLogMmse: g = LogMmseGain(xi, gamma); break;
        case EnhanceVariant::kOmlsa: {
          xi_smooth[k] = f == 0 ? xi
                                : cfg.presence_smoothing * xi_smooth[k] +
                                      (1.0 - cfg.presence_smoothing) * xi;
          const double p =
              SpeechPresenceProbability(xi_smooth[k], gamma, cfg.prior_absence);
          const double lsa = std::clamp(LogMmseGain(xi, gamma), g_min, 1.0);
          g = std::pow(lsa, p) * std::pow(g_min, 1.0 - p);
          break;
        }
        default: break;
      }
      if (!std::isfinite(g)) g = 1.0;
      g = std::clamp(g, g_min, 1.0);
      out.magnitudes[f][k] = g * y;
      prev_clean[k] = g * g * gamma;
    }
  }
  return out;
}

ArModel LevinsonDurbin(std::span<const double> r, int order) {
  if (order < 1 || r.size() < static_cast<std::size_t>(order) + 1)
    throw Error(ErrorCode::kInvalidArgument, "autocorrelation too short");
  // a holds the prediction-error filter 1 + sum a_j z^-j.
  std::vector<double> a(static_cast<std::size_t>(order) + 1, 0.0), prev;
  a[0] = 1.0;
  double err = r[0];
  for (int i = 1; i <= order && err > 0.0; ++i) {
    double acc = r[i];
    for (int j = 1; j < i; ++j) acc += a[j] * r[i - j];
    const double k = -acc / err;
    prev = a;
    for (int j = 1; j < i; ++j) a[j] = prev[j] + k * prev[i - j];
    a[i] = k;
    err *= (1.0 - k * k);
  }
  ArModel m;
  m.coeffs.resize(static_cast<std::size_t>(order));
  for (int j = 1; j <= order; ++j) m.coeffs[j - 1] = -a[j];
  m.error_power = std::max(err, 0.0);
  return m;
}

namespace {

std::vector<double> Autocorrelation(std::span<const double> x, int max_lag) {
  std::vector<double> r(static_cast<std::size_t>(max_lag) + 1, 0.0);
  for (int lag = 0; lag <= max_lag; ++lag)
    for (std::size_t n = static_cast<std::size_t>(lag); n < x.size(); ++n)
      r[lag] += x[n] * x[n - lag];
  for (auto &v : r) v /= static_cast<double>(x.size());
  return r;
}

// One Kalman pass over a block of observations using an AR model fitted to
// `estimate`. Returns the filtered signal.
std::vector<double> KalmanBlockPass(std::span<const double> obs,
                                    std::span<const double> estimate,
                                    double noise_variance, int order,
                                    bool estimate_is_noisy) {
  auto r = Autocorrelation(estimate, order);
  if (estimate_is_noisy) r[0] = std::max(r[0] - noise_variance, 0.1 * r[0]);
  if (!(r[0] > 1e-20))  // all-zero block: nothing to model
    return {obs.begin(), obs.end()};
  ArModel ar = LevinsonDurbin(r, order);
  const double q = std::max(ar.error_power, 1e-9 * r[0]);

  const int p = order;
  Eigen::MatrixXd transition = Eigen::MatrixXd::Zero(p, p);
  for (int j = 0; j < p; ++j) transition(0, j) = ar.coeffs[j];
  for (int i = 1; i < p; ++i) transition(i, i - 1) = 1.0;
  Eigen::VectorXd state = Eigen::VectorXd::Zero(p);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(p, p) * r[0];

  std::vector<double> out(obs.size());
  for (std::size_t n = 0; n < obs.size(); ++n) {
    state = transition * state;
    cov = transition * cov * transition.transpose();
    cov(0, 0) += q;
    const double innovation_var = cov(0, 0) + noise_variance;
    if (innovation_var > 0.0) {
      Eigen::VectorXd gain = cov.col(0) / innovation_var;
      state += gain * (obs[n] - state(0));
      cov -= gain * cov.row(0);
    } else {
      state(0) = obs[n];
    }
    out[n] = state(0);
  }
  return out;
}

}  // namespace

ArModel FitAr(std::span<const double> x, int order) {
  auto r = Autocorrelation(x, order);
  if (!(r[0] > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "singular autocorrelation");
  return LevinsonDurbin(r, order);
}

Waveform KalmanEnhance(const Waveform &wave, double noise_variance,
                       const EnhanceConfig &cfg) {
  if (cfg.ar_order < 1 || cfg.iterations < 1)
    throw Error(ErrorCode::kBadParams, "ar_order and iterations must be >= 1");
  if (!(noise_variance >= 0.0))
    throw Error(ErrorCode::kInvalidArgument, "noise variance must be >= 0");
  if (wave.size() < static_cast<std::size_t>(kKalmanBlock))
    throw Error(ErrorCode::kBlockTooShort,
                "Kalman enhancement needs at least " +
                    std::to_string(kKalmanBlock) + " samples");
  constexpr std::size_t kHalf = kKalmanBlock / 2;
  // Pad so every real sample lies under two blocks whose triangular
  // windows sum to one.
  const std::size_t padded_len =
      (wave.size() + kHalf + kHalf - 1) / kHalf * kHalf + kHalf;
  std::vector<double> observed(padded_len, 0.0);
  std::copy(wave.samples.begin(), wave.samples.end(), observed.begin() + kHalf);
  std::vector<double> window(kKalmanBlock);
  for (std::size_t i = 0; i < window.size(); ++i)
    window[i] = i <= kHalf ? static_cast<double>(i) / kHalf
                           : static_cast<double>(kKalmanBlock - i) / kHalf;

  std::vector<double> estimate = observed;
  for (int it = 0; it < cfg.iterations; ++it) {
    std::vector<double> next(padded_len, 0.0);
    for (std::size_t start = 0; start + kKalmanBlock <= padded_len;
         start += kHalf) {
      auto filtered = KalmanBlockPass(
          std::span(observed).subspan(start, kKalmanBlock),
          std::span(estimate).subspan(start, kKalmanBlock), noise_variance,
          cfg.ar_order, it == 0);
      for (std::size_t i = 0; i < kKalmanBlock; ++i)
        next[start + i] += window[i] * filtered[i];
    }
    estimate = std::move(next);
  }
  return Waveform(std::vector<double>(estimate.begin() + kHalf,
                                      estimate.begin() + kHalf +
                                          static_cast<std::ptrdiff_t>(wave.size())),
                  wave.sample_rate);
}

namespace {
Waveform PadToFrames(const Waveform &wave, const StftParams &stft) {
  const auto frame = static_cast<std::size_t>(stft.frame_len);
  const auto hop = static_cast<std::size_t>(stft.hop);
  std::size_t padded = frame;
  if (wave.size() > frame) padded += (wave.size() - frame + hop - 1) / hop * hop;
  Waveform work = wave;
  work.samples.resize(padded, 0.0);
  return work;
}
}  // namespace

NoisePsd NoisePsdOf(const Waveform &noise, const StftParams &params) {
  auto spectrum = Stft(noise, params);
  return EstimateNoise(spectrum, LeadingFrames{spectrum.frames()});
}

double NoiseVarianceFromPsd(const NoisePsd &psd, const StftParams &params) {
  double window_energy = 0.0;
  for (double w : AnalysisWindow(params.window, params.frame_len))
    window_energy += w * w;
  double mean_psd = 0.0;
  for (double v : psd.power) mean_psd += v;
  mean_psd /= static_cast<double>(psd.power.size());
  return mean_psd / window_energy;
}

Waveform EnhanceWaveform(const Waveform &wave, const EnhanceConfig &cfg,
                         const StftParams &stft, const NoiseMethod &method) {
  stft.Validate();
  Waveform work = PadToFrames(wave, stft);

  auto spectrum = Stft(work, stft);
  NoiseMethod resolved = method;
  if (auto *vad = std::get_if<VadGuided>(&resolved);
      vad && vad->noise_frames.size() < spectrum.frames())
    vad->noise_frames.resize(spectrum.frames(), false);
  NoisePsd noise = EstimateNoise(spectrum, resolved);

  Waveform out;
  if (cfg.variant == EnhanceVariant::kKalman)
    return KalmanEnhance(wave, NoiseVarianceFromPsd(noise, stft), cfg);
  if (IsSubtractive(cfg.variant))
    out = Istft(SpectralSubtract(spectrum, noise, cfg));
  else
    out = Istft(StatisticalEnhance(spectrum, noise, cfg));
  out.samples.resize(wave.size());
  return out;
}

}  // namespace clearspeech
