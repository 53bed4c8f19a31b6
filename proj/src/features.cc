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

#include "clearspeech/features.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "clearspeech/error.h"
#include "clearspeech/fft.h"
#include "clearspeech/filterbank.h"

namespace clearspeech {

void FrameParams::Validate() const {
  if (window_len < 16)
    throw Error(ErrorCode::kBadParams, "window_len must be >= 16");
  if (!(overlap_pct > 0.0 && overlap_pct < 100.0))
    throw Error(ErrorCode::kBadParams, "overlap_pct must lie in (0, 100)");
  if (fft_size < 2) throw Error(ErrorCode::kBadParams, "fft_size too small");
  if (Hop() < 1) throw Error(ErrorCode::kBadParams, "hop rounds to zero");
}

int FrameParams::Hop() const {
  return static_cast<int>(std::lround(window_len * (1.0 - overlap_pct / 100.0)));
}

int FrameParams::EffectiveFftSize() const {
  return NextPowerOfTwo(std::max(fft_size, window_len));
}

std::vector<double> HammingWindow(int n) {
  if (n < 2) throw Error(ErrorCode::kTooShort, "Hamming window needs n >= 2");
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    w[k] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * k / (n - 1));
  return w;
}

std::size_t FrameCount(std::size_t length, const FrameParams &params) {
  params.Validate();
  auto win = static_cast<std::size_t>(params.window_len);
  if (length < win)
    throw Error(ErrorCode::kTooShort,
                "signal of " + std::to_string(length) +
                    " samples is shorter than one window");
  auto hop = static_cast<std::size_t>(params.Hop());
  return (length - win + hop - 1) / hop + 1;
}

std::vector<std::vector<double>> FrameSignal(const Waveform &wave,
                                             const FrameParams &params) {
  const std::size_t count = FrameCount(wave.size(), params);
  const auto win = static_cast<std::size_t>(params.window_len);
  const auto hop = static_cast<std::size_t>(params.Hop());
  std::vector<std::vector<double>> frames(count, std::vector<double>(win, 0.0));
  for (std::size_t f = 0; f < count; ++f) {
    std::size_t start = f * hop;
    std::size_t avail = std::min(win, wave.size() - start);
    std::copy_n(wave.samples.begin() + static_cast<std::ptrdiff_t>(start),
                avail, frames[f].begin());
  }
  return frames;
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double MelToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

MelFilterbank MakeMelFilterbank(int n_filters, int fft_size, int sample_rate) {
  if (n_filters < kNumCepstra)
    throw Error(ErrorCode::kTooFewFilters,
                std::to_string(n_filters) + " filters cannot yield " +
                    std::to_string(kNumCepstra) + " cepstra");
  if (!IsPowerOfTwo(fft_size))
    throw Error(ErrorCode::kBadParams, "fft_size must be a power of two");
  const int bins = fft_size / 2 + 1;
  const double top = HzToMel(sample_rate / 2.0);
  std::vector<double> edges(static_cast<std::size_t>(n_filters) + 2);
  for (std::size_t i = 0; i < edges.size(); ++i)
    edges[i] = MelToHz(top * static_cast<double>(i) / (n_filters + 1));

  MelFilterbank fb;
  fb.weights.assign(static_cast<std::size_t>(n_filters),
                    std::vector<double>(static_cast<std::size_t>(bins), 0.0));
  for (int m = 0; m < n_filters; ++m) {
    const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
    fb.centers_hz.push_back(mid);
    for (int k = 0; k < bins; ++k) {
      double f = static_cast<double>(k) * sample_rate / fft_size;
      double w = 0.0;
      if (f > lo && f <= mid)
        w = (f - lo) / (mid - lo);
      else if (f > mid && f < hi)
        w = (hi - f) / (hi - mid);
      fb.weights[m][k] = w;
    }
  }
  return fb;
}

std::vector<std::vector<double>> LogMelFrames(const Waveform &wave,
                                              const FrameParams &params) {
  auto frames = FrameSignal(wave, params);
  const int nfft = params.EffectiveFftSize();
  const auto window = HammingWindow(params.window_len);
  const auto fb = MakeMelFilterbank(kNumMelFilters, nfft, wave.sample_rate);
  RealFft fft(nfft);
  std::vector<double> buf(static_cast<std::size_t>(nfft));
  std::vector<std::complex<double>> spec(static_cast<std::size_t>(fft.bins()));
  std::vector<double> power(spec.size());

  std::vector<std::vector<double>> out;
  out.reserve(frames.size());
  for (const auto &frame : frames) {
    std::fill(buf.begin(), buf.end(), 0.0);
    for (std::size_t i = 0; i < frame.size(); ++i) buf[i] = frame[i] * window[i];
    fft.Forward(buf, spec);
    for (std::size_t k = 0; k < spec.size(); ++k) power[k] = std::norm(spec[k]);
    std::vector<double> log_mel(kNumMelFilters);
    for (int m = 0; m < kNumMelFilters; ++m) {
      double e = 0.0;
      for (std::size_t k = 0; k < power.size(); ++k) e += fb.weights[m][k] * power[k];
      log_mel[m] = std::log(std::max(e, kLogFloor));
    }
    out.push_back(std::move(log_mel));
  }
  return out;
}

CepstralVector CepstraFromLogMel(const std::vector<double> &log_mel) {
  const auto n = static_cast<double>(log_mel.size());
  CepstralVector c{};
  for (int k = 1; k <= kNumCepstra; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < log_mel.size(); ++i)
      acc += log_mel[i] *
             std::cos(std::numbers::pi * k * (2.0 * static_cast<double>(i) + 1.0) /
                      (2.0 * n));
    c[k - 1] = std::sqrt(2.0 / n) * acc;
  }
  return c;
}

std::vector<CepstralVector> MfccFrames(const Waveform &wave,
                                       const FrameParams &params,
                                       const FeatureOptions &options) {
  auto log_mel = LogMelFrames(wave, params);
  if (options.rasta && log_mel.size() >= kRastaMinFrames) {
    // Filter each band's trajectory across frames.
    std::vector<std::vector<double>> bands(
        kNumMelFilters, std::vector<double>(log_mel.size()));
    for (std::size_t t = 0; t < log_mel.size(); ++t)
      for (int m = 0; m < kNumMelFilters; ++m) bands[m][t] = log_mel[t][m];
    bands = RastaFilter(bands);
    for (std::size_t t = 0; t < log_mel.size(); ++t)
      for (int m = 0; m < kNumMelFilters; ++m) log_mel[t][m] = bands[m][t];
  }
  std::vector<CepstralVector> out;
  out.reserve(log_mel.size());
  for (const auto &frame : log_mel) out.push_back(CepstraFromLogMel(frame));
  return out;
}

FeatureMatrix ToFeatureMatrix(const std::vector<CepstralVector> &frames) {
  if (frames.empty())
    throw Error(ErrorCode::kEmptyInput, "no frames to pool");
  const std::size_t n = frames.size();
  const std::size_t cols = FeatureMatrix::kCols;
  FeatureMatrix m;
  for (std::size_t j = 0; j < cols; ++j) {
    if (n < cols) {
      // Frame under the column centre.
      std::size_t idx = (2 * j + 1) * n / (2 * cols);
      for (int r = 0; r < kNumCepstra; ++r)
        m(r, static_cast<int>(j)) = frames[idx][r];
      continue;
    }
    // Boundaries round(j*n/cols), halves rounded up.
    std::size_t lo = (2 * j * n + cols) / (2 * cols);
    std::size_t hi = (2 * (j + 1) * n + cols) / (2 * cols);
    for (int r = 0; r < kNumCepstra; ++r) {
      double acc = 0.0;
      for (std::size_t t = lo; t < hi; ++t) acc += frames[t][r];
      m(r, static_cast<int>(j)) = acc / static_cast<double>(hi - lo);
    }
  }
  return m;
}

FeatureMatrix ExtractFeatures(const Waveform &wave, const FrameParams &params,
                              const FeatureOptions &options) {
  FeatureMatrix m = ToFeatureMatrix(MfccFrames(wave, params, options));
  if (options.cmn) m = Cmn(m);
  m.params = params;
  return m;
}

}  // namespace clearspeech
