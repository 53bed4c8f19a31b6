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

#include "clearspeech/filterbank.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "clearspeech/error.h"

namespace clearspeech {

namespace {

std::vector<double> LowPassPrototype(double cutoff_hz, int taps, int rate,
                                     const std::vector<double> &window) {
  const double fc = cutoff_hz / rate;  // cycles per sample
  const int mid = taps / 2;
  std::vector<double> h(static_cast<std::size_t>(taps));
  double sum = 0.0;
  for (int n = 0; n < taps; ++n) {
    const int k = n - mid;
    double ideal = k == 0 ? 2.0 * fc
                          : std::sin(2.0 * std::numbers::pi * fc * k) /
                                (std::numbers::pi * k);
    h[n] = ideal * window[n];
    sum += h[n];
  }
  for (auto &v : h) v /= sum;
  return h;
}

enum class Rule { kLms, kNlms };

AdaptiveResult RunAdaptive(const Waveform &primary, const Waveform &reference,
                           const AdaptiveParams &params, Rule rule) {
  params.Validate();
  if (primary.size() != reference.size())
    throw Error(ErrorCode::kLengthMismatch,
                "primary and reference lengths differ");
  const auto order = static_cast<std::size_t>(params.order);
  const auto &ref = reference.samples;
  AdaptiveResult result;
  result.enhanced = Waveform(std::vector<double>(primary.size()),
                             primary.sample_rate);
  std::vector<double> w(order, 0.0);
  std::vector<double> x(order, 0.0);  // x[k] = ref[n-k]
  for (std::size_t n = 0; n < primary.size(); ++n) {
    std::copy_backward(x.begin(), x.end() - 1, x.end());
    x[0] = ref[n];
    double y = 0.0, energy = 0.0;
    for (std::size_t k = 0; k < order; ++k) {
      y += w[k] * x[k];
      energy += x[k] * x[k];
    }
    const double e = primary.samples[n] - y;
    result.enhanced.samples[n] = e;
    const double step = rule == Rule::kLms
                            ? params.mu * e
                            : params.mu * e / (params.epsilon + energy);
    for (std::size_t k = 0; k < order; ++k) w[k] += step * x[k];
    if (params.history_stride != 0 && (n + 1) % params.history_stride == 0)
      result.weight_history.push_back(w);
  }
  result.final_weights = std::move(w);
  return result;
}

}  // namespace

std::vector<double> DesignFir(const FirSpec &spec) {
  if (spec.num_taps < 1 || spec.num_taps % 2 == 0)
    throw Error(ErrorCode::kEvenTaps,
                "num_taps must be odd and positive, got " +
                    std::to_string(spec.num_taps));
  if (spec.sample_rate <= 0)
    throw Error(ErrorCode::kInvalidCutoff, "sample rate must be positive");
  const double nyquist = spec.sample_rate / 2.0;
  const std::size_t want =
      spec.kind == FirKind::kLowPass || spec.kind == FirKind::kHighPass ? 1 : 2;
  if (spec.edge_hz.size() != want)
    throw Error(ErrorCode::kInvalidCutoff,
                "expected " + std::to_string(want) + " cutoff(s)");
  for (double f : spec.edge_hz)
    if (!(f > 0.0 && f < nyquist))
      throw Error(ErrorCode::kInvalidCutoff,
                  "cutoff " + std::to_string(f) + " Hz outside (0, Nyquist)");
  if (want == 2 && !(spec.edge_hz[0] < spec.edge_hz[1]))
    throw Error(ErrorCode::kInvalidCutoff, "band edges must ascend");

  const auto window = HammingWindow(std::max(spec.num_taps, 2));
  const int mid = spec.num_taps / 2;
  if (spec.num_taps == 1) return {1.0};
  auto lp = [&](double f) {
    return LowPassPrototype(f, spec.num_taps, spec.sample_rate, window);
  };
  std::vector<double> h;
  switch (spec.kind) {
    case FirKind::kLowPass:
      h = lp(spec.edge_hz[0]);
      break;
    case FirKind::kHighPass:
      h = lp(spec.edge_hz[0]);
      for (auto &v : h) v = -v;
      h[mid] += 1.0;
      break;
    case FirKind::kBandPass: {
      h = lp(spec.edge_hz[1]);
      auto lower = lp(spec.edge_hz[0]);
      for (std::size_t i = 0; i < h.size(); ++i) h[i] -= lower[i];
      break;
    }
    case FirKind::kBandStop: {
      h = lp(spec.edge_hz[0]);
      auto upper = lp(spec.edge_hz[1]);
      for (std::size_t i = 0; i < h.size(); ++i) h[i] -= upper[i];
      h[mid] += 1.0;
      break;
    }
  }
  return h;
}

Waveform ApplyFir(const Waveform &wave, std::span<const double> taps) {
  if (taps.empty()) throw Error(ErrorCode::kEmptyTaps, "no filter taps");
  Waveform out(std::vector<double>(wave.size(), 0.0), wave.sample_rate);
  for (std::size_t n = 0; n < wave.size(); ++n) {
    double acc = 0.0;
    const std::size_t kmax = std::min(taps.size(), n + 1);
    for (std::size_t k = 0; k < kmax; ++k) acc += taps[k] * wave.samples[n - k];
    out.samples[n] = acc;
  }
  return out;
}

double FirMagnitude(std::span<const double> taps, double freq_hz,
                    int sample_rate) {
  std::complex<double> acc = 0.0;
  const double omega = 2.0 * std::numbers::pi * freq_hz / sample_rate;
  for (std::size_t n = 0; n < taps.size(); ++n)
    acc += taps[n] * std::polar(1.0, -omega * static_cast<double>(n));
  return std::abs(acc);
}

void AdaptiveParams::Validate() const {
  if (order < 1) throw Error(ErrorCode::kInvalidArgument, "order must be >= 1");
  if (!(mu >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "mu must be >= 0");
  if (!(epsilon > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be > 0");
}

AdaptiveResult LmsCancel(const Waveform &primary, const Waveform &reference,
                         const AdaptiveParams &params) {
  return RunAdaptive(primary, reference, params, Rule::kLms);
}

AdaptiveResult NlmsCancel(const Waveform &primary, const Waveform &reference,
                          const AdaptiveParams &params) {
  return RunAdaptive(primary, reference, params, Rule::kNlms);
}

double ErleDb(const Waveform &mic, const Waveform &residual) {
  if (mic.size() != residual.size())
    throw Error(ErrorCode::kLengthMismatch, "mic and residual lengths differ");
  double r = SignalPower(residual.samples);
  if (r == 0.0) throw Error(ErrorCode::kZeroResidual, "residual is all zero");
  return 10.0 * std::log10(SignalPower(mic.samples) / r);
}

std::vector<std::vector<double>> CmnRows(std::vector<std::vector<double>> rows) {
  if (rows.empty() || rows.front().empty())
    throw Error(ErrorCode::kEmptyFeatures, "no frames to normalize");
  for (auto &row : rows) {
    double mean = 0.0;
    for (double v : row) mean += v;
    mean /= static_cast<double>(row.size());
    for (double &v : row) v -= mean;
  }
  return rows;
}

FeatureMatrix Cmn(const FeatureMatrix &features) {
  std::vector<std::vector<double>> rows(FeatureMatrix::kRows,
                                        std::vector<double>(FeatureMatrix::kCols));
  for (int r = 0; r < FeatureMatrix::kRows; ++r)
    for (int c = 0; c < FeatureMatrix::kCols; ++c) rows[r][c] = features(r, c);
  rows = CmnRows(std::move(rows));
  FeatureMatrix out;
  out.params = features.params;
  for (int r = 0; r < FeatureMatrix::kRows; ++r)
    for (int c = 0; c < FeatureMatrix::kCols; ++c) out(r, c) = rows[r][c];
  return out;
}

std::vector<std::vector<double>> RastaFilter(
    const std::vector<std::vector<double>> &trajectories, RastaInit init) {
  static constexpr double kNum[5] = {0.2, 0.1, 0.0, -0.1, -0.2};
  std::vector<std::vector<double>> out;
  out.reserve(trajectories.size());
  for (const auto &x : trajectories) {
    if (x.size() < kRastaMinFrames)
      throw Error(ErrorCode::kTooFewFrames,
                  "RASTA needs at least 5 frames, got " +
                      std::to_string(x.size()));
    std::vector<double> y(x.size(), 0.0);
    const std::size_t start = init == RastaInit::kPrimed ? 4 : 0;
    double prev = 0.0;
    for (std::size_t n = start; n < x.size(); ++n) {
      double acc = 0.0;
      for (std::size_t k = 0; k < 5 && k <= n; ++k) acc += kNum[k] * x[n - k];
      prev = kRastaPole * prev + acc;
      y[n] = prev;
    }
    out.push_back(std::move(y));
  }
  return out;
}

}  // namespace clearspeech
