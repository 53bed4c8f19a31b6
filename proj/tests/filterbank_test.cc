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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "clearspeech/filterbank.h"
#include "expect_error.h"
#include "test_util.h"

namespace clearspeech {
namespace {

using testing::CodeOf;
using testing::Db;
using testing::DtftMagnitude;
using testing::MakeChannelTask;
using testing::Misalignment;

double GainDb(const std::vector<double> &h, double f) { return Db(DtftMagnitude(h, f, 8000)); }

std::vector<double> Gaussian(std::size_t n, double sigma, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> g(0.0, sigma);
  std::vector<double> x(n);
  for (auto &v : x) v = g(gen);
  return x;
}

// The RASTA recursion written out sample by sample; `first` is the first
// index at which output is produced, earlier outputs being zero and the
// feedback starting from y[first - 1] = 0.
std::vector<double> RastaOracle(const std::vector<double> &x, std::size_t first) {
  std::vector<double> y(x.size(), 0.0);
  auto at = [&](std::ptrdiff_t i) { return i < 0 ? 0.0 : x[static_cast<std::size_t>(i)]; };
  for (std::size_t n = first; n < x.size(); ++n) {
    const auto i = static_cast<std::ptrdiff_t>(n);
    const double prev = n > first ? y[n - 1] : 0.0;
    y[n] = 0.98 * prev + 0.1 * (2.0 * at(i) + at(i - 1) - at(i - 3) - 2.0 * at(i - 4));
  }
  return y;
}

TEST(DesignFirTest, LowPassPaperBand) {
  const auto h = DesignFir({FirKind::kLowPass, {3500.0}, 101, 8000});
  ASSERT_EQ(h.size(), 101u);
  for (std::size_t k = 0; k < h.size(); ++k) EXPECT_NEAR(h[k], h[h.size() - 1 - k], 1e-15);
  EXPECT_GE(GainDb(h, 1000.0), -1.0);
  EXPECT_LE(GainDb(h, 3900.0), -20.0);
  EXPECT_NEAR(FirMagnitude(h, 1000.0, 8000), DtftMagnitude(h, 1000.0, 8000), 1e-12);
}

TEST(DesignFirTest, PassAndStopCentres) {
  // Low-pass at 1 kHz: pass centre 500 Hz, stop centre 2500 Hz.
  const auto lp = DesignFir({FirKind::kLowPass, {1000.0}, 101, 8000});
  EXPECT_GE(GainDb(lp, 500.0), -1.0);
  EXPECT_LE(GainDb(lp, 2500.0), -40.0);
  const auto hp = DesignFir({FirKind::kHighPass, {1000.0}, 101, 8000});
  EXPECT_GE(GainDb(hp, 2500.0), -1.0);
  EXPECT_LE(GainDb(hp, 500.0), -40.0);
  const auto bp = DesignFir({FirKind::kBandPass, {1000.0, 2000.0}, 101, 8000});
  EXPECT_GE(GainDb(bp, 1500.0), -1.0);
  EXPECT_LE(GainDb(bp, 200.0), -40.0);
  EXPECT_LE(GainDb(bp, 3200.0), -40.0);
  const auto bs = DesignFir({FirKind::kBandStop, {1000.0, 2000.0}, 101, 8000});
  EXPECT_LE(GainDb(bs, 1500.0), -40.0);
  EXPECT_GE(GainDb(bs, 200.0), -1.0);
  EXPECT_GE(GainDb(bs, 3200.0), -1.0);
}

TEST(DesignFirTest, HumBands) {
  const auto hp = DesignFir({FirKind::kHighPass, {21.0}, 101, 8000});
  double sum = 0.0;
  for (double v : hp) sum += v;
  EXPECT_LE(std::abs(sum), 1e-3);
  // A 5 Hz stop band at 8 kHz needs a window a few seconds long.
  const auto bs = DesignFir({FirKind::kBandStop, {45.0, 50.0}, 16001, 8000});
  EXPECT_LE(GainDb(bs, 47.5), -20.0);
  EXPECT_GE(GainDb(bs, 1000.0), -1.0);
}

TEST(DesignFirTest, Errors) {
  EXPECT_EQ(CodeOf([] { DesignFir({FirKind::kLowPass, {3500.0}, 100, 8000}); }), ErrorCode::kEvenTaps);
  EXPECT_EQ(CodeOf([] { DesignFir({FirKind::kLowPass, {4000.0}, 101, 8000}); }),
            ErrorCode::kInvalidCutoff);
  EXPECT_EQ(CodeOf([] { DesignFir({FirKind::kHighPass, {0.0}, 101, 8000}); }),
            ErrorCode::kInvalidCutoff);
  EXPECT_EQ(CodeOf([] { DesignFir({FirKind::kBandPass, {2000.0, 1000.0}, 101, 8000}); }),
            ErrorCode::kInvalidCutoff);
  EXPECT_EQ(CodeOf([] { DesignFir({FirKind::kBandStop, {1000.0}, 101, 8000}); }),
            ErrorCode::kInvalidCutoff);
}

TEST(ApplyFirTest, ImpulseZeroAndDc) {
  const std::vector<double> taps = {0.3, -0.2, 0.7, 0.1};
  std::vector<double> impulse(10, 0.0);
  impulse[0] = 1.0;
  const auto y = ApplyFir(Waveform(impulse, 8000), taps);
  ASSERT_EQ(y.size(), 10u);
  for (std::size_t k = 0; k < 10; ++k) EXPECT_EQ(y.samples[k], k < 4 ? taps[k] : 0.0);
  for (double v : ApplyFir(Waveform(std::vector<double>(50, 0.0), 8000), taps).samples)
    EXPECT_EQ(v, 0.0);
  const auto hp = DesignFir({FirKind::kHighPass, {21.0}, 101, 8000});
  const auto dc = ApplyFir(Waveform(std::vector<double>(400, 1.0), 8000), hp);
  for (std::size_t n = 100; n < dc.size(); ++n) EXPECT_LE(std::abs(dc.samples[n]), 1e-3);
  EXPECT_EQ(CodeOf([&] { ApplyFir(Waveform(impulse, 8000), std::vector<double>{}); }),
            ErrorCode::kEmptyTaps);
}

TEST(ApplyFirTest, MatchesDirectConvolutionAndIsLinear) {
  const auto h = DesignFir({FirKind::kBandPass, {300.0, 3400.0}, 101, 8000});
  const auto x = Gaussian(2000, 1.0, 1), z = Gaussian(2000, 1.0, 2);
  const auto fx = ApplyFir(Waveform(x, 8000), h).samples;
  const auto oracle = testing::Convolve(x, h);
  for (std::size_t n = 0; n < x.size(); ++n) EXPECT_NEAR(fx[n], oracle[n], 1e-12);
  const double a = 2.5, b = -0.75;
  std::vector<double> mix(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) mix[n] = a * x[n] + b * z[n];
  const auto fm = ApplyFir(Waveform(mix, 8000), h).samples;
  const auto fz = ApplyFir(Waveform(z, 8000), h).samples;
  for (std::size_t n = 0; n < x.size(); ++n) {
    const double want = a * fx[n] + b * fz[n];
    EXPECT_NEAR(fm[n], want, 1e-10 * std::max(1.0, std::abs(want)));
  }
}

TEST(AdaptiveTest, ZeroStepIsIdentity) {
  const auto task = MakeChannelTask(2000, 4);
  AdaptiveParams p;
  p.order = 8;
  p.mu = 0.0;
  for (auto *fn : {&LmsCancel, &NlmsCancel}) {
    const auto r = fn(task.primary, task.reference, p);
    for (std::size_t n = 0; n < task.primary.size(); ++n)
      EXPECT_EQ(r.enhanced.samples[n], task.primary.samples[n]);
    for (double w : r.final_weights) EXPECT_EQ(w, 0.0);
  }
}

TEST(AdaptiveTest, ZeroReferencePassesThrough) {
  const auto task = MakeChannelTask(1000, 5);
  const Waveform silent(std::vector<double>(1000, 0.0), 8000);
  AdaptiveParams p;
  p.order = 4;
  p.mu = 0.5;
  for (auto *fn : {&LmsCancel, &NlmsCancel}) {
    const auto r = fn(task.primary, silent, p);
    EXPECT_EQ(r.enhanced.samples, task.primary.samples);
    for (double w : r.final_weights) EXPECT_EQ(w, 0.0);
  }
}

TEST(AdaptiveTest, LengthMismatch) {
  const Waveform a(std::vector<double>(100, 0.1), 8000), b(std::vector<double>(99, 0.1), 8000);
  EXPECT_EQ(CodeOf([&] { LmsCancel(a, b, AdaptiveParams{}); }), ErrorCode::kLengthMismatch);
  EXPECT_EQ(CodeOf([&] { NlmsCancel(a, b, AdaptiveParams{}); }), ErrorCode::kLengthMismatch);
}

TEST(AdaptiveTest, LmsIdentifiesKnownChannel) {
  const auto task = MakeChannelTask(10000, 6);
  AdaptiveParams p;
  p.order = 4;
  p.mu = 0.01;
  const auto r = LmsCancel(task.primary, task.reference, p);
  for (std::size_t k = 0; k < 4; ++k)
    EXPECT_NEAR(r.final_weights[k], task.taps[k], 0.05 * std::abs(task.taps[k]));
}

TEST(AdaptiveTest, NlmsIdentifiesKnownChannel) {
  const auto task = MakeChannelTask(10000, 7);
  AdaptiveParams p;
  p.order = 4;
  p.mu = 0.5;
  const auto r = NlmsCancel(task.primary, task.reference, p);
  EXPECT_LE(Misalignment(r.final_weights, task.taps), 0.05);
  EXPECT_GE(ErleDb(task.primary, r.enhanced), 10.0);
  EXPECT_EQ(r.weight_history.size(), 10000u);
}

TEST(AdaptiveTest, NlmsConvergesForAnyStableStep) {
  for (double mu : {0.05, 0.3, 1.0, 1.5, 1.9}) {
    const auto task = MakeChannelTask(10000, 8, 0.0);
    AdaptiveParams p;
    p.order = 6;
    p.mu = mu;
    const auto r = NlmsCancel(task.primary, task.reference, p);
    EXPECT_LE(Misalignment(r.final_weights, task.taps), 0.05) << "mu " << mu;
  }
}

TEST(AdaptiveTest, NlmsMisalignmentFallsWindowByWindow) {
  const auto task = MakeChannelTask(3000, 9, 0.0);
  AdaptiveParams p;
  p.order = 4;
  p.mu = 0.2;
  const auto r = NlmsCancel(task.primary, task.reference, p);
  ASSERT_EQ(r.weight_history.size(), 3000u);
  double prev = 1e300;
  for (std::size_t w = 0; w < 30; ++w) {
    double avg = 0.0;
    for (std::size_t n = w * 100; n < (w + 1) * 100; ++n)
      avg += Misalignment(r.weight_history[n], task.taps) / 100.0;
    if (avg < 1e-12) break;  // converged to rounding level
    EXPECT_LT(avg, prev) << "window " << w;
    prev = avg;
  }
}

TEST(AdaptiveTest, HistoryStride) {
  const auto task = MakeChannelTask(1000, 3);
  AdaptiveParams p;
  p.mu = -0.1;
  EXPECT_EQ(CodeOf([&] { p.Validate(); }), ErrorCode::kInvalidArgument);
  p = AdaptiveParams{};
  p.order = 0;
  EXPECT_EQ(CodeOf([&] { p.Validate(); }), ErrorCode::kInvalidArgument);
  p.order = 4;
  p.history_stride = 100;
  EXPECT_EQ(NlmsCancel(task.primary, task.reference, p).weight_history.size(), 10u);
  p.history_stride = 0;
  EXPECT_TRUE(NlmsCancel(task.primary, task.reference, p).weight_history.empty());
}

TEST(ErleTest, ClosedForms) {
  const Waveform mic(Gaussian(500, 1.0, 3), 8000);
  EXPECT_NEAR(ErleDb(mic, mic), 0.0, 1e-12);
  std::vector<double> tenth(mic.samples);
  for (auto &v : tenth) v /= 10.0;
  EXPECT_NEAR(ErleDb(mic, Waveform(tenth, 8000)), 20.0, 1e-9);
  EXPECT_EQ(CodeOf([&] { ErleDb(mic, Waveform(std::vector<double>(500, 0.0), 8000)); }),
            ErrorCode::kZeroResidual);
  EXPECT_EQ(CodeOf([&] { ErleDb(mic, Waveform(std::vector<double>(499, 1.0), 8000)); }),
            ErrorCode::kLengthMismatch);
}

TEST(CmnTest, ClosedFormsAndProperties) {
  FeatureMatrix constant;
  for (int r = 0; r < 20; ++r)
    for (int c = 0; c < 20; ++c) constant(r, c) = 3.0 + r;
  const auto z = Cmn(constant);
  for (int r = 0; r < 20; ++r)
    for (int c = 0; c < 20; ++c) EXPECT_EQ(z(r, c), 0.0);

  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  FeatureMatrix f;
  for (int r = 0; r < 20; ++r)
    for (int c = 0; c < 20; ++c) f(r, c) = u(gen) + 100.0 * r;
  const auto once = Cmn(f), twice = Cmn(once);
  for (int r = 0; r < 20; ++r) {
    double mean = 0.0;
    for (int c = 0; c < 20; ++c) mean += once(r, c) / 20.0;
    EXPECT_LE(std::abs(mean), 1e-10);
    for (int c = 0; c < 20; ++c) EXPECT_NEAR(twice(r, c), once(r, c), 1e-12);
  }
  EXPECT_EQ(CodeOf([] { CmnRows({{}}); }), ErrorCode::kEmptyFeatures);
  EXPECT_EQ(CodeOf([] { CmnRows({}); }), ErrorCode::kEmptyFeatures);
}

TEST(RastaTest, MatchesRecursion) {
  const auto x = Gaussian(300, 2.0, 13);
  const auto zero = RastaFilter({x}, RastaInit::kZero)[0];
  const auto want_zero = RastaOracle(x, 0);
  const auto primed = RastaFilter({x}, RastaInit::kPrimed)[0];
  const auto want_primed = RastaOracle(x, 4);
  ASSERT_EQ(zero.size(), x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    EXPECT_NEAR(zero[n], want_zero[n], 1e-12);
    EXPECT_NEAR(primed[n], want_primed[n], 1e-12);
  }
}

TEST(RastaTest, RejectsDcAndChannelOffsets) {
  // Primed memory removes the start-up transient, so DC is gone at once.
  // From zero memory the transient decays as 0.98^n and needs ~300 frames.
  const std::vector<double> dc(500, 5.0);
  const auto primed_dc = RastaFilter({dc})[0];
  for (std::size_t n = 200; n < dc.size(); ++n) EXPECT_LE(std::abs(primed_dc[n]), 1e-3 * 5.0);
  const auto zero_dc = RastaFilter({dc}, RastaInit::kZero)[0];
  for (std::size_t n = 400; n < dc.size(); ++n) EXPECT_LE(std::abs(zero_dc[n]), 1e-3 * 5.0);
  EXPECT_GT(std::abs(zero_dc[200]), 1e-3 * 5.0);
  const auto x = Gaussian(500, 1.0, 14);
  std::vector<double> shifted(x);
  for (auto &v : shifted) v += 7.5;
  const auto out = RastaFilter({x, shifted}, RastaInit::kZero);
  for (std::size_t n = 400; n < x.size(); ++n) EXPECT_NEAR(out[0][n], out[1][n], 1e-3 * 7.5);
  const auto primed = RastaFilter({x, shifted});
  for (std::size_t n = 0; n < x.size(); ++n) EXPECT_NEAR(primed[0][n], primed[1][n], 1e-10);
  const auto silent = RastaFilter({std::vector<double>(20, 0.0)});
  for (double v : silent[0]) EXPECT_EQ(v, 0.0);
}

TEST(RastaTest, TooFewFrames) {
  EXPECT_EQ(CodeOf([] { RastaFilter({std::vector<double>(4, 1.0)}); }), ErrorCode::kTooFewFrames);
  EXPECT_NO_THROW(RastaFilter({std::vector<double>(5, 1.0)}));
}

}  // namespace
}  // namespace clearspeech
