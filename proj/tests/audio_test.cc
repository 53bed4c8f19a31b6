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
#include <complex>

#include "clearspeech/audio.h"
#include "clearspeech/error.h"
#include "expect_error.h"
#include "test_util.h"

namespace clearspeech {
namespace {

using testing::CodeOf;
using testing::TempDir;
using testing::WavBytes;

TEST(WavTest, DecodesThreeSecondMonoFile) {
  std::vector<std::int16_t> pcm(24000, 100);
  const auto w = DecodeWav(WavBytes(pcm, 8000));
  EXPECT_EQ(w.size(), 24000u);
  EXPECT_EQ(w.sample_rate, 8000);
  EXPECT_DOUBLE_EQ(w.seconds(), 3.0);
}

TEST(WavTest, ZeroPayloadDecodesToZeros) {
  const auto w = DecodeWav(WavBytes(std::vector<std::int16_t>(50, 0), 8000));
  for (double v : w.samples) EXPECT_EQ(v, 0.0);
}

TEST(WavTest, FullScaleSampleScaling) {
  const auto w = DecodeWav(WavBytes({0x7FFF}, 8000));
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w.samples[0], 32767.0 / 32768.0);
  EXPECT_EQ(DecodeWav(WavBytes({-32768}, 8000)).samples[0], -1.0);
}

TEST(WavTest, RejectsMalformedInput) {
  auto bytes = WavBytes({1, 2, 3}, 8000);
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_EQ(CodeOf([&] { DecodeWav(bad_magic); }), ErrorCode::kNotWav);
  EXPECT_EQ(CodeOf([&] { DecodeWav(WavBytes({1, 2}, 8000, 2)); }), ErrorCode::kUnsupportedFormat);
  EXPECT_EQ(CodeOf([&] { DecodeWav(WavBytes({1, 2}, 8000, 1, 8)); }),
            ErrorCode::kUnsupportedFormat);
  EXPECT_EQ(CodeOf([&] { DecodeWav(WavBytes({1, 2}, 8000, 1, 16, 3)); }),
            ErrorCode::kUnsupportedFormat);
  EXPECT_EQ(CodeOf([&] { DecodeWav(WavBytes({1, 2, 3}, 8000, 1, 16, 1, 100)); }),
            ErrorCode::kTruncated);
}

TEST(WavTest, SkipsUnknownChunks) {
  auto bytes = WavBytes({7, 8}, 8000);
  // Insert a LIST chunk between fmt and data.
  const std::vector<std::uint8_t> list = {'L', 'I', 'S', 'T', 2, 0, 0, 0, 'a', 'b'};
  bytes.insert(bytes.begin() + 36, list.begin(), list.end());
  const auto w = DecodeWav(bytes);
  ASSERT_EQ(w.size(), 2u);
  EXPECT_EQ(w.samples[1], 8.0 / 32768.0);
}

void ExpectRoundTrip(const Waveform &w) {
  TempDir dir;
  WriteWav(w, dir.File("x.wav"));
  const auto back = ReadWav(dir.File("x.wav"));
  ASSERT_EQ(back.size(), w.size());
  EXPECT_EQ(back.sample_rate, w.sample_rate);
  for (std::size_t i = 0; i < w.size(); ++i)
    EXPECT_LE(std::abs(back.samples[i] - w.samples[i]), 1.0 / 32768.0) << i;
}

TEST(WavTest, RoundTripRamp) {
  std::vector<double> ramp(100);
  for (int i = 0; i < 100; ++i) ramp[i] = -1.0 + 2.0 * i / 99.0;
  ExpectRoundTrip(Waveform(ramp, 8000));
}

TEST(WavTest, RoundTripZerosAndNoise) {
  ExpectRoundTrip(Waveform(std::vector<double>(64, 0.0), 16000));
  ExpectRoundTrip(GenWhiteNoise(5000, 3));
  const auto bytes = EncodeWav(Waveform(std::vector<double>(10, 0.0), 8000));
  for (std::size_t i = 44; i < bytes.size(); ++i) EXPECT_EQ(bytes[i], 0);
}

TEST(WavTest, MissingFileIsIoFailure) {
  EXPECT_EQ(CodeOf([] { ReadWav("/nonexistent/dir/x.wav"); }), ErrorCode::kIoFailure);
}

TEST(SnrTest, IdenticalSignalsHitTheCap) {
  const auto w = GenWhiteNoise(100, 1);
  EXPECT_EQ(SnrDb(w, w), kSnrCapDb);
}

TEST(SnrTest, EqualPowersGiveZeroDb) {
  std::vector<double> ref = {1, -1, 1, -1}, test = {2, -2, 0, 0};
  EXPECT_NEAR(SnrDb(Waveform(ref, 8000), Waveform(test, 8000)), 0.0, 1e-12);
}

TEST(SnrTest, OrthogonalNoiseAtTwentyDb) {
  // sin and 0.1 cos over whole periods are orthogonal with power ratio 100.
  const std::size_t n = 8000;
  auto ref = testing::Tone(100, n, 0.5);
  auto noise = testing::Tone(100, n, 0.05, 8000, std::numbers::pi / 2);
  std::vector<double> test(n);
  for (std::size_t i = 0; i < n; ++i) test[i] = ref[i] + noise[i];
  EXPECT_NEAR(SnrDb(Waveform(ref, 8000), Waveform(test, 8000)), 20.0, 1e-9);
}

TEST(SnrTest, DoublingNoiseCostsSixDb) {
  const auto ref = SynthWord(4, 2);
  const auto noise = GenWhiteNoise(ref.size(), 9);
  Waveform a = ref, b = ref;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    a.samples[i] += 0.1 * noise.samples[i];
    b.samples[i] += 0.2 * noise.samples[i];
  }
  EXPECT_NEAR(SnrDb(ref, a) - SnrDb(ref, b), 20.0 * std::log10(2.0), 1e-9);
}

TEST(SnrTest, Errors) {
  const Waveform a(std::vector<double>(4, 0.5), 8000), b(std::vector<double>(5, 0.5), 8000);
  EXPECT_EQ(CodeOf([&] { SnrDb(a, b); }), ErrorCode::kLengthMismatch);
  const Waveform z(std::vector<double>(4, 0.0), 8000);
  EXPECT_EQ(CodeOf([&] { SnrDb(z, a); }), ErrorCode::kZeroReference);
}

TEST(MixTest, ZeroDbMatchesPowers) {
  const auto clean = SynthWord(2, 5);
  const auto noise = GenWhiteNoise(clean.size() + 100, 6);
  const auto mix = MixAtSnr(clean, noise, 0.0);
  std::vector<double> scaled(clean.size());
  for (std::size_t i = 0; i < clean.size(); ++i) scaled[i] = mix.samples[i] - clean.samples[i];
  EXPECT_NEAR(testing::Power(scaled) / testing::Power(clean.samples), 1.0, 1e-12);
}

TEST(MixTest, ClosedFormGain) {
  const Waveform clean(std::vector<double>{1, -1, 1, -1}, 8000);
  const Waveform noise(std::vector<double>{2, 2, -2, -2}, 8000);
  EXPECT_NEAR(MixGain(clean, noise, 10.0), std::sqrt(1.0 / 40.0), 1e-15);
  EXPECT_NEAR(MixGain(clean, noise, 10.0), 0.15811, 1e-5);
}

TEST(MixTest, HighTargetLeavesCleanAlmostUntouched) {
  const auto clean = SynthWord(1, 5);
  const auto mix = MixAtSnr(clean, GenWhiteNoise(clean.size(), 1), 120.0);
  for (std::size_t i = 0; i < clean.size(); i += 97)
    EXPECT_NEAR(mix.samples[i], clean.samples[i], 1e-5);
}

TEST(MixTest, RoundTripsTargetAcrossSeeds) {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const auto clean = SynthWord(static_cast<int>(seed % 10), seed);
    const auto noise = GenWhiteNoise(clean.size(), seed + 100);
    const double target = -5.0 + 2.5 * static_cast<double>(seed);
    EXPECT_NEAR(SnrDb(clean, MixAtSnr(clean, noise, target)), target, 1e-9);
  }
}

TEST(MixTest, Errors) {
  const auto clean = SynthWord(1, 1);
  EXPECT_EQ(CodeOf([&] { MixAtSnr(clean, GenWhiteNoise(10, 1), 0.0); }),
            ErrorCode::kNoiseTooShort);
  const Waveform silent(std::vector<double>(100, 0.0), 8000);
  EXPECT_EQ(CodeOf([&] { MixAtSnr(silent, GenWhiteNoise(100, 1), 0.0); }),
            ErrorCode::kSilentClean);
}

TEST(NoiseTest, DeterministicPerSeed) {
  EXPECT_EQ(GenWhiteNoise(1000, 42).samples, GenWhiteNoise(1000, 42).samples);
  EXPECT_NE(GenWhiteNoise(1000, 42).samples, GenWhiteNoise(1000, 43).samples);
}

TEST(NoiseTest, ZeroMeanAndSigma) {
  const auto w = GenWhiteNoise(100000, 7);
  double mean = 0.0;
  for (double v : w.samples) mean += v;
  mean /= static_cast<double>(w.size());
  EXPECT_LE(std::abs(mean), 0.02);
  EXPECT_NEAR(std::sqrt(testing::Power(w.samples)), kWhiteNoiseSigma, 0.01);
}

TEST(NoiseTest, SingleSample) {
  const auto w = GenWhiteNoise(1, 3);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_TRUE(std::isfinite(w.samples[0]));
  EXPECT_LE(std::abs(w.samples[0]), 1.0);
}

// Hann-windowed magnitude spectrum on a 5 Hz grid by direct DFT, averaged
// over eight 1024-sample segments inside the active part of the token.
std::vector<double> CoarseSpectrum(const Waveform &w) {
  constexpr std::size_t kSeg = 1024;
  std::vector<double> mag;
  for (double f = 5.0; f < 4000.0; f += 5.0) {
    double acc = 0.0;
    for (std::size_t seg = 0; seg < 8; ++seg) {
      const std::size_t begin = 7000 + seg * kSeg;
      std::complex<double> sum = 0.0;
      for (std::size_t n = 0; n < kSeg; ++n) {
        const double hann = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / kSeg);
        sum += hann * w.samples[begin + n] *
               std::polar(1.0, -2.0 * std::numbers::pi * f * static_cast<double>(n) / w.sample_rate);
      }
      acc += std::abs(sum);
    }
    mag.push_back(acc / 8.0);
  }
  return mag;
}

double PeakHz(const Waveform &w) {
  const auto spec = CoarseSpectrum(w);
  return 5.0 * static_cast<double>(std::max_element(spec.begin(), spec.end()) - spec.begin() + 1);
}

TEST(SynthWordTest, DeterministicWithFixedLength) {
  EXPECT_EQ(SynthWord(5, 11).samples, SynthWord(5, 11).samples);
  EXPECT_EQ(SynthWord(5, 11).size(), 3u * 8000u);
  EXPECT_EQ(SynthWord(5, 11, 16000).size(), 3u * 16000u);
  for (double v : SynthWord(9, 2).samples) ASSERT_LE(std::abs(v), 1.0);
}

TEST(SynthWordTest, DominantPeaksDifferAndStayNearFormants) {
  const auto zero = SynthWord(0, 4), one = SynthWord(1, 4);
  const double p0 = PeakHz(zero), p1 = PeakHz(one);
  EXPECT_GT(std::abs(p0 - p1), 20.0);
  // The strongest partial is the first formant, perturbed by at most 3%.
  EXPECT_NEAR(p0, DigitFormants(0)[0], 0.03 * DigitFormants(0)[0] + 10.0);
  EXPECT_NEAR(p1, DigitFormants(1)[0], 0.03 * DigitFormants(1)[0] + 10.0);
}

TEST(SynthWordTest, NearestCentroidSeparatesLabels) {
  std::vector<std::vector<double>> centroids;
  for (int label = 0; label < 10; ++label) centroids.push_back(CoarseSpectrum(SynthWord(label, 100)));
  auto normalize = [](std::vector<double> v) {
    double n = 0.0;
    for (double x : v) n += x * x;
    for (double &x : v) x /= std::sqrt(n);
    return v;
  };
  for (auto &c : centroids) c = normalize(c);
  for (int label = 0; label < 10; ++label) {
    const auto s = normalize(CoarseSpectrum(SynthWord(label, 200 + label)));
    int best = -1;
    double best_d = 1e300;
    for (int c = 0; c < 10; ++c) {
      double d = 0.0;
      for (std::size_t k = 0; k < s.size(); ++k) d += (s[k] - centroids[c][k]) * (s[k] - centroids[c][k]);
      if (d < best_d) best_d = d, best = c;
    }
    EXPECT_EQ(best, label);
  }
}

TEST(ManifestTest, RoundTrip) {
  TempDir dir;
  CorpusManifest m;
  m.entries = {{3, 1, 0, "d3_u0.wav"}, {7, 2, 4, "sub/d7_u4.wav"}};
  WriteManifest(m, dir.File("m.tsv"));
  const auto back = ReadManifest(dir.File("m.tsv"));
  ASSERT_EQ(back.entries.size(), 2u);
  EXPECT_EQ(back.entries[1].label, 7);
  EXPECT_EQ(back.entries[1].speaker_id, 2);
  EXPECT_EQ(back.entries[1].utterance_index, 4);
  EXPECT_EQ(back.entries[1].path, "sub/d7_u4.wav");
}

TEST(ManifestTest, RejectsOutOfVocabularyLabel) {
  TempDir dir;
  std::ofstream(dir.File("m.tsv")) << "12\t0\t0\tx.wav\n";
  EXPECT_THROW(ReadManifest(dir.File("m.tsv")), Error);
}

TEST(SynthCorpusTest, ByteIdenticalAcrossRuns) {
  TempDir a, b;
  const auto ma = WriteSynthCorpus(a.path().string(), 7, 2);
  WriteSynthCorpus(b.path().string(), 7, 2);
  ASSERT_EQ(ma.entries.size(), 20u);
  for (const auto &e : ma.entries)
    EXPECT_EQ(testing::ReadBytes(a.File(e.path)), testing::ReadBytes(b.File(e.path)));
  EXPECT_EQ(testing::ReadBytes(a.File("manifest.tsv")), testing::ReadBytes(b.File("manifest.tsv")));
}

TEST(NoiseSpecTest, DisplayLabel) {
  NoiseSpec s;
  s.target_snr_db = 5.0;
  EXPECT_EQ(s.DisplayLabel(), "white@5dB");
  s.label = "Airport";
  EXPECT_EQ(s.DisplayLabel(), "Airport");
}

}  // namespace
}  // namespace clearspeech
