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

// Shared fixtures for the unit and acceptance tests. Everything here is an
// independent re-derivation; nothing calls into the code under test except
// for signal sources whose exact content does not matter.

#ifndef CLEARSPEECH_TESTS_TEST_UTIL_H_
#define CLEARSPEECH_TESTS_TEST_UTIL_H_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "clearspeech/audio.h"

namespace clearspeech::testing {

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("clearspeech_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  std::string File(const std::string &name) const { return (path_ / name).string(); }
  const std::filesystem::path &path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string ReadBytes(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline std::vector<double> Tone(double freq_hz, std::size_t n, double amp = 0.5,
                                int sample_rate = kDefaultSampleRate, double phase = 0.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = amp * std::sin(2.0 * std::numbers::pi * freq_hz * static_cast<double>(i) / sample_rate +
                          phase);
  return x;
}

inline std::vector<double> Convolve(const std::vector<double> &x, const std::vector<double> &h) {
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t n = 0; n < x.size(); ++n)
    for (std::size_t k = 0; k < h.size() && k <= n; ++k) y[n] += h[k] * x[n - k];
  return y;
}

inline double Power(const std::vector<double> &x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s / static_cast<double>(x.size());
}

inline double RefSnrDb(const std::vector<double> &ref, const std::vector<double> &test) {
  double s = 0.0, e = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    s += ref[i] * ref[i];
    e += (test[i] - ref[i]) * (test[i] - ref[i]);
  }
  return 10.0 * std::log10(s / e);
}

// |sum_k h[k] e^{-j 2 pi f k / fs}|
inline double DtftMagnitude(const std::vector<double> &h, double freq_hz, int sample_rate) {
  double re = 0.0, im = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    const double ph = -2.0 * std::numbers::pi * freq_hz * static_cast<double>(k) / sample_rate;
    re += h[k] * std::cos(ph);
    im += h[k] * std::sin(ph);
  }
  return std::hypot(re, im);
}

inline double Db(double mag) { return 20.0 * std::log10(mag); }

// The known-channel identification task: a white reference drives a
// 4-tap echo path; the primary also carries a quiet local signal.
inline const std::vector<double> kEchoPath = {0.5, -0.3, 0.2, 0.1};

struct ChannelTask {
  Waveform primary;
  Waveform reference;
  std::vector<double> taps = kEchoPath;
};

inline ChannelTask MakeChannelTask(std::size_t n, std::uint64_t seed, double local_level = 0.02) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> gauss(0.0, 0.25);
  std::vector<double> ref(n);
  for (auto &v : ref) v = gauss(gen);
  std::vector<double> primary = Convolve(ref, kEchoPath);
  const auto word = SynthWord(3, seed);
  for (std::size_t i = 0; i < n; ++i) primary[i] += local_level * word.samples[i % word.size()];
  return {Waveform(primary, kDefaultSampleRate), Waveform(ref, kDefaultSampleRate), kEchoPath};
}

inline double Misalignment(const std::vector<double> &w, const std::vector<double> &truth) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < std::max(w.size(), truth.size()); ++i) {
    const double a = i < w.size() ? w[i] : 0.0;
    const double b = i < truth.size() ? truth[i] : 0.0;
    num += (a - b) * (a - b);
    den += b * b;
  }
  return std::sqrt(num / den);
}

// Canonical 44-byte PCM header followed by little-endian payload.
inline std::vector<std::uint8_t> WavBytes(const std::vector<std::int16_t> &pcm, int sample_rate,
                                          int channels = 1, int bits = 16, int format = 1,
                                          std::uint32_t declared_data = 0) {
  std::vector<std::uint8_t> b;
  auto put = [&b](std::uint32_t v, int n) {
    for (int i = 0; i < n; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  };
  auto tag = [&b](const char *t) { b.insert(b.end(), t, t + 4); };
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(pcm.size() * 2);
  tag("RIFF");
  put(36 + data_bytes, 4);
  tag("WAVE");
  tag("fmt ");
  put(16, 4);
  put(static_cast<std::uint32_t>(format), 2);
  put(static_cast<std::uint32_t>(channels), 2);
  put(static_cast<std::uint32_t>(sample_rate), 4);
  put(static_cast<std::uint32_t>(sample_rate * channels * bits / 8), 4);
  put(static_cast<std::uint32_t>(channels * bits / 8), 2);
  put(static_cast<std::uint32_t>(bits), 2);
  tag("data");
  put(declared_data ? declared_data : data_bytes, 4);
  for (auto s : pcm) put(static_cast<std::uint16_t>(s), 2);
  return b;
}

}  // namespace clearspeech::testing

#endif  // CLEARSPEECH_TESTS_TEST_UTIL_H_
