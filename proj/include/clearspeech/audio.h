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

#ifndef CLEARSPEECH_AUDIO_H_
#define CLEARSPEECH_AUDIO_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <string>
#include <vector>

namespace clearspeech {

inline constexpr int kDefaultSampleRate = 8000;
inline constexpr int kWordSeconds = 3;
// Returned by SnrDb when the test signal equals the reference exactly.
inline constexpr double kSnrCapDb = 120.0;
// Standard deviation of GenWhiteNoise before clipping.
inline constexpr double kWhiteNoiseSigma = 0.25;

/// Mono waveform, samples nominally in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = kDefaultSampleRate;

  Waveform() = default;
  Waveform(std::vector<double> s, int rate)
      : samples(std::move(s)), sample_rate(rate) {}

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
  std::span<const double> view() const { return samples; }
};

enum class NoiseKind { kWhiteGaussian, kFileBacked };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::kWhiteGaussian;
  // Unset means "unknown SNR": the noise is added at unit gain.
  std::optional<double> target_snr_db;
  std::uint64_t seed = 1;
  std::string path;   // kFileBacked only
  std::string label;  // row label in reports; derived if empty
  // Optional FIR channel the noise passes through before mixing. The
  // unfiltered noise is what an adaptive canceller sees as its reference.
  std::vector<double> channel;

  std::string DisplayLabel() const;
};

struct ManifestEntry {
  int label = 0;  // digit 0-9
  int speaker_id = 0;
  int utterance_index = 0;
  std::string path;  // relative to the manifest's directory
};

struct CorpusManifest {
  std::vector<ManifestEntry> entries;
  int sample_rate = kDefaultSampleRate;
};

// WAV I/O. 16-bit PCM mono only; samples scaled by 1/32768.
Waveform ReadWav(const std::string &path);
Waveform DecodeWav(std::span<const std::uint8_t> bytes);
void WriteWav(const Waveform &wave, const std::string &path);
std::vector<std::uint8_t> EncodeWav(const Waveform &wave);

double SignalPower(std::span<const double> x);

/// 10*log10(sum ref^2 / sum (test-ref)^2); kSnrCapDb when test == ref.
double SnrDb(const Waveform &reference, const Waveform &test);

/// Scales the leading clean.size() samples of `noise` so the mix hits
/// target_snr_db exactly, and returns clean + scaled noise.
Waveform MixAtSnr(const Waveform &clean, const Waveform &noise,
                  double target_snr_db);
/// The gain MixAtSnr applies to the noise.
double MixGain(const Waveform &clean, const Waveform &noise,
               double target_snr_db);

Waveform GenWhiteNoise(std::size_t length, std::uint64_t seed,
                       int sample_rate = kDefaultSampleRate);

/// Synthetic 3-second spoken-digit stand-in: three formant-like partials
/// per digit under a raised-cosine envelope, perturbed per speaker.
Waveform SynthWord(int label, std::uint64_t speaker_seed,
                   int sample_rate = kDefaultSampleRate);

/// Formant frequencies (Hz) SynthWord uses for `label` before perturbation.
std::vector<double> DigitFormants(int label);

// Manifest: one tab-separated line per entry:
// label \t speaker_id \t utterance_index \t relative path
// Lines starting with '#' are comments; "# sample_rate=N" sets the rate.
CorpusManifest ReadManifest(const std::string &path);
void WriteManifest(const CorpusManifest &manifest, const std::string &path);

/// Writes the seeded synthetic corpus (WAVs + manifest.tsv) into `dir`.
/// Tokens are (digit, speaker, utterance) with the speaker seed derived from
/// `seed`; returns the manifest written.
CorpusManifest WriteSynthCorpus(const std::string &dir, std::uint64_t seed,
                                int tokens_per_word, int sample_rate =
                                    kDefaultSampleRate);
std::uint64_t TokenSeed(std::uint64_t corpus_seed, int label, int utterance);

/// Writes `bytes` to a sibling temp file and renames it over `path`.
void WriteFileAtomic(const std::string &path, std::string_view bytes);

}  // namespace clearspeech

#endif  // CLEARSPEECH_AUDIO_H_
