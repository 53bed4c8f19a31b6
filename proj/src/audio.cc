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

#include "clearspeech/audio.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <sstream>

#include "clearspeech/error.h"
#include "clearspeech/rng.h"

namespace clearspeech {

namespace {

std::uint32_t ReadU32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) |
         (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

std::uint16_t ReadU16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

bool TagIs(std::span<const std::uint8_t> b, std::size_t at, const char *tag) {
  return std::equal(tag, tag + 4, b.begin() + at,
                    [](char c, std::uint8_t u) {
                      return static_cast<std::uint8_t>(c) == u;
                    });
}

void PutU32(std::vector<std::uint8_t> &out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void PutU16(std::vector<std::uint8_t> &out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void PutTag(std::vector<std::uint8_t> &out, const char *tag) {
  out.insert(out.end(), tag, tag + 4);
}

void RequireSameShape(const Waveform &a, const Waveform &b) {
  if (a.size() != b.size() || a.sample_rate != b.sample_rate)
    throw Error(ErrorCode::kLengthMismatch,
                "waveforms differ in length or sample rate (" +
                    std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()) + ")");
}

}  // namespace

std::string NoiseSpec::DisplayLabel() const {
  if (!label.empty()) return label;
  std::string base = kind == NoiseKind::kWhiteGaussian
                         ? "white"
                         : std::filesystem::path(path).stem().string();
  if (!target_snr_db) return base + "@unknown";
  std::ostringstream os;
  os << base << '@' << *target_snr_db << "dB";
  return os.str();
}

Waveform DecodeWav(std::span<const std::uint8_t> b) {
  if (b.size() < 12 || !TagIs(b, 0, "RIFF") || !TagIs(b, 8, "WAVE"))
    throw Error(ErrorCode::kNotWav, "missing RIFF/WAVE magic");
  std::size_t pos = 12;
  bool have_fmt = false;
  int sample_rate = 0;
  while (pos + 8 <= b.size()) {
    std::uint32_t chunk_size = ReadU32(b, pos + 4);
    std::size_t body = pos + 8;
    if (TagIs(b, pos, "fmt ")) {
      if (chunk_size < 16 || body + 16 > b.size())
        throw Error(ErrorCode::kTruncated, "fmt chunk too short");
      std::uint16_t tag = ReadU16(b, body);
      std::uint16_t channels = ReadU16(b, body + 2);
      std::uint32_t rate = ReadU32(b, body + 4);
      std::uint16_t bits = ReadU16(b, body + 14);
      if (tag != 1)
        throw Error(ErrorCode::kUnsupportedFormat,
                    "format tag " + std::to_string(tag) + " is not PCM");
      if (channels != 1)
        throw Error(ErrorCode::kUnsupportedFormat,
                    std::to_string(channels) + " channels; mono required");
      if (bits != 16)
        throw Error(ErrorCode::kUnsupportedFormat,
                    std::to_string(bits) + "-bit samples; 16-bit required");
      if (rate == 0)
        throw Error(ErrorCode::kUnsupportedFormat, "zero sample rate");
      sample_rate = static_cast<int>(rate);
      have_fmt = true;
    } else if (TagIs(b, pos, "data")) {
      if (!have_fmt)
        throw Error(ErrorCode::kNotWav, "data chunk precedes fmt chunk");
      if (body + chunk_size > b.size())
        throw Error(ErrorCode::kTruncated,
                    "data chunk declares " + std::to_string(chunk_size) +
                        " bytes, " + std::to_string(b.size() - body) +
                        " present");
      std::size_t n = chunk_size / 2;
      std::vector<double> samples(n);
      for (std::size_t i = 0; i < n; ++i) {
        auto v = static_cast<std::int16_t>(ReadU16(b, body + 2 * i));
        samples[i] = v / 32768.0;
      }
      return Waveform(std::move(samples), sample_rate);
    }
    pos = body + chunk_size + (chunk_size & 1u);
  }
  if (!have_fmt) throw Error(ErrorCode::kNotWav, "no fmt chunk");
  throw Error(ErrorCode::kTruncated, "no data chunk");
}

Waveform ReadWav(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return DecodeWav(bytes);
}

std::vector<std::uint8_t> EncodeWav(const Waveform &wave) {
  if (wave.sample_rate <= 0)
    throw Error(ErrorCode::kInvalidArgument, "sample rate must be positive");
  const auto data_bytes = static_cast<std::uint32_t>(wave.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  PutTag(out, "RIFF");
  PutU32(out, 36 + data_bytes);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutU32(out, 16);
  PutU16(out, 1);
  PutU16(out, 1);
  PutU32(out, static_cast<std::uint32_t>(wave.sample_rate));
  PutU32(out, static_cast<std::uint32_t>(wave.sample_rate) * 2);
  PutU16(out, 2);
  PutU16(out, 16);
  PutTag(out, "data");
  PutU32(out, data_bytes);
  for (double x : wave.samples) {
    // Out-of-range samples saturate.
    double q = std::round(std::clamp(x, -1.0, 1.0) * 32768.0);
    auto v = static_cast<std::int16_t>(std::clamp(q, -32768.0, 32767.0));
    PutU16(out, static_cast<std::uint16_t>(v));
  }
  return out;
}

void WriteFileAtomic(const std::string &path, std::string_view bytes) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + tmp);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::kIoFailure, "short write to " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "rename to " + path + ": " + ec.message());
}

void WriteWav(const Waveform &wave, const std::string &path) {
  auto bytes = EncodeWav(wave);
  WriteFileAtomic(path, std::string_view(
                            reinterpret_cast<const char *>(bytes.data()),
                            bytes.size()));
}

double SignalPower(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc;
}

double SnrDb(const Waveform &reference, const Waveform &test) {
  RequireSameShape(reference, test);
  double signal = SignalPower(reference.samples);
  if (signal == 0.0)
    throw Error(ErrorCode::kZeroReference, "reference is all zero");
  double error = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    double d = test.samples[i] - reference.samples[i];
    error += d * d;
  }
  if (error == 0.0) return kSnrCapDb;
  return 10.0 * std::log10(signal / error);
}

double MixGain(const Waveform &clean, const Waveform &noise,
               double target_snr_db) {
  if (noise.size() < clean.size())
    throw Error(ErrorCode::kNoiseTooShort,
                "noise has " + std::to_string(noise.size()) +
                    " samples, clean has " + std::to_string(clean.size()));
  double p_clean = SignalPower(clean.samples);
  if (p_clean == 0.0)
    throw Error(ErrorCode::kSilentClean, "clean signal is all zero");
  double p_noise = SignalPower(
      std::span<const double>(noise.samples).first(clean.size()));
  if (p_noise == 0.0)
    throw Error(ErrorCode::kSilentNoise, "noise segment is all zero");
  return std::sqrt(p_clean / (p_noise * std::pow(10.0, target_snr_db / 10.0)));
}

Waveform MixAtSnr(const Waveform &clean, const Waveform &noise,
                  double target_snr_db) {
  double g = MixGain(clean, noise, target_snr_db);
  Waveform out = clean;
  for (std::size_t i = 0; i < out.size(); ++i)
    out.samples[i] += g * noise.samples[i];
  return out;
}

Waveform GenWhiteNoise(std::size_t length, std::uint64_t seed,
                       int sample_rate) {
  if (length == 0)
    throw Error(ErrorCode::kInvalidArgument, "noise length must be positive");
  Rng rng(seed);
  std::vector<double> s(length);
  for (auto &v : s) v = std::clamp(kWhiteNoiseSigma * rng.Gaussian(), -1.0, 1.0);
  return Waveform(std::move(s), sample_rate);
}

std::vector<double> DigitFormants(int label) {
  static constexpr double kTable[10][3] = {
      {320, 900, 2300},  {280, 1400, 2700}, {450, 1800, 2500},
      {600, 1150, 3000}, {700, 1000, 2200}, {380, 2100, 3200},
      {520, 1500, 2050}, {750, 1300, 2600}, {250, 2300, 3100},
      {650, 1700, 3400},
  };
  if (label < 0 || label > 9)
    throw Error(ErrorCode::kInvalidArgument,
                "digit label " + std::to_string(label) + " outside 0..9");
  return {kTable[label][0], kTable[label][1], kTable[label][2]};
}

Waveform SynthWord(int label, std::uint64_t speaker_seed, int sample_rate) {
  if (sample_rate <= 0)
    throw Error(ErrorCode::kInvalidArgument, "sample rate must be positive");
  auto formants = DigitFormants(label);
  Rng rng(DeriveSeed(speaker_seed, 0x5157u, static_cast<std::uint64_t>(label)));

  // Speaker perturbation: a shared +-2% vocal-tract factor plus +-1% per
  // formant, so no frequency moves more than 3%.
  const double tract = rng.Uniform(-0.02, 0.02);
  std::array<double, 3> freq{}, phase{};
  for (int k = 0; k < 3; ++k) {
    double f = formants[k] * (1.0 + tract + rng.Uniform(-0.01, 0.01));
    freq[k] = std::min(f, 0.45 * sample_rate);
    phase[k] = rng.Uniform(0.0, 2.0 * std::numbers::pi);
  }
  static constexpr double kAmp[3] = {0.45, 0.28, 0.15};
  const double loudness = rng.Uniform(0.75, 1.0);

  const auto n = static_cast<std::size_t>(kWordSeconds) * sample_rate;
  const double onset = rng.Uniform(0.4, 0.6);
  const double offset = rng.Uniform(2.4, 2.6);
  const double attack = 0.05, release = 0.1;

  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    double t = static_cast<double>(i) / sample_rate;
    double env = 0.0;
    if (t >= onset && t <= offset) {
      if (t < onset + attack)
        env = 0.5 - 0.5 * std::cos(std::numbers::pi * (t - onset) / attack);
      else if (t > offset - release)
        env = 0.5 - 0.5 * std::cos(std::numbers::pi * (offset - t) / release);
      else
        env = 1.0;
    }
    double v = 0.0;
    if (env > 0.0) {
      for (int k = 0; k < 3; ++k)
        v += kAmp[k] * std::sin(2.0 * std::numbers::pi * freq[k] * t + phase[k]);
      v *= loudness * env;
    }
    // Low-level jitter keeps silent stretches above the log floor.
    s[i] = std::clamp(v + 1e-3 * rng.Gaussian(), -1.0, 1.0);
  }
  return Waveform(std::move(s), sample_rate);
}

CorpusManifest ReadManifest(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path);
  CorpusManifest m;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.rfind("# sample_rate=", 0) == 0) {
      try {
        m.sample_rate = std::stoi(line.substr(14));
      } catch (const std::exception &) {
        throw Error(ErrorCode::kInvalidArgument, path + ": bad sample_rate comment");
      }
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    ManifestEntry e;
    std::string label, speaker, utt;
    if (!std::getline(fields, label, '\t') ||
        !std::getline(fields, speaker, '\t') ||
        !std::getline(fields, utt, '\t') || !std::getline(fields, e.path))
      throw Error(ErrorCode::kInvalidArgument,
                  path + ":" + std::to_string(line_no) +
                      ": expected 4 tab-separated fields");
    try {
      e.label = std::stoi(label);
      e.speaker_id = std::stoi(speaker);
      e.utterance_index = std::stoi(utt);
    } catch (const std::exception &) {
      throw Error(ErrorCode::kInvalidArgument,
                  path + ":" + std::to_string(line_no) + ": non-numeric field");
    }
    if (e.label < 0 || e.label > 9)
      throw Error(ErrorCode::kInvalidArgument,
                  path + ":" + std::to_string(line_no) + ": label outside 0..9");
    m.entries.push_back(std::move(e));
  }
  return m;
}

void WriteManifest(const CorpusManifest &manifest, const std::string &path) {
  std::ostringstream os;
  os << "# sample_rate=" << manifest.sample_rate << '\n';
  for (const auto &e : manifest.entries)
    os << e.label << '\t' << e.speaker_id << '\t' << e.utterance_index << '\t'
       << e.path << '\n';
  WriteFileAtomic(path, os.str());
}

std::uint64_t TokenSeed(std::uint64_t corpus_seed, int label, int utterance) {
  return DeriveSeed(corpus_seed, static_cast<std::uint64_t>(label),
                    static_cast<std::uint64_t>(utterance));
}

CorpusManifest WriteSynthCorpus(const std::string &dir, std::uint64_t seed,
                                int tokens_per_word, int sample_rate) {
  if (tokens_per_word <= 0)
    throw Error(ErrorCode::kInvalidArgument, "tokens_per_word must be positive");
  std::filesystem::create_directories(dir);
  CorpusManifest m;
  m.sample_rate = sample_rate;
  for (int label = 0; label < 10; ++label) {
    for (int u = 0; u < tokens_per_word; ++u) {
      ManifestEntry e{label, u, u,
                      "d" + std::to_string(label) + "_u" + std::to_string(u) +
                          ".wav"};
      WriteWav(SynthWord(label, TokenSeed(seed, label, u), sample_rate),
               (std::filesystem::path(dir) / e.path).string());
      m.entries.push_back(std::move(e));
    }
  }
  WriteManifest(m, (std::filesystem::path(dir) / "manifest.tsv").string());
  return m;
}

}  // namespace clearspeech
