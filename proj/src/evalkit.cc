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

#include "clearspeech/evalkit.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>
#include <thread>

#include "clearspeech/filterbank.h"
#include "clearspeech/rng.h"

namespace clearspeech {

namespace {

std::string ShortNumber(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string CsvField(const std::string &s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void AppendCsvRow(std::string &out, const std::vector<std::string> &fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += CsvField(fields[i]);
  }
  out += '\n';
}

Waveform NoiseSamples(const NoiseSpec &spec, std::size_t length, int sample_rate,
                      std::uint64_t index) {
  const std::uint64_t seed = DeriveSeed(spec.seed, index);
  if (spec.kind == NoiseKind::kWhiteGaussian)
    return GenWhiteNoise(length, seed, sample_rate);
  Waveform file = ReadWav(spec.path);
  if (file.empty()) throw Error(ErrorCode::kNoiseTooShort, "noise file is empty: " + spec.path);
  if (file.sample_rate != sample_rate)
    throw Error(ErrorCode::kUnsupportedFormat,
                "noise file sample rate " + std::to_string(file.sample_rate) +
                    " differs from " + std::to_string(sample_rate));
  // Loop the recording from a seeded offset.
  std::vector<double> s(length);
  std::size_t pos = index == 0 ? 0 : seed % file.size();
  for (auto &v : s) {
    v = file.samples[pos];
    if (++pos == file.size()) pos = 0;
  }
  return Waveform(std::move(s), sample_rate);
}

double Mean(const std::vector<double> &v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace

NoisyMix MakeNoisyMix(const Waveform &clean, const NoiseSpec &spec, std::uint64_t index) {
  if (clean.empty()) throw Error(ErrorCode::kEmptyInput, "clean signal is empty");
  Waveform raw = NoiseSamples(spec, clean.size(), clean.sample_rate, index);
  Waveform through = spec.channel.empty() ? raw : ApplyFir(raw, spec.channel);
  const double gain =
      spec.target_snr_db ? MixGain(clean, through, *spec.target_snr_db) : 1.0;
  NoisyMix mix;
  mix.noise = through;
  mix.reference = raw;
  for (auto &v : mix.noise.samples) v *= gain;
  for (auto &v : mix.reference.samples) v *= gain;
  mix.mixture = clean;
  for (std::size_t i = 0; i < clean.size(); ++i) mix.mixture.samples[i] += mix.noise.samples[i];
  return mix;
}

void SnrTable::Validate() const {
  if (before.size() != rows.size() || cells.size() != rows.size())
    throw Error(ErrorCode::kDimensionMismatch, "SNR table is not rectangular");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (cells[r].size() != columns.size())
      throw Error(ErrorCode::kDimensionMismatch, "SNR table is not rectangular");
    if (!std::isfinite(before[r]) ||
        !std::all_of(cells[r].begin(), cells[r].end(), [](double v) { return std::isfinite(v); }))
      throw Error(ErrorCode::kInvalidArgument, "SNR table has a non-finite cell");
  }
}

SnrTable SnrImprovementTable(const std::vector<Waveform> &clean,
                             const std::vector<NoiseSpec> &noises,
                             const std::vector<EnhanceMethod> &methods,
                             const StftParams &stft) {
  if (clean.empty()) throw Error(ErrorCode::kEmptyInput, "no clean utterances");
  if (noises.empty()) throw Error(ErrorCode::kEmptyInput, "no noise conditions");
  SnrTable table;
  for (const auto &m : methods) table.columns.push_back(m.label);
  for (const auto &spec : noises) {
    table.rows.push_back(spec.DisplayLabel());
    std::vector<double> before;
    std::vector<std::vector<double>> after(methods.size());
    for (std::size_t u = 0; u < clean.size(); ++u) {
      const NoisyMix mix = MakeNoisyMix(clean[u], spec, u);
      before.push_back(SnrDb(clean[u], mix.mixture));
      for (std::size_t m = 0; m < methods.size(); ++m) {
        if (methods[m].stages.empty()) {
          after[m].push_back(before.back());
          continue;
        }
        HybridContext ctx;
        ctx.reference = mix.reference;
        ctx.noise = mix.noise;
        ctx.noise_source = methods[m].noise_source;
        ctx.stft = stft;
        after[m].push_back(SnrDb(clean[u], RunHybrid(mix.mixture, methods[m].stages, ctx)));
      }
    }
    table.before.push_back(Mean(before));
    std::vector<double> row;
    for (const auto &a : after) row.push_back(Mean(a));
    table.cells.push_back(std::move(row));
  }
  table.Validate();
  return table;
}

std::vector<Utterance> LoadCorpus(const std::string &manifest_path) {
  const CorpusManifest manifest = ReadManifest(manifest_path);
  const auto dir = std::filesystem::path(manifest_path).parent_path();
  std::vector<Utterance> out;
  for (const auto &e : manifest.entries) {
    Utterance u;
    u.label = e.label;
    u.utterance_index = e.utterance_index;
    u.wave = ReadWav((dir / e.path).string());
    out.push_back(std::move(u));
  }
  if (out.empty()) throw Error(ErrorCode::kNoData, "manifest lists no utterances");
  return out;
}

CorpusSplit SplitCorpus(const std::vector<Utterance> &corpus, int n_train, bool reuse_one) {
  CorpusSplit split;
  for (const auto &u : corpus) {
    if (u.utterance_index < n_train) split.train.push_back(u);
    if (u.utterance_index >= n_train || (reuse_one && u.utterance_index == 0))
      split.test.push_back(u);
  }
  return split;
}

Featurized Featurize(const Waveform &wave, const RecognitionConfig &config,
                     const HybridContext *context) {
  Waveform work = wave;
  if (!config.enhance.empty()) {
    HybridContext local;
    local.noise_source = config.noise_source;
    local.stft = config.stft;
    work = RunHybrid(wave, config.enhance, context ? *context : local);
  }
  if (config.trim) {
    try {
      Waveform trimmed = TrimToVoiced(work, config.vad);
      if (trimmed.size() >= static_cast<std::size_t>(config.frame.window_len))
        work = std::move(trimmed);
    } catch (const Error &e) {
      if (e.code() != ErrorCode::kNoSpeechFound) throw;
    }
  }
  FeatureOptions opts;
  const bool normalize = WantsFeatureNormalization(config.enhance);
  opts.rasta = config.rasta || normalize;
  opts.cmn = config.cmn || normalize;
  Featurized out;
  out.features = ExtractFeatures(work, config.frame, opts);
  out.frames = FrameCount(work.size(), config.frame);
  return out;
}

std::vector<HmmModel> TrainModels(const std::vector<Utterance> &train,
                                  const RecognitionConfig &config) {
  if (train.empty()) throw Error(ErrorCode::kNoData, "empty training set");
  std::map<int, std::vector<FeatureMatrix>> by_label;
  for (const auto &u : train) by_label[u.label].push_back(Featurize(u.wave, config).features);
  std::vector<HmmModel> models;
  for (auto &[label, samples] : by_label) {
    HmmModel m = InitUniform(config.n_states, samples, label);
    models.push_back(Train(std::move(m), samples, config.max_iters, config.tol));
  }
  return models;
}

RecognitionScore ScoreRecognition(const std::vector<HmmModel> &models,
                                  const std::vector<Utterance> &test,
                                  const RecognitionConfig &config,
                                  const std::optional<NoiseSpec> &noise) {
  if (test.empty()) throw Error(ErrorCode::kEmptyTestSet, "empty test set");
  RecognitionScore score;
  std::vector<double> snrs, frames;
  for (const auto &u : test) {
    Featurized f;
    if (noise) {
      const std::uint64_t index = static_cast<std::uint64_t>(u.label) * 1000003u +
                                  static_cast<std::uint64_t>(u.utterance_index);
      const NoisyMix mix = MakeNoisyMix(u.wave, *noise, index);
      HybridContext ctx;
      ctx.reference = mix.reference;
      ctx.noise = mix.noise;
      ctx.noise_source = config.noise_source;
      ctx.stft = config.stft;
      snrs.push_back(SnrDb(u.wave, mix.mixture));
      f = Featurize(mix.mixture, config, &ctx);
    } else {
      snrs.push_back(kSnrCapDb);
      f = Featurize(u.wave, config);
    }
    frames.push_back(static_cast<double>(f.frames));
    score.correct += Recognize(models, f.features) == u.label ? 1 : 0;
    ++score.total;
  }
  score.mean_snr_db = Mean(snrs);
  score.mean_frames = Mean(frames);
  return score;
}

void AccuracyGrid::Validate() const {
  if (cells.size() != windows.size())
    throw Error(ErrorCode::kDimensionMismatch, "grid is not rectangular");
  for (const auto &row : cells) {
    if (row.size() != overlaps.size())
      throw Error(ErrorCode::kDimensionMismatch, "grid is not rectangular");
    for (const auto &c : row)
      if (!(c.accuracy_pct >= 0.0 && c.accuracy_pct <= 100.0))
        throw Error(ErrorCode::kInvalidArgument, "accuracy outside [0, 100]");
  }
}

std::vector<GridRow> AccuracyGrid::Rows() const {
  std::vector<GridRow> rows;
  for (std::size_t w = 0; w < windows.size(); ++w)
    for (std::size_t o = 0; o < overlaps.size(); ++o)
      rows.push_back({windows[w], overlaps[o], cells[w][o].snr_db, cells[w][o].accuracy_pct});
  return rows;
}

AccuracyGrid ComputeAccuracyGrid(const std::vector<Utterance> &corpus,
                                 const GridOptions &options) {
  if (options.windows.empty() || options.overlaps.empty())
    throw Error(ErrorCode::kEmptyGrid, "window and overlap lists must be non-empty");
  const CorpusSplit split = SplitCorpus(corpus, options.n_train, options.reuse_one);
  if (split.train.empty()) throw Error(ErrorCode::kNoData, "no training utterances");
  if (split.test.empty()) throw Error(ErrorCode::kEmptyTestSet, "no test utterances");

  AccuracyGrid grid;
  grid.windows = options.windows;
  grid.overlaps = options.overlaps;
  grid.cells.assign(grid.windows.size(), std::vector<GridCell>(grid.overlaps.size()));
  for (int w : grid.windows) {
    for (double o : grid.overlaps) {
      FrameParams fp = options.base.frame;
      fp.window_len = w;
      fp.overlap_pct = o;
      fp.Validate();
    }
  }

  const std::size_t n_cells = grid.windows.size() * grid.overlaps.size();
  std::size_t n_threads = options.threads > 0
                              ? static_cast<std::size_t>(options.threads)
                              : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min(n_threads, n_cells);
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n_cells);
  auto worker = [&]() {
    for (std::size_t i = next++; i < n_cells; i = next++) {
      const std::size_t w = i / grid.overlaps.size(), o = i % grid.overlaps.size();
      try {
        RecognitionConfig cfg = options.base;
        cfg.frame.window_len = grid.windows[w];
        cfg.frame.overlap_pct = grid.overlaps[o];
        const auto models = TrainModels(split.train, cfg);
        const auto score = ScoreRecognition(models, split.test, cfg, options.noise);
        grid.cells[w][o] = {score.mean_frames, score.mean_snr_db, score.Accuracy()};
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto &t : pool) t.join();
  for (const auto &e : errors)
    if (e) std::rethrow_exception(e);
  grid.Validate();
  return grid;
}

Graymap SpectrogramImage(const Waveform &wave, const StftParams &params) {
  const SpectralFrames spec = Stft(wave, params);
  const int frames = static_cast<int>(spec.frames());
  const int bins = spec.bins();
  std::vector<double> level(static_cast<std::size_t>(frames) * bins);
  for (int f = 0; f < frames; ++f)
    for (int k = 0; k < bins; ++k)
      level[static_cast<std::size_t>(f) * bins + k] =
          20.0 * std::log10(spec.magnitudes[f][k] + 1e-12);
  const auto [lo_it, hi_it] = std::minmax_element(level.begin(), level.end());
  const double lo = *lo_it, span = *hi_it - *lo_it;

  Graymap img;
  img.width = frames;
  img.height = bins;
  img.pixels.assign(static_cast<std::size_t>(frames) * bins, 0);
  for (int row = 0; row < bins; ++row) {
    const int k = bins - 1 - row;
    for (int f = 0; f < frames; ++f) {
      const double v = level[static_cast<std::size_t>(f) * bins + k];
      const double scaled = span > 0.0 ? 255.0 * (v - lo) / span : 0.0;
      img.pixels[static_cast<std::size_t>(row) * frames + f] =
          static_cast<std::uint8_t>(std::lround(std::clamp(scaled, 0.0, 255.0)));
    }
  }
  return img;
}

std::string EncodePgm(const Graymap &image) {
  std::string out = "P5\n" + std::to_string(image.width) + " " +
                    std::to_string(image.height) + "\n255\n";
  out.append(reinterpret_cast<const char *>(image.pixels.data()), image.pixels.size());
  return out;
}

void ExportSpectrogram(const Waveform &wave, const StftParams &params,
                       const std::string &path) {
  const Graymap img = SpectrogramImage(wave, params);
  WriteFileAtomic(path, EncodePgm(img));
  std::ostringstream axis;
  axis << "sample_rate=" << wave.sample_rate << '\n'
       << "frame_len=" << params.frame_len << '\n'
       << "hop=" << params.hop << '\n'
       << "fft_size=" << params.fft_size << '\n'
       << "bins=" << img.height << '\n'
       << "frames=" << img.width << '\n'
       << "bin_hz=" << ShortNumber(static_cast<double>(wave.sample_rate) / params.fft_size) << '\n'
       << "frame_seconds=" << ShortNumber(static_cast<double>(params.hop) / wave.sample_rate)
       << '\n';
  WriteFileAtomic(std::filesystem::path(path).replace_extension(".axis.txt").string(),
                  axis.str());
}

std::string FormatCell(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  if (std::string_view(buf) == "-0.0000") return "0.0000";
  return buf;
}

std::string SnrTableCsv(const SnrTable &table) {
  table.Validate();
  std::string out;
  std::vector<std::string> header = {"Noise", "Before"};
  header.insert(header.end(), table.columns.begin(), table.columns.end());
  AppendCsvRow(out, header);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    std::vector<std::string> fields = {table.rows[r], FormatCell(table.before[r])};
    for (double v : table.cells[r]) fields.push_back(FormatCell(v));
    AppendCsvRow(out, fields);
  }
  return out;
}

std::string AccuracyGridCsv(const AccuracyGrid &grid) {
  grid.Validate();
  std::string out;
  AppendCsvRow(out, {"Window", "Overlap", "FrSz", "SNR", "Accuracy"});
  for (std::size_t w = 0; w < grid.windows.size(); ++w)
    for (std::size_t o = 0; o < grid.overlaps.size(); ++o) {
      const auto &c = grid.cells[w][o];
      AppendCsvRow(out, {std::to_string(grid.windows[w]), ShortNumber(grid.overlaps[o]),
                         FormatCell(c.frame_count), FormatCell(c.snr_db),
                         FormatCell(c.accuracy_pct)});
    }
  return out;
}

void WriteReport(const SnrTable &table, const std::string &path) {
  WriteFileAtomic(path, SnrTableCsv(table));
}

void WriteReport(const AccuracyGrid &grid, const std::string &path) {
  WriteFileAtomic(path, AccuracyGridCsv(grid));
}

std::vector<std::vector<std::string>> ParseCsv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, field_started = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      quoted = field_started = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      field_started = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      field_started = false;
    } else {
      field += c;
      field_started = true;
    }
  }
  if (quoted) throw Error(ErrorCode::kSyntaxError, "unterminated quoted CSV field");
  if (field_started || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace clearspeech
