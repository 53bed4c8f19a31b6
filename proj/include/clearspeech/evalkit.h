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

#ifndef CLEARSPEECH_EVALKIT_H_
#define CLEARSPEECH_EVALKIT_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "clearspeech/audio.h"
#include "clearspeech/enhance.h"
#include "clearspeech/features.h"
#include "clearspeech/fis.h"
#include "clearspeech/hmm.h"
#include "clearspeech/hybrid.h"
#include "clearspeech/vad.h"

namespace clearspeech {

// ---------------------------------------------------------------------------
// Noise realization shared by the table builders and the command-line tool.

struct NoisyMix {
  Waveform mixture;
  Waveform noise;      // the additive component actually present (scaled)
  Waveform reference;  // the noise before the channel, same scale
};

/// Draws (or loads) noise for `spec`, passes it through the noise channel
/// and adds it to `clean`. `index` decorrelates noise across utterances.
NoisyMix MakeNoisyMix(const Waveform &clean, const NoiseSpec &spec,
                      std::uint64_t index = 0);

// ---------------------------------------------------------------------------
// SNR improvement table.

struct SnrTable {
  std::vector<std::string> rows;     // noise condition labels
  std::vector<std::string> columns;  // method labels
  std::vector<double> before;        // input SNR per row
  std::vector<std::vector<double>> cells;

  void Validate() const;
};

/// One column of the table. An empty stage list is the identity.
struct EnhanceMethod {
  std::string label;
  std::vector<HybridStage> stages;
  NoiseSource noise_source = NoiseSource::kOracle;
};

/// Cells are SNRs averaged over the clean set.
SnrTable SnrImprovementTable(const std::vector<Waveform> &clean,
                             const std::vector<NoiseSpec> &noises,
                             const std::vector<EnhanceMethod> &methods,
                             const StftParams &stft = {});

// ---------------------------------------------------------------------------
// Recognition pipeline.

struct Utterance {
  int label = 0;
  int utterance_index = 0;
  Waveform wave;
};

std::vector<Utterance> LoadCorpus(const std::string &manifest_path);

struct CorpusSplit {
  std::vector<Utterance> train;
  std::vector<Utterance> test;
};

/// Utterances below `n_train` train. The rest test; with `reuse_one` the
/// first training token of every word is also tested.
CorpusSplit SplitCorpus(const std::vector<Utterance> &corpus, int n_train,
                        bool reuse_one = true);

struct RecognitionConfig {
  FrameParams frame;
  // Optional front-end enhancement; empty means none.
  std::vector<HybridStage> enhance;
  NoiseSource noise_source = NoiseSource::kVadGuided;
  StftParams stft;
  bool trim = true;
  VadParams vad;
  // Front-end normalization; a rasta stage in `enhance` turns both on.
  bool rasta = false;
  bool cmn = false;
  int n_states = kDefaultStates;
  int max_iters = 20;
  double tol = 1e-4;
};

struct Featurized {
  FeatureMatrix features;
  std::size_t frames = 0;  // analysis frames before column reduction
};

/// Optional enhancement, endpoint trimming (whole signal if no speech is
/// found) and MFCC extraction.
Featurized Featurize(const Waveform &wave, const RecognitionConfig &config,
                     const HybridContext *context = nullptr);

/// One model per distinct label, ordered by label.
std::vector<HmmModel> TrainModels(const std::vector<Utterance> &train,
                                  const RecognitionConfig &config);

struct RecognitionScore {
  int correct = 0;
  int total = 0;
  double mean_snr_db = 0.0;  // of the material that was recognized
  double mean_frames = 0.0;
  double Accuracy() const { return WordAccuracy(correct, total); }
};

/// Recognizes every utterance, optionally after adding noise.
RecognitionScore ScoreRecognition(const std::vector<HmmModel> &models,
                                  const std::vector<Utterance> &test,
                                  const RecognitionConfig &config,
                                  const std::optional<NoiseSpec> &noise = std::nullopt);

// ---------------------------------------------------------------------------
// Accuracy grid.

struct GridCell {
  double frame_count = 0.0;
  double snr_db = 0.0;
  double accuracy_pct = 0.0;
};

struct AccuracyGrid {
  std::vector<int> windows;
  std::vector<double> overlaps;
  std::vector<std::vector<GridCell>> cells;  // windows x overlaps

  void Validate() const;
  std::vector<GridRow> Rows() const;
};

struct GridOptions {
  std::vector<int> windows;
  std::vector<double> overlaps;
  int n_train = 5;
  bool reuse_one = true;
  std::optional<NoiseSpec> noise;
  RecognitionConfig base;
  int threads = 0;  // 0 selects the hardware concurrency
};

AccuracyGrid ComputeAccuracyGrid(const std::vector<Utterance> &corpus,
                                 const GridOptions &options);

// ---------------------------------------------------------------------------
// Artifacts.

/// Writes a P5 graymap (rows are bins with the lowest at the bottom,
/// columns are frames) and `<stem>.axis.txt` beside it.
void ExportSpectrogram(const Waveform &wave, const StftParams &params,
                       const std::string &path);

struct Graymap {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, top row first
};
Graymap SpectrogramImage(const Waveform &wave, const StftParams &params);
std::string EncodePgm(const Graymap &image);

/// Fixed four-decimal rendering used in every report cell.
std::string FormatCell(double v);

std::string SnrTableCsv(const SnrTable &table);
std::string AccuracyGridCsv(const AccuracyGrid &grid);
void WriteReport(const SnrTable &table, const std::string &path);
void WriteReport(const AccuracyGrid &grid, const std::string &path);

/// RFC-4180 reader, enough for the files written above.
std::vector<std::vector<std::string>> ParseCsv(std::string_view text);

}  // namespace clearspeech

#endif  // CLEARSPEECH_EVALKIT_H_
