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

// Command-line front end. Every subcommand is a thin adapter over the
// library; numeric work happens there.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "clearspeech/audio.h"
#include "clearspeech/config.h"
#include "clearspeech/enhance.h"
#include "clearspeech/evalkit.h"
#include "clearspeech/features.h"
#include "clearspeech/filterbank.h"
#include "clearspeech/fis.h"
#include "clearspeech/hmm.h"
#include "clearspeech/hybrid.h"
#include "clearspeech/rng.h"
#include "clearspeech/vad.h"

namespace cs = clearspeech;
namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

// A flag whose value is malformed; reported with the subcommand synopsis.
struct UsageError : std::runtime_error {
  UsageError(const std::string &flag, const std::string &msg)
      : std::runtime_error(flag + ": " + msg) {}
};

std::uint64_t DefaultSeed() {
  if (const char *env = std::getenv("CLEARSPEECH_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception &) {
    }
    throw UsageError("CLEARSPEECH_SEED", "not an unsigned integer: " + std::string(env));
  }
  return 1;
}

std::vector<std::string> SplitOn(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

template <typename T>
std::vector<T> NumberList(const std::string &flag, const std::string &s) {
  std::vector<T> out;
  for (const auto &item : SplitOn(s, ',')) {
    std::istringstream in(item);
    T v{};
    if (!(in >> v) || !in.eof()) throw UsageError(flag, "not a number: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError(flag, "empty list");
  return out;
}

template <typename Fn>
auto AsUsage(const std::string &flag, Fn &&fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const cs::Error &e) {
    throw UsageError(flag, e.what());
  }
}

void WriteText(const std::string &path, const std::string &text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    cs::WriteFileAtomic(path, text);
  }
}

void WriteWavAtomic(const cs::Waveform &wave, const std::string &path) {
  const auto bytes = cs::EncodeWav(wave);
  cs::WriteFileAtomic(path, std::string_view(reinterpret_cast<const char *>(bytes.data()),
                                             bytes.size()));
}

cs::StftParams MakeStft(int frame, int hop, int fft) {
  cs::StftParams p;
  p.frame_len = frame;
  p.hop = hop;
  p.fft_size = fft;
  AsUsage("--frame/--hop/--fft", [&] { p.Validate(); return 0; });
  return p;
}

std::string FeatureText(const cs::FeatureMatrix &m) {
  std::string out;
  char buf[40];
  for (int r = 0; r < cs::FeatureMatrix::kRows; ++r) {
    for (int c = 0; c < cs::FeatureMatrix::kCols; ++c) {
      std::snprintf(buf, sizeof(buf), "%s%.17g", c ? "," : "", m(r, c));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::string ConfigText(const cs::PipelineConfig &cfg) {
  std::ostringstream os;
  os.precision(17);
  os << "stages=" << cfg.stages << '\n'
     << "window=" << cfg.frame.window_len << '\n'
     << "overlap=" << cfg.frame.overlap_pct << '\n'
     << "fft_size=" << cfg.frame.fft_size << '\n'
     << "noise_source=" << cs::NoiseSourceName(cfg.noise_source) << '\n'
     << "noise_frames=" << cfg.noise_frames << '\n'
     << "states=" << cfg.n_states << '\n'
     << "iters=" << cfg.max_iters << '\n'
     << "tol=" << cfg.tol << '\n'
     << "n_train=" << cfg.n_train << '\n';
  return os.str();
}

fs::path ModelPath(const std::string &dir, int label) {
  return fs::path(dir) / ("word_" + std::to_string(label) + ".hmm");
}

std::vector<cs::HmmModel> LoadModels(const std::string &dir) {
  std::vector<cs::HmmModel> models;
  if (!fs::is_directory(dir)) throw cs::Error(cs::ErrorCode::kIoFailure, "no model directory " + dir);
  std::vector<fs::path> files;
  for (const auto &entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".hmm") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto &p : files) models.push_back(cs::LoadModel(p.string()));
  if (models.empty()) throw cs::Error(cs::ErrorCode::kNoModels, "no *.hmm files in " + dir);
  std::sort(models.begin(), models.end(),
            [](const cs::HmmModel &a, const cs::HmmModel &b) { return a.label < b.label; });
  return models;
}

// Options shared by the pipeline subcommands; explicit flags win over the
// --config file.
struct PipelineFlags {
  std::string config_path;
  std::optional<std::string> stages;
  std::optional<int> window;
  std::optional<double> overlap;
  std::optional<std::string> noise_source;
  std::optional<int> states;
  std::optional<int> iters;
  std::optional<int> n_train;

  void Add(CLI::App *app, bool training) {
    app->add_option("--config", config_path, "key=value pipeline file");
    app->add_option("--stages", stages, "front-end stage list, e.g. nlms,logmmse");
    app->add_option("--window", window, "analysis window in samples");
    app->add_option("--overlap", overlap, "frame overlap in percent");
    app->add_option("--noise-source", noise_source, "leading | vad | oracle");
    app->add_option("--n-train", n_train, "utterances per word used for training");
    if (training) {
      app->add_option("--states", states, "HMM states per word");
      app->add_option("--iters", iters, "maximum training iterations");
    }
  }

  cs::PipelineConfig Resolve(cs::PipelineConfig base = {}) const {
    cs::PipelineConfig cfg =
        config_path.empty() ? base : cs::LoadPipelineConfig(config_path, base);
    if (stages) cfg.stages = *stages;
    if (window) cfg.frame.window_len = *window;
    if (overlap) cfg.frame.overlap_pct = *overlap;
    if (noise_source) cfg.noise_source = AsUsage("--noise-source", [&] {
      return cs::ParseNoiseSource(*noise_source);
    });
    if (states) cfg.n_states = *states;
    if (iters) cfg.max_iters = *iters;
    if (n_train) cfg.n_train = *n_train;
    AsUsage("--config", [&] { cfg.Validate(); return 0; });
    return cfg;
  }
};

struct Command {
  CLI::App *app;
  std::string synopsis;
  std::function<void()> run;
};

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"ClearSpeech: speech enhancement and isolated-word recognition toolkit",
               "clearspeech"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");
  std::vector<Command> commands;

  // synth ------------------------------------------------------------------
  std::string synth_out;
  std::optional<std::uint64_t> synth_seed;
  int synth_tokens = 10, synth_rate = cs::kDefaultSampleRate;
  {
    auto *c = app.add_subcommand("synth", "Write a seeded synthetic ten-word corpus");
    c->add_option("--out", synth_out, "output directory")->required();
    c->add_option("--seed", synth_seed, "corpus seed (default: $CLEARSPEECH_SEED or 1)");
    c->add_option("--tokens", synth_tokens, "utterances per word")->check(CLI::PositiveNumber);
    c->add_option("--rate", synth_rate, "sample rate in Hz")->check(CLI::PositiveNumber);
    commands.push_back({c, "clearspeech synth --out DIR [--seed N] [--tokens N]", [&] {
      const auto seed = synth_seed.value_or(DefaultSeed());
      cs::WriteSynthCorpus(synth_out, seed, synth_tokens, synth_rate);
      std::cout << (fs::path(synth_out) / "manifest.tsv").string() << '\n';
    }});
  }

  // vad --------------------------------------------------------------------
  std::string vad_in, vad_out;
  bool vad_labels = false;
  cs::VadParams vad_params;
  {
    auto *c = app.add_subcommand("vad", "Endpoint detection and voiced/unvoiced/silence labels");
    c->add_option("--in", vad_in, "input WAV")->required();
    c->add_option("--out", vad_out, "write the trimmed utterance here");
    c->add_flag("--labels", vad_labels, "print per-frame energy, zcr and label");
    c->add_option("--frame-ms", vad_params.frame_ms, "frame length in ms");
    c->add_option("--zcr-threshold", vad_params.zcr_threshold, "voiced/unvoiced zcr split");
    commands.push_back({c, "clearspeech vad --in WAV [--out WAV] [--labels]", [&] {
      AsUsage("--frame-ms", [&] { vad_params.Validate(); return 0; });
      const auto wave = cs::ReadWav(vad_in);
      const auto ep = cs::DetectEndpoints(wave, vad_params);
      const double rate = wave.sample_rate;
      char buf[128];
      std::snprintf(buf, sizeof(buf), "begin_sample,end_sample,begin_s,end_s\n%zu,%zu,%.4f,%.4f\n",
                    ep.begin, ep.end, ep.begin / rate, ep.end / rate);
      std::cout << buf;
      if (vad_labels) {
        std::cout << "frame_index,energy,zcr,label\n";
        const auto frames = cs::LabelFrames(wave, vad_params);
        for (std::size_t i = 0; i < frames.size(); ++i) {
          std::snprintf(buf, sizeof(buf), "%zu,%.6e,%.4f,%s\n", i, frames[i].energy,
                        frames[i].zcr, std::string(cs::VusName(frames[i].label)).c_str());
          std::cout << buf;
        }
      }
      if (!vad_out.empty()) WriteWavAtomic(cs::TrimToVoiced(wave, vad_params), vad_out);
    }});
  }

  // filter -----------------------------------------------------------------
  std::string filt_in, filt_out, filt_type = "lowpass", filt_cutoff;
  int filt_taps = 101;
  {
    auto *c = app.add_subcommand("filter", "Windowed-sinc FIR filtering");
    c->add_option("--in", filt_in, "input WAV")->required();
    c->add_option("--out", filt_out, "output WAV")->required();
    c->add_option("--type", filt_type, "lowpass | highpass | bandpass | bandstop");
    c->add_option("--cutoff", filt_cutoff, "edge frequency in Hz (two, comma-separated, for band filters)")
        ->required();
    c->add_option("--taps", filt_taps, "odd number of taps");
    commands.push_back({c, "clearspeech filter --in WAV --out WAV --type KIND --cutoff HZ[,HZ]", [&] {
      static const std::map<std::string, cs::FirKind> kinds = {
          {"lowpass", cs::FirKind::kLowPass}, {"highpass", cs::FirKind::kHighPass},
          {"bandpass", cs::FirKind::kBandPass}, {"bandstop", cs::FirKind::kBandStop}};
      const auto it = kinds.find(filt_type);
      if (it == kinds.end()) throw UsageError("--type", "unknown filter type '" + filt_type + "'");
      const auto wave = cs::ReadWav(filt_in);
      cs::FirSpec spec;
      spec.kind = it->second;
      spec.edge_hz = NumberList<double>("--cutoff", filt_cutoff);
      spec.num_taps = filt_taps;
      spec.sample_rate = wave.sample_rate;
      const auto taps = AsUsage("--cutoff/--taps", [&] { return cs::DesignFir(spec); });
      WriteWavAtomic(cs::ApplyFir(wave, taps), filt_out);
    }});
  }

  // anc --------------------------------------------------------------------
  std::string anc_in, anc_ref, anc_out, anc_algo = "nlms";
  std::optional<double> anc_mu;
  int anc_order = 32;
  {
    auto *c = app.add_subcommand("anc", "Adaptive noise cancellation with a reference input");
    c->add_option("--in", anc_in, "primary (speech + noise) WAV")->required();
    c->add_option("--ref", anc_ref, "noise reference WAV")->required();
    c->add_option("--out", anc_out, "output WAV")->required();
    c->add_option("--algo", anc_algo, "lms | nlms");
    c->add_option("--mu", anc_mu, "step size (lms 0.01, nlms 0.1)");
    c->add_option("--order", anc_order, "filter length")->check(CLI::PositiveNumber);
    commands.push_back({c, "clearspeech anc --in WAV --ref WAV --out WAV [--algo nlms] [--mu X]", [&] {
      if (anc_algo != "lms" && anc_algo != "nlms")
        throw UsageError("--algo", "expected lms or nlms");
      const auto primary = cs::ReadWav(anc_in);
      const auto ref = cs::ReadWav(anc_ref);
      cs::AdaptiveParams p;
      p.order = anc_order;
      p.mu = anc_mu.value_or(anc_algo == "lms" ? 0.01 : 0.1);
      const auto result = anc_algo == "lms" ? cs::LmsCancel(primary, ref, p)
                                            : cs::NlmsCancel(primary, ref, p);
      WriteWavAtomic(result.enhanced, anc_out);
      std::printf("erle_db %.4f\n", cs::ErleDb(primary, result.enhanced));
    }});
  }

  // enhance / hybrid -------------------------------------------------------
  std::string enh_in, enh_out, enh_method = "logmmse", enh_noise, enh_ref,
              enh_source = "leading";
  std::optional<double> enh_alpha, enh_beta, enh_dd_alpha;
  std::optional<int> enh_bands, enh_ar_order, enh_iterations;
  std::size_t enh_noise_frames = 10;
  int enh_frame = 256, enh_hop = 128, enh_fft = 256;
  auto run_pipeline = [&](const std::string &stage_text, const std::string &flag) {
    auto stages = AsUsage(flag, [&] { return cs::ParseStages(stage_text); });
    for (auto &s : stages) {
      if (s.kind != cs::StageKind::kEnhance) continue;
      if (enh_alpha) s.enhance.alpha = *enh_alpha;
      if (enh_beta) s.enhance.beta = *enh_beta;
      if (enh_dd_alpha) s.enhance.dd_alpha = *enh_dd_alpha;
      if (enh_bands) s.enhance.bands = *enh_bands;
      if (enh_ar_order) s.enhance.ar_order = *enh_ar_order;
      if (enh_iterations) s.enhance.iterations = *enh_iterations;
      AsUsage("--alpha/--beta/--dd-alpha/--bands/--ar-order/--iterations", [&] { s.enhance.Validate(); return 0; });
    }
    cs::HybridContext ctx;
    ctx.noise_source = AsUsage("--noise-source", [&] { return cs::ParseNoiseSource(enh_source); });
    ctx.noise_frames = enh_noise_frames;
    ctx.stft = MakeStft(enh_frame, enh_hop, enh_fft);
    if (!enh_noise.empty()) ctx.noise = cs::ReadWav(enh_noise);
    if (!enh_ref.empty()) ctx.reference = cs::ReadWav(enh_ref);
    if (ctx.noise_source == cs::NoiseSource::kOracle && !ctx.noise)
      throw UsageError("--noise-source", "oracle needs --noise WAV");
    for (const auto &s : stages)
      if ((s.kind == cs::StageKind::kLms || s.kind == cs::StageKind::kNlms) && !ctx.reference)
        throw UsageError("--ref", s.Name() + " stage needs a noise reference");
    WriteWavAtomic(cs::RunHybrid(cs::ReadWav(enh_in), stages, ctx), enh_out);
  };
  auto add_enhance_flags = [&](CLI::App *c) {
    c->add_option("--in", enh_in, "noisy input WAV")->required();
    c->add_option("--out", enh_out, "enhanced output WAV")->required();
    c->add_option("--noise-source", enh_source, "leading | vad | oracle");
    c->add_option("--noise", enh_noise, "noise-only WAV for the oracle PSD");
    c->add_option("--noise-frames", enh_noise_frames, "leading frames assumed noise");
    c->add_option("--alpha", enh_alpha, "fixed oversubtraction factor");
    c->add_option("--beta", enh_beta, "spectral floor");
    c->add_option("--dd-alpha", enh_dd_alpha, "decision-directed smoothing");
    c->add_option("--bands", enh_bands, "Kamath band count");
    c->add_option("--ar-order", enh_ar_order, "Kalman AR order");
    c->add_option("--iterations", enh_iterations, "Kalman iterations");
    c->add_option("--frame", enh_frame, "STFT frame length");
    c->add_option("--hop", enh_hop, "STFT hop");
    c->add_option("--fft", enh_fft, "FFT size");
  };
  {
    auto *c = app.add_subcommand("enhance", "Single-channel speech enhancement");
    add_enhance_flags(c);
    c->add_option("--variant,--method", enh_method,
                  "boll | berouti | sim | kamath | wiener | mmse | logmmse | omlsa | kalman");
    commands.push_back({c, "clearspeech enhance --in WAV --out WAV --variant NAME", [&] {
      if (!cs::ParseVariant(enh_method))
        throw UsageError("--variant", "unknown variant '" + enh_method + "'");
      run_pipeline(enh_method, "--variant");
    }});
  }
  std::string hyb_stages;
  {
    auto *c = app.add_subcommand("hybrid", "Chain filtering, adaptive and enhancement stages");
    add_enhance_flags(c);
    c->add_option("--stages", hyb_stages, "comma-separated stages, e.g. nlms,logmmse")->required();
    c->add_option("--ref", enh_ref, "noise reference WAV for lms/nlms stages");
    commands.push_back({c, "clearspeech hybrid --in WAV --out WAV --stages LIST [--ref WAV]",
                        [&] { run_pipeline(hyb_stages, "--stages"); }});
  }

  // mfcc -------------------------------------------------------------------
  std::string mfcc_in, mfcc_out;
  int mfcc_window = 245, mfcc_fft = 512;
  double mfcc_overlap = 45.0;
  bool mfcc_rasta = false, mfcc_cmn = false, mfcc_no_trim = false;
  {
    auto *c = app.add_subcommand("mfcc", "20x20 MFCC feature matrix");
    c->add_option("--in", mfcc_in, "input WAV")->required();
    c->add_option("--out", mfcc_out, "output text file (default: stdout)");
    c->add_option("--window", mfcc_window, "window length in samples");
    c->add_option("--overlap", mfcc_overlap, "overlap percent");
    c->add_option("--fft", mfcc_fft, "FFT size");
    c->add_flag("--rasta", mfcc_rasta, "RASTA-filter the log-mel trajectories");
    c->add_flag("--cmn", mfcc_cmn, "cepstral mean normalization");
    c->add_flag("--no-trim", mfcc_no_trim, "skip endpoint trimming");
    commands.push_back({c, "clearspeech mfcc --in WAV [--out FILE] [--window N --overlap P]", [&] {
      cs::RecognitionConfig cfg;
      cfg.frame.window_len = mfcc_window;
      cfg.frame.overlap_pct = mfcc_overlap;
      cfg.frame.fft_size = mfcc_fft;
      cfg.trim = !mfcc_no_trim;
      AsUsage("--window/--overlap/--fft", [&] { cfg.frame.Validate(); return 0; });
      cfg.rasta = mfcc_rasta;
      cfg.cmn = mfcc_cmn;
      const auto m = cs::Featurize(cs::ReadWav(mfcc_in), cfg).features;
      WriteText(mfcc_out, FeatureText(m));
    }});
  }

  // train / recognize ------------------------------------------------------
  std::string tr_manifest, tr_models;
  PipelineFlags tr_flags;
  {
    auto *c = app.add_subcommand("train", "Train one HMM per word from a manifest");
    c->add_option("--manifest", tr_manifest, "corpus manifest.tsv")->required();
    c->add_option("--models", tr_models, "model output directory");
    tr_flags.Add(c, true);
    commands.push_back({c, "clearspeech train --manifest TSV --models DIR [--config FILE]", [&] {
      auto cfg = tr_flags.Resolve();
      if (!tr_models.empty()) cfg.model_dir = tr_models;
      const auto corpus = cs::LoadCorpus(tr_manifest);
      const auto split = cs::SplitCorpus(corpus, cfg.n_train);
      const auto models = cs::TrainModels(split.train, cfg.ToRecognitionConfig());
      fs::create_directories(cfg.model_dir);
      for (const auto &m : models)
        cs::WriteFileAtomic(ModelPath(cfg.model_dir, m.label).string(), cs::SerializeModel(m));
      cs::WriteFileAtomic((fs::path(cfg.model_dir) / "pipeline.cfg").string(), ConfigText(cfg));
      std::cout << models.size() << " models written to " << cfg.model_dir << '\n';
    }});
  }
  std::string rec_models = "models", rec_in, rec_manifest;
  bool rec_all = false;
  PipelineFlags rec_flags;
  {
    auto *c = app.add_subcommand("recognize", "Recognize a WAV or score a manifest's test split");
    c->add_option("--models", rec_models, "directory written by train");
    auto *in = c->add_option("--in", rec_in, "single WAV to recognize");
    auto *man = c->add_option("--manifest", rec_manifest, "score the test split of a manifest");
    in->excludes(man);
    c->add_flag("--all", rec_all, "with --manifest, score every utterance");
    rec_flags.Add(c, false);
    commands.push_back({c, "clearspeech recognize --models DIR (--in WAV | --manifest TSV)", [&] {
      if (rec_in.empty() && rec_manifest.empty())
        throw UsageError("--in/--manifest", "one of them is required");
      const auto saved = fs::path(rec_models) / "pipeline.cfg";
      cs::PipelineConfig base;
      if (fs::exists(saved)) base = cs::LoadPipelineConfig(saved.string());
      const auto cfg = rec_flags.Resolve(base).ToRecognitionConfig();
      const auto models = LoadModels(rec_models);
      if (!rec_in.empty()) {
        std::cout << cs::Recognize(models, cs::Featurize(cs::ReadWav(rec_in), cfg).features) << '\n';
        return;
      }
      const auto corpus = cs::LoadCorpus(rec_manifest);
      const auto test =
          rec_all ? corpus : cs::SplitCorpus(corpus, rec_flags.Resolve(base).n_train).test;
      const auto score = cs::ScoreRecognition(models, test, cfg);
      std::cout << "correct " << score.correct << "\ntotal " << score.total
                << "\naccuracy " << cs::FormatCell(score.Accuracy()) << '\n';
    }});
  }

  // eval-snr ---------------------------------------------------------------
  std::string es_manifest, es_out, es_snrs = "0",
              es_methods = "boll;berouti;kamath;wiener;mmse;logmmse", es_source = "oracle",
              es_channel;
  std::vector<std::string> es_noise_files;
  std::optional<std::uint64_t> es_seed;
  int es_limit = 0;
  {
    auto *c = app.add_subcommand("eval-snr", "SNR-improvement table over noise conditions and methods");
    c->add_option("--manifest", es_manifest, "clean corpus (default: one synthetic token per word)");
    c->add_option("--out", es_out, "CSV report (default: stdout)");
    c->add_option("--snr", es_snrs, "comma-separated input SNRs in dB");
    c->add_option("--noise-file", es_noise_files, "noise recordings (repeatable)");
    c->add_option("--channel", es_channel, "FIR taps applied to the noise, comma-separated");
    c->add_option("--methods", es_methods, "';'-separated stage lists; 'none' is the identity");
    c->add_option("--noise-source", es_source, "noise PSD for enhancement stages");
    c->add_option("--seed", es_seed, "seed (default: $CLEARSPEECH_SEED or 1)");
    c->add_option("--limit", es_limit, "use only the first N clean utterances");
    commands.push_back({c, "clearspeech eval-snr [--manifest TSV] [--snr LIST] [--methods LIST] [--out CSV]", [&] {
      const auto seed = es_seed.value_or(DefaultSeed());
      std::vector<cs::Waveform> clean;
      if (!es_manifest.empty()) {
        for (auto &u : cs::LoadCorpus(es_manifest)) clean.push_back(std::move(u.wave));
      } else {
        for (int label = 0; label < 10; ++label)
          clean.push_back(cs::SynthWord(label, cs::TokenSeed(seed, label, 0)));
      }
      if (es_limit > 0 && static_cast<std::size_t>(es_limit) < clean.size())
        clean.resize(static_cast<std::size_t>(es_limit));
      std::vector<double> channel;
      if (!es_channel.empty()) channel = NumberList<double>("--channel", es_channel);
      std::vector<cs::NoiseSpec> noises;
      std::uint64_t k = 0;
      auto add_noise = [&](cs::NoiseKind kind, const std::string &path) {
        for (double snr : NumberList<double>("--snr", es_snrs)) {
          cs::NoiseSpec spec;
          spec.kind = kind;
          spec.path = path;
          spec.target_snr_db = snr;
          spec.seed = cs::DeriveSeed(seed, 0xE5, k++);
          spec.channel = channel;
          noises.push_back(spec);
        }
      };
      add_noise(cs::NoiseKind::kWhiteGaussian, "");
      for (const auto &p : es_noise_files) add_noise(cs::NoiseKind::kFileBacked, p);
      const auto source = AsUsage("--noise-source", [&] { return cs::ParseNoiseSource(es_source); });
      std::vector<cs::EnhanceMethod> methods;
      for (const auto &m : SplitOn(es_methods, ';')) {
        cs::EnhanceMethod method;
        method.label = m;
        method.noise_source = source;
        if (m != "none") method.stages = AsUsage("--methods", [&] { return cs::ParseStages(m); });
        methods.push_back(std::move(method));
      }
      WriteText(es_out, cs::SnrTableCsv(cs::SnrImprovementTable(clean, noises, methods)));
    }});
  }

  // eval-grid --------------------------------------------------------------
  std::string eg_manifest, eg_out, eg_windows = "240,245,250,255,260",
              eg_overlaps = "35,40,45,50,55";
  std::optional<double> eg_snr;
  std::optional<std::uint64_t> eg_seed;
  int eg_threads = 0;
  bool eg_no_reuse = false;
  PipelineFlags eg_flags;
  {
    auto *c = app.add_subcommand("eval-grid", "Accuracy grid over window and overlap, with the fuzzy optimum");
    c->add_option("--manifest", eg_manifest, "corpus manifest.tsv")->required();
    c->add_option("--out", eg_out, "CSV report (default: stdout)");
    c->add_option("--windows", eg_windows, "comma-separated window lengths");
    c->add_option("--overlaps", eg_overlaps, "comma-separated overlap percentages");
    c->add_option("--snr", eg_snr, "add white noise to the test material at this SNR");
    c->add_option("--seed", eg_seed, "noise seed (default: $CLEARSPEECH_SEED or 1)");
    c->add_option("--threads", eg_threads, "worker threads (0 = all cores)");
    c->add_flag("--no-reuse", eg_no_reuse, "do not reuse one training token per word in the test set");
    eg_flags.Add(c, true);
    commands.push_back({c, "clearspeech eval-grid --manifest TSV [--windows LIST] [--overlaps LIST] [--out CSV]", [&] {
      const auto cfg = eg_flags.Resolve();
      cs::GridOptions opt;
      opt.windows = NumberList<int>("--windows", eg_windows);
      opt.overlaps = NumberList<double>("--overlaps", eg_overlaps);
      opt.n_train = cfg.n_train;
      opt.reuse_one = !eg_no_reuse;
      opt.base = cfg.ToRecognitionConfig();
      opt.threads = eg_threads;
      if (eg_snr) {
        cs::NoiseSpec spec;
        spec.target_snr_db = *eg_snr;
        spec.seed = eg_seed.value_or(DefaultSeed());
        opt.noise = spec;
      }
      const auto grid = cs::ComputeAccuracyGrid(cs::LoadCorpus(eg_manifest), opt);
      WriteText(eg_out, cs::AccuracyGridCsv(grid));
      const auto best = cs::OptimizeParams(grid.Rows());
      std::cerr << "fuzzy optimum: window " << best.window_len << ", overlap "
                << best.overlap_pct << "%, predicted accuracy "
                << cs::FormatCell(best.predicted_accuracy)
                << (best.no_rule_fired ? " (no rule fired)" : "") << '\n';
    }});
  }

  // fis-eval ---------------------------------------------------------------
  std::string fis_file, fis_builtin, fis_inputs, fis_dump;
  {
    auto *c = app.add_subcommand("fis-eval", "Evaluate a Mamdani fuzzy inference system");
    auto *file = c->add_option("--fis", fis_file, "system in the bracketed text format");
    auto *builtin = c->add_option("--builtin", fis_builtin, "speech-accuracy");
    file->excludes(builtin);
    c->add_option("--inputs", fis_inputs, "comma-separated input values");
    c->add_option("--dump", fis_dump, "write the system in text form to this file ('-' = stdout)");
    commands.push_back({c, "clearspeech fis-eval (--fis FILE | --builtin speech-accuracy) --inputs X,Y,Z", [&] {
      cs::FisConfig fis;
      if (!fis_file.empty()) {
        fis = cs::LoadFis(fis_file);
      } else if (fis_builtin == "speech-accuracy") {
        fis = cs::SpeechAccuracyFis();
      } else {
        throw UsageError("--builtin", fis_builtin.empty() ? "one of --fis or --builtin is required"
                                                         : "unknown system '" + fis_builtin + "'");
      }
      if (!fis_dump.empty()) WriteText(fis_dump, cs::SerializeFis(fis));
      if (fis_inputs.empty()) {
        if (fis_dump.empty()) throw UsageError("--inputs", "required");
        return;
      }
      const auto inputs = NumberList<double>("--inputs", fis_inputs);
      const auto out = AsUsage("--inputs", [&] { return cs::Evaluate(fis, inputs); });
      for (std::size_t o = 0; o < out.crisp.size(); ++o) {
        std::cout << cs::FormatCell(out.crisp[o]) << '\n';
        if (out.no_rule_fired[o])
          std::cerr << "warning: no rule fired for " << fis.outputs[o].name
                    << "; returned the range midpoint\n";
      }
      for (std::size_t r = 0; r < out.rule_strengths.size(); ++r)
        std::cout << "rule " << r + 1 << ' ' << cs::FormatCell(out.rule_strengths[r]) << '\n';
    }});
  }

  // spectrogram ------------------------------------------------------------
  std::string sp_in, sp_out;
  int sp_frame = 256, sp_hop = 128, sp_fft = 256;
  {
    auto *c = app.add_subcommand("spectrogram", "Log-magnitude spectrogram as a PGM image");
    c->add_option("--in", sp_in, "input WAV")->required();
    c->add_option("--out", sp_out, "output .pgm")->required();
    c->add_option("--frame", sp_frame, "STFT frame length");
    c->add_option("--hop", sp_hop, "STFT hop");
    c->add_option("--fft", sp_fft, "FFT size");
    commands.push_back({c, "clearspeech spectrogram --in WAV --out PGM", [&] {
      cs::ExportSpectrogram(cs::ReadWav(sp_in), MakeStft(sp_frame, sp_hop, sp_fft), sp_out);
    }});
  }

  auto synopsis_of = [&]() -> std::string {
    for (const auto &cmd : commands)
      if (cmd.app->parsed()) return cmd.synopsis;
    return "clearspeech <subcommand> [options]; see --help";
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    if (argc <= 1) {
      std::cerr << app.help();
    } else {
      std::cerr << "error: " << e.what() << "\nusage: " << synopsis_of() << '\n';
    }
    return kExitUsage;
  }

  try {
    for (const auto &cmd : commands)
      if (cmd.app->parsed()) cmd.run();
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << "\nusage: " << synopsis_of() << '\n';
    return kExitUsage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
