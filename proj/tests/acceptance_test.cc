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

// End-to-end acceptance checks. Each criterion prints one PASS or FAIL line
// with its measurements and wall time; the exit status is nonzero if any
// criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "clearspeech/config.h"
#include "clearspeech/evalkit.h"
#include "clearspeech/features.h"
#include "clearspeech/filterbank.h"
#include "clearspeech/fis.h"
#include "clearspeech/hmm.h"
#include "clearspeech/hybrid.h"
#include "fis_oracle.h"
#include "hmm_oracle.h"
#include "test_util.h"

namespace cs = clearspeech;
namespace cst = clearspeech::testing;

namespace {

// A criterion body fills `detail` and returns whether its checks held.
struct Criterion {
  const char *name;
  double budget_s;
  std::function<bool(std::ostringstream &)> body;
};

std::vector<double> Gaussian(std::size_t n, double sigma, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> g(0.0, sigma);
  std::vector<double> x(n);
  for (auto &v : x) v = g(gen);
  return x;
}

bool StftRoundTrip(std::ostringstream &detail) {
  const auto x = Gaussian(80000, 0.3, 11);
  const cs::Waveform w(x, 8000);
  const auto y = cs::Istft(cs::Stft(w, cs::StftParams{}));
  if (y.size() != x.size()) return false;
  double worst = 0.0;
  for (std::size_t n = 256; n + 256 <= x.size(); ++n)
    worst = std::max(worst, std::abs(y.samples[n] - x[n]));
  detail << "interior max err " << worst;
  return worst <= 1e-6;
}

bool ViterbiOracle(std::ostringstream &detail) {
  std::mt19937_64 gen(200);
  std::uniform_int_distribution<int> states(1, 3), cols(1, 6), dims(1, 3);
  int checked = 0, prob_ok = 0, path_ok = 0;
  double worst = 0.0;
  while (checked < 200) {
    const int n = states(gen), t = cols(gen), d = dims(gen);
    if (n > 1 + 2 * (t - 1)) continue;  // no legal path exists
    const auto m = cst::RandomModel(n, d, gen);
    const auto obs = cst::RandomObservations(t, d, gen);
    const auto want = cst::BruteForceDecode(m, obs);
    const auto got = cs::Viterbi(m, obs);
    const double err = std::abs(got.log_prob - want.log_prob);
    worst = std::max(worst, err);
    prob_ok += err <= 1e-9;
    path_ok += got.path == want.path;
    ++checked;
  }
  detail << "models " << checked << ", log-prob matches " << prob_ok << ", paths match " << path_ok
         << ", worst " << worst;
  return prob_ok == checked && path_ok == checked;
}

bool FisFidelity(std::ostringstream &detail) {
  const auto fis = cs::SpeechAccuracyFis();
  const double mid = cs::Evaluate(fis, {30, 255, 45}).crisp[0];
  const double clean = cs::Evaluate(fis, {50, 255, 45}).crisp[0];
  const double oracle = cst::SpeechAccuracyOracle(50, 255, 45).crisp;
  const bool parsed = cs::LoadFis(std::string(CLEARSPEECH_TEST_DATA) + "/speech_accuracy.fis") == fis;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "(30,255,45) %.9f, (50,255,45) %.12f vs oracle %.12f, listing %s", mid,
                clean, oracle, parsed ? "equal" : "differs");
  detail << buf;
  return std::abs(mid - 97.5) <= 1e-6 && std::abs(clean - oracle) <= 1e-9 && parsed;
}

bool EnhancementGain(std::ostringstream &detail) {
  const auto clean = cs::SynthWord(5, 17);
  const auto noise = cs::GenWhiteNoise(clean.size(), 23);
  const auto noisy = cs::MixAtSnr(clean, noise, 0.0);
  std::vector<double> added(clean.size());
  for (std::size_t n = 0; n < added.size(); ++n) added[n] = noisy.samples[n] - clean.samples[n];
  const double before = cst::RefSnrDb(clean.samples, noisy.samples);
  const auto psd = cs::NoisePsdOf(cs::Waveform(added, 8000), cs::StftParams{});
  bool ok = true;
  detail << std::fixed;
  detail.precision(2);
  for (auto v : {cs::EnhanceVariant::kBoll, cs::EnhanceVariant::kBerouti, cs::EnhanceVariant::kKamath,
                 cs::EnhanceVariant::kWienerDD, cs::EnhanceVariant::kMmseStsa, cs::EnhanceVariant::kLogMmse}) {
    cs::EnhanceConfig cfg;
    cfg.variant = v;
    const auto out = cs::EnhanceWaveform(noisy, cfg, cs::StftParams{}, cs::KnownPsd{psd});
    const double gain = cst::RefSnrDb(clean.samples, out.samples) - before;
    detail << cs::VariantName(v) << " +" << gain << " ";
    ok = ok && gain >= 3.0;
  }

  // Noise reaching the microphone through the echo path, with the white
  // source available as the adaptive filter's reference.
  std::mt19937_64 gen(29);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> ref(clean.size());
  for (auto &v : ref) v = g(gen);
  auto heard = cst::Convolve(ref, cst::kEchoPath);
  const double scale = std::sqrt(cst::Power(clean.samples) / cst::Power(heard));
  for (auto &v : ref) v *= scale;
  for (auto &v : heard) v *= scale;
  std::vector<double> mixed(clean.size());
  for (std::size_t n = 0; n < mixed.size(); ++n) mixed[n] = clean.samples[n] + heard[n];
  const cs::Waveform echo_noisy(mixed, 8000);
  cs::HybridContext ctx;
  ctx.reference = cs::Waveform(ref, 8000);
  ctx.noise = cs::Waveform(heard, 8000);
  ctx.noise_source = cs::NoiseSource::kOracle;
  const double echo_before = cst::RefSnrDb(clean.samples, mixed);
  auto gain = [&](const char *stages) {
    return cst::RefSnrDb(clean.samples, cs::RunHybrid(echo_noisy, cs::ParseStages(stages), ctx).samples) -
           echo_before;
  };
  const double nlms = gain("nlms"), logmmse = gain("logmmse"), both = gain("nlms,logmmse");
  detail << "| nlms +" << nlms << " logmmse +" << logmmse << " nlms,logmmse +" << both;
  return ok && both >= std::max(nlms, logmmse) - 0.5;
}

bool Recognition(std::ostringstream &detail) {
  cst::TempDir dir;
  cs::WriteSynthCorpus(dir.path().string(), 1, 10);
  const auto corpus = cs::LoadCorpus(dir.File("manifest.tsv"));
  const auto split = cs::SplitCorpus(corpus, 5, false);

  cs::RecognitionConfig plain;
  plain.frame.window_len = 245;
  plain.frame.overlap_pct = 45.0;
  const auto models = cs::TrainModels(split.train, plain);
  const double train_acc = cs::ScoreRecognition(models, split.train, plain).Accuracy();
  const double test_acc = cs::ScoreRecognition(models, split.test, plain).Accuracy();

  cs::NoiseSpec noise;
  noise.target_snr_db = 5.0;
  noise.seed = 31;
  const double noisy_acc = cs::ScoreRecognition(models, split.test, plain, noise).Accuracy();
  cs::RecognitionConfig enhanced = plain;
  enhanced.enhance = cs::ParseStages("logmmse");
  const auto enhanced_models = cs::TrainModels(split.train, enhanced);
  const double enhanced_acc = cs::ScoreRecognition(enhanced_models, split.test, enhanced, noise).Accuracy();

  detail << "train " << cs::FormatCell(train_acc) << "%, test " << cs::FormatCell(test_acc)
         << "%, 5 dB raw " << cs::FormatCell(noisy_acc) << "%, 5 dB logmmse " << cs::FormatCell(enhanced_acc)
         << "%";
  return split.train.size() == 50 && split.test.size() == 50 && train_acc == 100.0 && test_acc >= 95.0 &&
         enhanced_acc >= noisy_acc;
}

bool NlmsConvergence(std::ostringstream &detail) {
  const auto task = cst::MakeChannelTask(10000, 7);
  cs::AdaptiveParams p;
  p.order = 4;
  p.mu = 0.5;
  const auto r = cs::NlmsCancel(task.primary, task.reference, p);
  const double mis = cst::Misalignment(r.final_weights, task.taps);
  const double erle = cs::ErleDb(task.primary, r.enhanced);
  detail << "misalignment " << mis << ", ERLE " << erle << " dB";
  return mis <= 0.05 && erle >= 10.0;
}

// E1 by its power series, summed in long double.
double E1Series(double x) {
  long double sum = 0.0L, term = 1.0L;
  for (int k = 1; k < 200; ++k) {
    term *= -static_cast<long double>(x) / k;
    sum += term / k;
  }
  return static_cast<double>(-0.57721566490153286060651209L - std::log(static_cast<long double>(x)) - sum);
}

bool Numerics(std::ostringstream &detail) {
  const auto w = cs::HammingWindow(245);
  const bool ends = w.front() == 0.54 - 0.46 && w.back() == 0.54 - 0.46;

  std::mt19937_64 gen(41);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  cs::FeatureMatrix f;
  for (int r = 0; r < cs::FeatureMatrix::kRows; ++r)
    for (int c = 0; c < cs::FeatureMatrix::kCols; ++c) f(r, c) = u(gen) + 50.0 * r;
  const auto z = cs::Cmn(f);
  double worst_mean = 0.0;
  for (int r = 0; r < cs::FeatureMatrix::kRows; ++r) {
    double mean = 0.0;
    for (int c = 0; c < cs::FeatureMatrix::kCols; ++c) mean += z(r, c);
    worst_mean = std::max(worst_mean, std::abs(mean / cs::FeatureMatrix::kCols));
  }

  const double level = 4.0;
  const auto dc = cs::RastaFilter({std::vector<double>(260, level)})[0];
  double rasta = 0.0;
  for (std::size_t n = 200; n < dc.size(); ++n) rasta = std::max(rasta, std::abs(dc[n]) / level);

  const double e1 = cs::ExpIntE1(1.0), series = E1Series(1.0);
  detail << "hamming ends " << w.front() << "/" << w.back() << ", CMN mean " << worst_mean << ", RASTA DC "
         << rasta << ", E1(1) " << e1 << " (series " << series << ")";
  return ends && worst_mean <= 1e-10 && rasta <= 1e-3 && std::abs(e1 - 0.219384) <= 1e-6 &&
         std::abs(e1 - series) <= 1e-6;
}

int Cli(const std::string &args) {
  const std::string cmd = std::string(CLEARSPEECH_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string TreeBytes(const std::filesystem::path &dir) {
  std::vector<std::filesystem::path> files;
  for (const auto &e : std::filesystem::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto &f : files) all += std::filesystem::relative(f, dir).string() + '\n' + cst::ReadBytes(f);
  return all;
}

// The grid report written in the determinism run, checked by criterion 9.
std::string g_grid_csv;

bool Determinism(std::ostringstream &detail) {
  cst::TempDir dir;
  bool ok = true;
  for (const char *run : {"1", "2"}) {
    const std::string r = dir.File(run);
    ok = ok && Cli("synth --out '" + r + "/corpus' --seed 7 --tokens 6") == 0;
    ok = ok && Cli("eval-snr --seed 7 --snr 0,5 --methods 'none;boll;wienerdd;nlms,logmmse' "
                   "--channel 0.5,-0.3,0.2,0.1 --limit 3 --out '" + r + "/snr.csv'") == 0;
    ok = ok && Cli("eval-grid --manifest '" + r + "/corpus/manifest.tsv' --seed 7 --windows 240,245 "
                   "--overlaps 40,45 --snr 10 --threads 4 --out '" + r + "/grid.csv'") == 0;
  }
  if (!ok) {
    detail << "a CLI run failed";
    return false;
  }
  const bool corpus = TreeBytes(dir.File("1/corpus")) == TreeBytes(dir.File("2/corpus"));
  const bool snr = cst::ReadBytes(dir.File("1/snr.csv")) == cst::ReadBytes(dir.File("2/snr.csv"));
  g_grid_csv = cst::ReadBytes(dir.File("1/grid.csv"));
  const bool grid = g_grid_csv == cst::ReadBytes(dir.File("2/grid.csv"));
  detail << "synth " << (corpus ? "identical" : "differs") << ", eval-snr " << (snr ? "identical" : "differs")
         << ", eval-grid " << (grid ? "identical" : "differs");
  return corpus && snr && grid;
}

bool WordAccuracyFormat(std::ostringstream &detail) {
  const double acc = cs::WordAccuracy(7, 10);
  bool cells_ok = !g_grid_csv.empty();
  const auto rows = cs::ParseCsv(g_grid_csv);
  const std::regex four(R"(-?\d+\.\d{4})");
  for (std::size_t r = 1; r < rows.size(); ++r)
    for (std::size_t c = 2; c < rows[r].size(); ++c) cells_ok = cells_ok && std::regex_match(rows[r][c], four);
  detail << "WordAccuracy(7,10) = " << cs::FormatCell(acc) << ", grid cells "
         << (cells_ok ? "four-decimal" : "malformed") << " over " << (rows.empty() ? 0 : rows.size() - 1)
         << " rows";
  return acc == 70.0 && cells_ok && rows.size() > 1;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"1 stft round trip", 1.0, StftRoundTrip},
      {"2 viterbi vs exhaustive search", 10.0, ViterbiOracle},
      {"3 fuzzy inference fidelity", 1.0, FisFidelity},
      {"4 enhancement snr gain", 30.0, EnhancementGain},
      {"5 end-to-end recognition", 120.0, Recognition},
      {"6 nlms convergence", 5.0, NlmsConvergence},
      {"7 numerics", 1.0, Numerics},
      {"8 cli determinism", 600.0, Determinism},
      {"9 word accuracy and report format", 1.0, WordAccuracyFormat},
  };
  int failed = 0;
  for (const auto &c : criteria) {
    std::ostringstream detail;
    bool ok = false;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      ok = c.body(detail);
    } catch (const std::exception &e) {
      detail << "threw: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_s;
    if (!in_time) detail << " [over the " << c.budget_s << " s budget]";
    ok = ok && in_time;
    failed += !ok;
    std::printf("%s  %-36s %7.3f s  %s\n", ok ? "PASS" : "FAIL", c.name, secs, detail.str().c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
