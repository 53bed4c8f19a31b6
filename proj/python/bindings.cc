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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "clearspeech/audio.h"
#include "clearspeech/enhance.h"
#include "clearspeech/fft.h"
#include "clearspeech/evalkit.h"
#include "clearspeech/features.h"
#include "clearspeech/filterbank.h"
#include "clearspeech/fis.h"
#include "clearspeech/hmm.h"
#include "clearspeech/hybrid.h"
#include "clearspeech/vad.h"

namespace py = pybind11;
namespace cs = clearspeech;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

cs::Waveform ToWave(const Array &a, int sample_rate) {
  if (a.ndim() != 1) throw py::value_error("expected a 1-D array of samples");
  return cs::Waveform(std::vector<double>(a.data(), a.data() + a.size()), sample_rate);
}

Array ToArray(const std::vector<double> &v) {
  Array out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

Array MatrixArray(const cs::FeatureMatrix &m) {
  Array out({cs::FeatureMatrix::kRows, cs::FeatureMatrix::kCols});
  auto view = out.mutable_unchecked<2>();
  for (int r = 0; r < cs::FeatureMatrix::kRows; ++r)
    for (int c = 0; c < cs::FeatureMatrix::kCols; ++c) view(r, c) = m(r, c);
  return out;
}

cs::FrameParams Frame(int window, double overlap) {
  cs::FrameParams p;
  p.window_len = window;
  p.overlap_pct = overlap;
  p.Validate();
  return p;
}

}  // namespace

PYBIND11_MODULE(_clearspeech, m) {
  m.doc() = "Speech enhancement, MFCC/HMM word recognition and fuzzy parameter selection";

  py::register_exception<cs::Error>(m, "Error", PyExc_RuntimeError);

  m.attr("DEFAULT_SAMPLE_RATE") = cs::kDefaultSampleRate;

  // Audio.
  m.def("read_wav", [](const std::string &path) {
        const auto w = cs::ReadWav(path);
        return py::make_tuple(ToArray(w.samples), w.sample_rate);
      }, py::arg("path"), "Returns (samples, sample_rate).");
  m.def("write_wav", [](const std::string &path, const Array &samples, int sample_rate) {
        cs::WriteWav(ToWave(samples, sample_rate), path);
      }, py::arg("path"), py::arg("samples"), py::arg("sample_rate") = cs::kDefaultSampleRate);
  m.def("snr_db", [](const Array &ref, const Array &test) {
        return cs::SnrDb(ToWave(ref, cs::kDefaultSampleRate), ToWave(test, cs::kDefaultSampleRate));
      }, py::arg("reference"), py::arg("test"));
  m.def("mix_at_snr", [](const Array &clean, const Array &noise, double snr_db) {
        return ToArray(cs::MixAtSnr(ToWave(clean, cs::kDefaultSampleRate),
                                    ToWave(noise, cs::kDefaultSampleRate), snr_db).samples);
      }, py::arg("clean"), py::arg("noise"), py::arg("snr_db"));
  m.def("white_noise", [](std::size_t length, std::uint64_t seed) {
        return ToArray(cs::GenWhiteNoise(length, seed).samples);
      }, py::arg("length"), py::arg("seed"));
  m.def("synth_word", [](int label, std::uint64_t seed) {
        return ToArray(cs::SynthWord(label, seed).samples);
      }, py::arg("label"), py::arg("seed"), "Synthetic three-formant word at 8 kHz.");
  m.def("token_seed", &cs::TokenSeed, py::arg("corpus_seed"), py::arg("label"), py::arg("utterance"));
  m.def("write_synth_corpus", [](const std::string &dir, std::uint64_t seed, int tokens) {
        cs::WriteSynthCorpus(dir, seed, tokens);
      }, py::arg("dir"), py::arg("seed"), py::arg("tokens_per_word") = 10);

  // Endpoints and filtering.
  m.def("detect_endpoints", [](const Array &samples, int sample_rate) {
        const auto ep = cs::DetectEndpoints(ToWave(samples, sample_rate), cs::VadParams{});
        return py::make_tuple(ep.begin, ep.end);
      }, py::arg("samples"), py::arg("sample_rate") = cs::kDefaultSampleRate);
  m.def("design_lowpass", [](double cutoff_hz, int taps, int sample_rate) {
        cs::FirSpec spec;
        spec.edge_hz = {cutoff_hz};
        spec.num_taps = taps;
        spec.sample_rate = sample_rate;
        return ToArray(cs::DesignFir(spec));
      }, py::arg("cutoff_hz"), py::arg("taps") = 101, py::arg("sample_rate") = cs::kDefaultSampleRate);
  m.def("nlms_cancel", [](const Array &primary, const Array &reference, int order, double mu) {
        cs::AdaptiveParams p;
        p.order = order;
        p.mu = mu;
        const auto pw = ToWave(primary, cs::kDefaultSampleRate);
        const auto r = cs::NlmsCancel(pw, ToWave(reference, cs::kDefaultSampleRate), p);
        return py::make_tuple(ToArray(r.enhanced.samples), ToArray(r.final_weights),
                              cs::ErleDb(pw, r.enhanced));
      }, py::arg("primary"), py::arg("reference"), py::arg("order") = 32, py::arg("mu") = 0.1,
      "Returns (error_signal, final_weights, erle_db).");

  // Enhancement.
  m.def("stft_roundtrip", [](const Array &samples, int frame, int hop) {
        cs::StftParams p;
        p.frame_len = frame;
        p.hop = hop;
        p.fft_size = static_cast<int>(cs::NextPowerOfTwo(static_cast<std::size_t>(frame)));
        return ToArray(cs::Istft(cs::Stft(ToWave(samples, cs::kDefaultSampleRate), p)).samples);
      }, py::arg("samples"), py::arg("frame") = 256, py::arg("hop") = 128);
  m.def("enhance", [](const Array &noisy, const std::string &stages, std::optional<Array> noise,
                      std::optional<Array> reference, const std::string &noise_source,
                      int sample_rate) {
        cs::HybridContext ctx;
        if (noise) ctx.noise = ToWave(*noise, sample_rate);
        if (reference) ctx.reference = ToWave(*reference, sample_rate);
        if (noise_source == "oracle") ctx.noise_source = cs::NoiseSource::kOracle;
        else if (noise_source == "vad") ctx.noise_source = cs::NoiseSource::kVadGuided;
        else if (noise_source == "leading") ctx.noise_source = cs::NoiseSource::kLeadingFrames;
        else throw py::value_error("noise_source must be leading, vad or oracle");
        return ToArray(cs::RunHybrid(ToWave(noisy, sample_rate), cs::ParseStages(stages, sample_rate),
                                     ctx).samples);
      }, py::arg("noisy"), py::arg("stages"), py::arg("noise") = py::none(),
      py::arg("reference") = py::none(), py::arg("noise_source") = "leading",
      py::arg("sample_rate") = cs::kDefaultSampleRate,
      "Runs a stage list such as 'logmmse' or 'nlms,logmmse'.");
  m.def("expint_e1", &cs::ExpIntE1, py::arg("x"));

  // Features and recognition.
  m.def("hamming_window", &cs::HammingWindow, py::arg("n"));
  m.def("mfcc", [](const Array &samples, int window, double overlap, int sample_rate) {
        return MatrixArray(cs::ExtractFeatures(ToWave(samples, sample_rate), Frame(window, overlap)));
      }, py::arg("samples"), py::arg("window") = 245, py::arg("overlap") = 45.0,
      py::arg("sample_rate") = cs::kDefaultSampleRate, "20x20 MFCC matrix.");
  m.def("word_accuracy", &cs::WordAccuracy, py::arg("correct"), py::arg("total"));

  py::class_<cs::RecognitionConfig>(m, "RecognitionConfig")
      .def(py::init([](int window, double overlap, int states) {
             cs::RecognitionConfig c;
             c.frame = Frame(window, overlap);
             c.n_states = states;
             return c;
           }), py::arg("window") = 245, py::arg("overlap") = 45.0,
           py::arg("states") = cs::kDefaultStates);

  py::class_<cs::HmmModel>(m, "HmmModel")
      .def_readonly("label", &cs::HmmModel::label)
      .def_readonly("n_states", &cs::HmmModel::n_states)
      .def("serialize", &cs::SerializeModel)
      .def_static("deserialize", &cs::DeserializeModel);

  m.def("train_models", [](const std::vector<std::pair<int, Array>> &tokens,
                           const cs::RecognitionConfig &cfg) {
        std::vector<cs::Utterance> train;
        for (const auto &[label, samples] : tokens)
          train.push_back({label, 0, ToWave(samples, cs::kDefaultSampleRate)});
        return cs::TrainModels(train, cfg);
      }, py::arg("tokens"), py::arg("config") = cs::RecognitionConfig{},
      "Trains one HMM per label from (label, samples) pairs.");
  m.def("recognize", [](const std::vector<cs::HmmModel> &models, const Array &samples,
                        const cs::RecognitionConfig &cfg) {
        return cs::Recognize(models, cs::Featurize(ToWave(samples, cs::kDefaultSampleRate), cfg).features);
      }, py::arg("models"), py::arg("samples"), py::arg("config") = cs::RecognitionConfig{});

  // Fuzzy inference.
  py::class_<cs::FisConfig>(m, "FuzzySystem")
      .def_static("builtin", &cs::SpeechAccuracyFis, "The SpeechAccuracy system.")
      .def_static("parse", [](const std::string &text) { return cs::ParseFis(text); })
      .def_readonly("name", &cs::FisConfig::name)
      .def_property_readonly("num_inputs", [](const cs::FisConfig &f) { return f.inputs.size(); })
      .def_property_readonly("num_rules", [](const cs::FisConfig &f) { return f.rules.size(); })
      .def("serialize", &cs::SerializeFis)
      .def("evaluate", [](const cs::FisConfig &f, const std::vector<double> &inputs) {
        const auto out = cs::Evaluate(f, inputs);
        return py::make_tuple(out.crisp, out.rule_strengths, out.no_rule_fired);
      }, py::arg("inputs"), "Returns (crisp_outputs, rule_strengths, no_rule_fired).")
      .def("__eq__", [](const cs::FisConfig &a, const cs::FisConfig &b) { return a == b; });
  m.def("optimize_params", [](const std::vector<std::tuple<int, double, double, double>> &rows) {
        std::vector<cs::GridRow> grid;
        for (const auto &[w, o, snr, acc] : rows) grid.push_back({w, o, snr, acc});
        const auto best = cs::OptimizeParams(grid);
        return py::make_tuple(best.window_len, best.overlap_pct, best.predicted_accuracy);
      }, py::arg("grid"), "Rows are (window, overlap, snr_db, accuracy_pct).");
}
