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

#include "clearspeech/config.h"

#include <charconv>
#include <fstream>
#include <sstream>

namespace clearspeech {

namespace {

std::string_view Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T ParseNumber(std::string_view key, std::string_view value, int line) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw Error(ErrorCode::kSyntaxError, "line " + std::to_string(line) + ": bad value for '" +
                                             std::string(key) + "': " + std::string(value));
  return out;
}

}  // namespace

NoiseSource ParseNoiseSource(std::string_view name) {
  if (name == "leading") return NoiseSource::kLeadingFrames;
  if (name == "vad") return NoiseSource::kVadGuided;
  if (name == "oracle") return NoiseSource::kOracle;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown noise source '" + std::string(name) + "' (leading, vad, oracle)");
}

std::string_view NoiseSourceName(NoiseSource source) {
  switch (source) {
    case NoiseSource::kLeadingFrames: return "leading";
    case NoiseSource::kVadGuided: return "vad";
    case NoiseSource::kOracle: return "oracle";
  }
  return "?";
}

void PipelineConfig::Validate() const {
  frame.Validate();
  if (!stages.empty()) ParseStages(stages);
  if (n_states < 1) throw Error(ErrorCode::kInvalidArgument, "states must be >= 1");
  if (max_iters < 0) throw Error(ErrorCode::kInvalidArgument, "iters must be >= 0");
  if (n_train < 1) throw Error(ErrorCode::kInvalidArgument, "n_train must be >= 1");
}

RecognitionConfig PipelineConfig::ToRecognitionConfig() const {
  Validate();
  RecognitionConfig cfg;
  cfg.frame = frame;
  if (!stages.empty()) cfg.enhance = ParseStages(stages);
  cfg.noise_source = noise_source;
  cfg.n_states = n_states;
  cfg.max_iters = max_iters;
  cfg.tol = tol;
  return cfg;
}

PipelineConfig ParsePipelineConfig(std::string_view text, PipelineConfig cfg) {
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = Trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::kSyntaxError,
                  "line " + std::to_string(line_no) + ": expected key=value");
    const std::string_view key = Trim(line.substr(0, eq));
    const std::string_view value = Trim(line.substr(eq + 1));
    if (key == "stages") cfg.stages = std::string(value);
    else if (key == "window") cfg.frame.window_len = ParseNumber<int>(key, value, line_no);
    else if (key == "overlap") cfg.frame.overlap_pct = ParseNumber<double>(key, value, line_no);
    else if (key == "fft_size") cfg.frame.fft_size = ParseNumber<int>(key, value, line_no);
    else if (key == "noise_source") cfg.noise_source = ParseNoiseSource(value);
    else if (key == "noise_frames") cfg.noise_frames = ParseNumber<std::size_t>(key, value, line_no);
    else if (key == "states") cfg.n_states = ParseNumber<int>(key, value, line_no);
    else if (key == "iters") cfg.max_iters = ParseNumber<int>(key, value, line_no);
    else if (key == "tol") cfg.tol = ParseNumber<double>(key, value, line_no);
    else if (key == "n_train") cfg.n_train = ParseNumber<int>(key, value, line_no);
    else if (key == "models") cfg.model_dir = std::string(value);
    else if (key == "seed") cfg.seed = ParseNumber<std::uint64_t>(key, value, line_no);
    else
      throw Error(ErrorCode::kSyntaxError, "line " + std::to_string(line_no) +
                                               ": unknown key '" + std::string(key) + "'");
  }
  cfg.Validate();
  return cfg;
}

PipelineConfig LoadPipelineConfig(const std::string &path, PipelineConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return ParsePipelineConfig(os.str(), std::move(base));
}

}  // namespace clearspeech
