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

#include "clearspeech/hmm.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "clearspeech/audio.h"
#include "clearspeech/error.h"

namespace clearspeech {

namespace {

// Column boundary s of an n-way split of `cols` columns, rounded half up.
int SegmentBoundary(int s, int n, int cols) {
  return (2 * s * cols + n) / (2 * n);
}

double SafeLog(double p) { return p > 0.0 ? std::log(p) : kLogZero; }

// Fills means/variances of `model` from per-state column pools; states
// with no columns keep their previous parameters.
void EstimateEmissions(HmmModel &model,
                       const std::vector<std::vector<CepstralVector>> &pools) {
  for (int s = 0; s < model.n_states; ++s) {
    const auto &pool = pools[s];
    if (pool.empty()) continue;
    const auto count = static_cast<double>(pool.size());
    for (int d = 0; d < model.dim; ++d) {
      double mean = 0.0;
      for (const auto &x : pool) mean += x[d];
      mean /= count;
      double var = 0.0;
      for (const auto &x : pool) var += (x[d] - mean) * (x[d] - mean);
      var /= count;
      model.means[s][d] = mean;
      model.variances[s][d] = std::max(var, kVarianceFloor);
    }
  }
}

double TotalLogProb(const HmmModel &model,
                    const std::vector<std::vector<std::vector<double>>> &obs,
                    std::vector<Alignment> *paths) {
  double total = 0.0;
  if (paths) paths->clear();
  for (const auto &o : obs) {
    auto r = Viterbi(model, o);
    total += r.log_prob;
    if (paths) paths->push_back(std::move(r.path));
  }
  return total;
}

std::string FormatDouble(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double HmmModel::LogEmission(int state, std::span<const double> x) const {
  static const double kLog2Pi = std::log(2.0 * std::numbers::pi);
  double acc = 0.0;
  const auto &mu = means[state];
  const auto &var = variances[state];
  for (int d = 0; d < dim; ++d) {
    const double diff = x[d] - mu[d];
    acc += kLog2Pi + std::log(var[d]) + diff * diff / var[d];
  }
  return -0.5 * acc;
}

void HmmModel::Validate() const {
  const auto n = static_cast<std::size_t>(n_states);
  if (n_states < 1 || log_trans.size() != n || means.size() != n ||
      variances.size() != n)
    throw Error(ErrorCode::kBadModelFile, "model tables do not match n_states");
  for (int i = 0; i < n_states; ++i) {
    if (log_trans[i].size() != n ||
        means[i].size() != static_cast<std::size_t>(dim) ||
        variances[i].size() != static_cast<std::size_t>(dim))
      throw Error(ErrorCode::kBadModelFile, "ragged model tables");
    double row = 0.0;
    for (int j = 0; j < n_states; ++j) {
      if (!Allowed(i, j) && log_trans[i][j] != kLogZero)
        throw Error(ErrorCode::kBadModelFile, "non-Bakis transition");
      row += std::exp(log_trans[i][j]);
    }
    if (std::abs(row - 1.0) > 1e-9)
      throw Error(ErrorCode::kBadModelFile, "transition row does not sum to 1");
    for (double v : variances[i])
      if (!(v >= kVarianceFloor))
        throw Error(ErrorCode::kBadModelFile, "variance below floor");
  }
}

std::vector<std::vector<double>> Observations(const FeatureMatrix &features) {
  std::vector<std::vector<double>> obs(FeatureMatrix::kCols);
  for (int c = 0; c < FeatureMatrix::kCols; ++c) {
    auto col = features.Column(c);
    obs[c].assign(col.begin(), col.end());
  }
  return obs;
}

HmmModel InitUniform(int n_states, const std::vector<FeatureMatrix> &samples,
                     int label) {
  if (n_states < 1)
    throw Error(ErrorCode::kInvalidArgument, "n_states must be >= 1");
  if (n_states > FeatureMatrix::kCols)
    throw Error(ErrorCode::kTooManyStates,
                std::to_string(n_states) + " states exceed " +
                    std::to_string(FeatureMatrix::kCols) + " columns");
  if (samples.empty()) throw Error(ErrorCode::kNoData, "no training samples");

  HmmModel m;
  m.label = label;
  m.n_states = n_states;
  m.dim = kNumCepstra;
  const auto n = static_cast<std::size_t>(n_states);
  m.means.assign(n, std::vector<double>(kNumCepstra, 0.0));
  m.variances.assign(n, std::vector<double>(kNumCepstra, 1.0));
  m.log_trans.assign(n, std::vector<double>(n, kLogZero));

  std::vector<std::vector<CepstralVector>> pools(n);
  for (const auto &sample : samples)
    for (int s = 0; s < n_states; ++s)
      for (int c = SegmentBoundary(s, n_states, FeatureMatrix::kCols);
           c < SegmentBoundary(s + 1, n_states, FeatureMatrix::kCols); ++c)
        pools[s].push_back(sample.Column(c));
  EstimateEmissions(m, pools);

  for (int s = 0; s < n_states; ++s) {
    if (s == n_states - 1) {
      m.log_trans[s][s] = 0.0;
      continue;
    }
    const int dwell = SegmentBoundary(s + 1, n_states, FeatureMatrix::kCols) -
                      SegmentBoundary(s, n_states, FeatureMatrix::kCols);
    const double self = 1.0 - 1.0 / dwell;
    const double skip = s + 2 < n_states ? kSkipPrior : 0.0;
    m.log_trans[s][s] = SafeLog(self);
    m.log_trans[s][s + 1] = SafeLog(1.0 - self - skip);
    if (s + 2 < n_states) m.log_trans[s][s + 2] = SafeLog(skip);
  }
  return m;
}

ViterbiResult Viterbi(const HmmModel &model,
                      const std::vector<std::vector<double>> &obs) {
  const int n = model.n_states;
  const int t_max = static_cast<int>(obs.size());
  for (const auto &o : obs)
    if (o.size() != static_cast<std::size_t>(model.dim))
      throw Error(ErrorCode::kDimensionMismatch,
                  "observation dimension " + std::to_string(o.size()) +
                      " != model dimension " + std::to_string(model.dim));
  if (t_max == 0 || n > 1 + 2 * (t_max - 1))
    throw Error(ErrorCode::kNoLegalPath,
                std::to_string(n) + " states cannot be traversed in " +
                    std::to_string(t_max) + " columns");

  std::vector<std::vector<double>> delta(
      static_cast<std::size_t>(t_max), std::vector<double>(static_cast<std::size_t>(n), kLogZero));
  std::vector<std::vector<int>> back(
      static_cast<std::size_t>(t_max), std::vector<int>(static_cast<std::size_t>(n), -1));
  delta[0][0] = model.LogEmission(0, obs[0]);
  for (int t = 1; t < t_max; ++t) {
    for (int j = 0; j < n; ++j) {
      double best = kLogZero;
      int arg = -1;
      // Ascending predecessor order with strict '>' keeps the lower index
      // on ties.
      for (int i = std::max(0, j - 2); i <= j; ++i) {
        const double score = delta[t - 1][i] + model.log_trans[i][j];
        if (score > best) {
          best = score;
          arg = i;
        }
      }
      if (arg < 0) continue;
      delta[t][j] = best + model.LogEmission(j, obs[t]);
      back[t][j] = arg;
    }
  }
  ViterbiResult r;
  r.log_prob = delta[t_max - 1][n - 1];
  if (r.log_prob == kLogZero)
    throw Error(ErrorCode::kNoLegalPath, "no path reaches the final state");
  r.path.assign(static_cast<std::size_t>(t_max), 0);
  int state = n - 1;
  for (int t = t_max - 1; t >= 0; --t) {
    r.path[t] = state;
    if (t > 0) state = back[t][state];
  }
  return r;
}

ViterbiResult Viterbi(const HmmModel &model, const FeatureMatrix &features) {
  return Viterbi(model, Observations(features));
}

TrainResult TrainWithTrace(HmmModel model, const std::vector<FeatureMatrix> &samples,
                           int max_iters, double tol) {
  if (samples.empty()) throw Error(ErrorCode::kNoData, "no training samples");
  std::vector<std::vector<std::vector<double>>> obs;
  obs.reserve(samples.size());
  for (const auto &s : samples) obs.push_back(Observations(s));

  TrainResult result;
  std::vector<Alignment> paths;
  double current = TotalLogProb(model, obs, &paths);
  result.log_prob_history.push_back(current);

  const int n = model.n_states;
  for (int it = 0; it < max_iters; ++it) {
    ++result.iterations;
    HmmModel next = model;
    std::vector<std::vector<CepstralVector>> pools(static_cast<std::size_t>(n));
    std::vector<std::vector<double>> counts(
        static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n && j <= i + 2; ++j) counts[i][j] = 1.0;  // Laplace
    for (std::size_t k = 0; k < obs.size(); ++k) {
      const auto &path = paths[k];
      for (std::size_t t = 0; t < path.size(); ++t) {
        CepstralVector x;
        std::copy_n(obs[k][t].begin(), kNumCepstra, x.begin());
        pools[path[t]].push_back(x);
        if (t > 0) counts[path[t - 1]][path[t]] += 1.0;
      }
    }
    EstimateEmissions(next, pools);
    for (int i = 0; i < n; ++i) {
      double row = 0.0;
      for (int j = i; j < n && j <= i + 2; ++j) row += counts[i][j];
      for (int j = 0; j < n; ++j)
        next.log_trans[i][j] =
            HmmModel::Allowed(i, j) && j < n ? std::log(counts[i][j] / row) : kLogZero;
    }

    std::vector<Alignment> next_paths;
    const double updated = TotalLogProb(next, obs, &next_paths);
    // A re-estimate that scores worse is discarded (smoothing can cost a
    // little likelihood); training has converged.
    if (updated < current) break;
    model = std::move(next);
    paths = std::move(next_paths);
    result.log_prob_history.push_back(updated);
    const double gain = updated - current;
    current = updated;
    if (gain < tol) break;
  }
  result.model = std::move(model);
  return result;
}

HmmModel Train(HmmModel model, const std::vector<FeatureMatrix> &samples,
               int max_iters, double tol) {
  return TrainWithTrace(std::move(model), samples, max_iters, tol).model;
}

int Recognize(const std::vector<HmmModel> &models, const FeatureMatrix &features) {
  if (models.empty()) throw Error(ErrorCode::kNoModels, "no models to score");
  const auto obs = Observations(features);
  int best_label = models.front().label;
  double best = kLogZero;
  bool any = false;
  for (const auto &m : models) {
    double score = kLogZero;
    try {
      score = Viterbi(m, obs).log_prob;
    } catch (const Error &e) {
      if (e.code() != ErrorCode::kNoLegalPath) throw;
    }
    if (!any || score > best || (score == best && m.label < best_label)) {
      best = score;
      best_label = m.label;
      any = true;
    }
  }
  return best_label;
}

double WordAccuracy(int n_correct, int n_total) {
  if (n_total < 1) throw Error(ErrorCode::kEmptyTestSet, "no words tested");
  if (n_correct < 0 || n_correct > n_total)
    throw Error(ErrorCode::kInvalidArgument, "correct count outside [0, total]");
  return 100.0 * n_correct / n_total;
}

std::string SerializeModel(const HmmModel &model) {
  std::ostringstream os;
  os << model.label << ' ' << model.n_states << ' ' << model.dim << '\n';
  auto line = [&os](const std::vector<double> &v) {
    for (std::size_t i = 0; i < v.size(); ++i)
      os << (i ? " " : "") << FormatDouble(v[i]);
    os << '\n';
  };
  for (const auto &row : model.log_trans) line(row);
  for (int s = 0; s < model.n_states; ++s) {
    line(model.means[s]);
    line(model.variances[s]);
  }
  return os.str();
}

HmmModel DeserializeModel(const std::string &text) {
  std::istringstream in(text);
  std::vector<std::string> tokens;
  for (std::string tok; in >> tok;) tokens.push_back(tok);
  std::size_t pos = 0;
  auto next_number = [&](bool integral) {
    if (pos >= tokens.size())
      throw Error(ErrorCode::kBadModelFile, "model file ends early");
    const std::string &tok = tokens[pos++];
    char *end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || (integral && v != std::floor(v)))
      throw Error(ErrorCode::kBadModelFile, "bad number '" + tok + "'");
    return v;
  };
  HmmModel m;
  m.label = static_cast<int>(next_number(true));
  m.n_states = static_cast<int>(next_number(true));
  m.dim = static_cast<int>(next_number(true));
  if (m.n_states < 1 || m.n_states > FeatureMatrix::kCols || m.dim != kNumCepstra)
    throw Error(ErrorCode::kBadModelFile, "unsupported model header");
  const auto n = static_cast<std::size_t>(m.n_states);
  const auto d = static_cast<std::size_t>(m.dim);
  m.log_trans.assign(n, std::vector<double>(n));
  m.means.assign(n, std::vector<double>(d));
  m.variances.assign(n, std::vector<double>(d));
  for (auto &row : m.log_trans)
    for (auto &v : row) v = next_number(false);
  for (std::size_t s = 0; s < n; ++s) {
    for (auto &v : m.means[s]) v = next_number(false);
    for (auto &v : m.variances[s]) v = next_number(false);
  }
  if (pos != tokens.size())
    throw Error(ErrorCode::kBadModelFile, "trailing data in model file");
  m.Validate();
  return m;
}

void SaveModel(const HmmModel &model, const std::string &path) {
  WriteFileAtomic(path, SerializeModel(model));
}

HmmModel LoadModel(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return DeserializeModel(os.str());
}

}  // namespace clearspeech
