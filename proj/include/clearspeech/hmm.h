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

#ifndef CLEARSPEECH_HMM_H_
#define CLEARSPEECH_HMM_H_

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "clearspeech/features.h"

namespace clearspeech {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();
inline constexpr double kVarianceFloor = 1e-4;
inline constexpr double kSkipPrior = 0.01;
inline constexpr int kDefaultStates = 5;

/// Left-to-right (Bakis) HMM with diagonal-Gaussian emissions. From state i
/// only i, i+1 and i+2 are reachable; paths start in state 0 and end in the
/// last state.
struct HmmModel {
  int label = 0;
  int n_states = kDefaultStates;
  int dim = kNumCepstra;
  std::vector<std::vector<double>> log_trans;  // n_states x n_states
  std::vector<std::vector<double>> means;      // n_states x dim
  std::vector<std::vector<double>> variances;  // n_states x dim

  static bool Allowed(int from, int to) { return to >= from && to <= from + 2; }

  double LogEmission(int state, std::span<const double> x) const;
  /// Checks the Bakis structure, row sums and variance floor.
  void Validate() const;
};

/// One state index per time column.
using Alignment = std::vector<int>;

struct ViterbiResult {
  Alignment path;
  double log_prob = kLogZero;
};

/// Uniform segmentation of each sample's columns into n_states runs.
HmmModel InitUniform(int n_states, const std::vector<FeatureMatrix> &samples,
                     int label = 0);

/// Best Bakis path through an observation sequence (rows = time).
ViterbiResult Viterbi(const HmmModel &model,
                      const std::vector<std::vector<double>> &observations);
ViterbiResult Viterbi(const HmmModel &model, const FeatureMatrix &features);

std::vector<std::vector<double>> Observations(const FeatureMatrix &features);

struct TrainResult {
  HmmModel model;
  // Total Viterbi log-prob of the samples: initial model first, then after
  // each accepted re-estimation.
  std::vector<double> log_prob_history;
  int iterations = 0;
};

/// Segmental (Viterbi) training.
TrainResult TrainWithTrace(HmmModel model, const std::vector<FeatureMatrix> &samples,
                           int max_iters, double tol);
HmmModel Train(HmmModel model, const std::vector<FeatureMatrix> &samples,
               int max_iters, double tol);

/// Label of the best-scoring model; ties go to the lower label.
int Recognize(const std::vector<HmmModel> &models, const FeatureMatrix &features);

/// 100 * correct / total.
double WordAccuracy(int n_correct, int n_total);

// Text persistence: header "label n_states dim", transition log-probabilities
// one row per line ("-inf" for forbidden arcs), then a mean line and a
// variance line per state. Values use 17 significant digits, so a saved
// model reloads bit-identically.
std::string SerializeModel(const HmmModel &model);
HmmModel DeserializeModel(const std::string &text);
void SaveModel(const HmmModel &model, const std::string &path);
HmmModel LoadModel(const std::string &path);

}  // namespace clearspeech

#endif  // CLEARSPEECH_HMM_H_
