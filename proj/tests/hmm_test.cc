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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "clearspeech/hmm.h"
#include "clearspeech/vad.h"
#include "expect_error.h"
#include "hmm_oracle.h"
#include "test_util.h"

namespace clearspeech {
namespace {

using testing::BruteForceDecode;
using testing::CodeOf;
using testing::RandomModel;
using testing::RandomObservations;

FeatureMatrix RandomMatrix(std::uint64_t seed, double offset = 0.0) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> g(offset, 1.0);
  FeatureMatrix m;
  for (int r = 0; r < 20; ++r)
    for (int c = 0; c < 20; ++c) m(r, c) = g(gen) + 0.5 * c;
  return m;
}

FeatureMatrix WordFeatures(int label, std::uint64_t seed) {
  return ExtractFeatures(TrimToVoiced(SynthWord(label, seed), VadParams{}), FrameParams{});
}

void ExpectStochastic(const HmmModel &m) {
  for (int i = 0; i < m.n_states; ++i) {
    double row = 0.0;
    for (int j = 0; j < m.n_states; ++j) {
      if (!HmmModel::Allowed(i, j)) EXPECT_EQ(m.log_trans[i][j], kLogZero);
      row += std::exp(m.log_trans[i][j]);
    }
    EXPECT_NEAR(row, 1.0, 1e-9);
  }
  EXPECT_NO_THROW(m.Validate());
}

TEST(InitUniformTest, Segments) {
  FeatureMatrix f;
  for (int r = 0; r < 20; ++r)
    for (int c = 0; c < 20; ++c) f(r, c) = c;
  const auto m = InitUniform(5, {f}, 4);
  EXPECT_EQ(m.label, 4);
  for (int s = 0; s < 5; ++s) {
    // Columns 4s..4s+3 have mean 4s+1.5 and variance 1.25.
    EXPECT_DOUBLE_EQ(m.means[s][0], 4.0 * s + 1.5);
    EXPECT_DOUBLE_EQ(m.variances[s][7], 1.25);
  }
  // Dwell 4 gives self 0.75, skip 0.01, next the rest.
  EXPECT_NEAR(std::exp(m.log_trans[0][0]), 0.75, 1e-12);
  EXPECT_NEAR(std::exp(m.log_trans[0][2]), 0.01, 1e-12);
  EXPECT_NEAR(std::exp(m.log_trans[0][1]), 0.24, 1e-12);
  EXPECT_NEAR(std::exp(m.log_trans[3][4]), 0.25, 1e-12);
  EXPECT_EQ(m.log_trans[4][4], 0.0);
  ExpectStochastic(m);
}

TEST(InitUniformTest, SingleStateAndDuplicates) {
  const auto f = RandomMatrix(1);
  const auto one = InitUniform(1, {f});
  EXPECT_EQ(one.log_trans[0][0], 0.0);
  for (int d = 0; d < 20; ++d) {
    double mean = 0.0;
    for (int c = 0; c < 20; ++c) mean += f(d, c) / 20.0;
    EXPECT_NEAR(one.means[0][d], mean, 1e-12);
  }
  const auto g = RandomMatrix(2);
  const auto a = InitUniform(5, {f, g}), b = InitUniform(5, {f, g, f, g});
  for (int s = 0; s < 5; ++s)
    for (int d = 0; d < 20; ++d) {
      EXPECT_NEAR(a.means[s][d], b.means[s][d], 1e-12);
      EXPECT_NEAR(a.variances[s][d], b.variances[s][d], 1e-12);
    }
  EXPECT_EQ(CodeOf([&] { InitUniform(21, {f}); }), ErrorCode::kTooManyStates);
  EXPECT_EQ(CodeOf([] { InitUniform(5, {}); }), ErrorCode::kNoData);
  // Constant features hit the variance floor.
  EXPECT_EQ(InitUniform(2, {FeatureMatrix{}}).variances[1][3], kVarianceFloor);
}

TEST(ViterbiTest, DegenerateModels) {
  const auto f = RandomMatrix(3);
  const auto one = InitUniform(1, {RandomMatrix(4)});
  const auto r = Viterbi(one, f);
  double want = 0.0;
  for (int c = 0; c < 20; ++c) want += one.LogEmission(0, Observations(f)[c]);
  EXPECT_NEAR(r.log_prob, want, 1e-9);
  for (int s : r.path) EXPECT_EQ(s, 0);

  // Twenty states that must advance every column.
  auto forced = InitUniform(20, {f});
  for (int i = 0; i < 20; ++i) {
    std::fill(forced.log_trans[i].begin(), forced.log_trans[i].end(), kLogZero);
    forced.log_trans[i][std::min(i + 1, 19)] = 0.0;
  }
  forced.Validate();
  const auto path = Viterbi(forced, f).path;
  for (int c = 0; c < 20; ++c) EXPECT_EQ(path[c], c);
}

TEST(ViterbiTest, MatchesBruteForce) {
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<int> states(1, 3), cols(1, 6), dims(1, 4);
  int checked = 0;
  while (checked < 300) {
    const int n = states(gen), t = cols(gen), d = dims(gen);
    if (n > 1 + 2 * (t - 1)) continue;
    const auto m = RandomModel(n, d, gen);
    const auto obs = RandomObservations(t, d, gen);
    const auto want = BruteForceDecode(m, obs);
    const auto got = Viterbi(m, obs);
    EXPECT_NEAR(got.log_prob, want.log_prob, 1e-9);
    EXPECT_EQ(got.path, want.path);
    ++checked;
  }
}

TEST(ViterbiTest, AlignmentShape) {
  const auto m = InitUniform(5, {RandomMatrix(5)});
  const auto path = Viterbi(m, RandomMatrix(6, 3.0)).path;
  ASSERT_EQ(path.size(), 20u);
  EXPECT_EQ(path.front(), 0);
  EXPECT_EQ(path.back(), 4);
  for (std::size_t t = 1; t < path.size(); ++t) {
    EXPECT_GE(path[t], path[t - 1]);
    EXPECT_LE(path[t], path[t - 1] + 2);
  }
}

TEST(ViterbiTest, TiesGoToLowerState) {
  // Flat emissions; 0,1,2 and 0,2,2 both score 1/3, 0,0,2 scores 1/9.
  HmmModel m = InitUniform(3, {FeatureMatrix{}});
  const double third = std::log(1.0 / 3.0);
  m.log_trans = {{third, third, third}, {kLogZero, kLogZero, 0.0}, {kLogZero, kLogZero, 0.0}};
  const std::vector<std::vector<double>> flat(3, std::vector<double>(20, 0.0));
  const auto r = Viterbi(m, flat);
  EXPECT_EQ(r.path, (Alignment{0, 1, 2}));
  EXPECT_NEAR(r.log_prob - 3.0 * m.LogEmission(0, flat[0]), third, 1e-12);
}

TEST(ViterbiTest, Errors) {
  const auto m = InitUniform(5, {RandomMatrix(7)});
  EXPECT_EQ(CodeOf([&] { Viterbi(m, std::vector<std::vector<double>>(20, std::vector<double>(3))); }),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(CodeOf([&] { Viterbi(m, std::vector<std::vector<double>>(2, std::vector<double>(20))); }),
            ErrorCode::kNoLegalPath);
  EXPECT_EQ(CodeOf([&] { Viterbi(m, std::vector<std::vector<double>>{}); }), ErrorCode::kNoLegalPath);
}

TEST(TrainTest, SingleSampleSingleState) {
  const auto f = RandomMatrix(8);
  const auto m = Train(InitUniform(1, {f}), {f}, 5, 1e-6);
  for (int d = 0; d < 20; ++d) {
    double mean = 0.0;
    for (int c = 0; c < 20; ++c) mean += f(d, c);
    EXPECT_NEAR(m.means[0][d], mean / 20.0, 1e-12);
  }
}

TEST(TrainTest, MonotoneAndStochastic) {
  for (int label = 0; label < 10; ++label) {
    std::vector<FeatureMatrix> samples;
    for (int u = 0; u < 10; ++u) samples.push_back(WordFeatures(label, TokenSeed(3, label, u)));
    const auto trace = TrainWithTrace(InitUniform(5, samples, label), samples, 30, 1e-9);
    for (std::size_t i = 1; i < trace.log_prob_history.size(); ++i)
      EXPECT_GE(trace.log_prob_history[i], trace.log_prob_history[i - 1] - 1e-6) << label;
    ExpectStochastic(trace.model);
    EXPECT_EQ(trace.model.label, label);
  }
}

TEST(TrainTest, FixedPoint) {
  std::vector<FeatureMatrix> samples = {RandomMatrix(9), RandomMatrix(10), RandomMatrix(11)};
  const auto converged = Train(InitUniform(4, samples), samples, 100, 0.0);
  const auto again = TrainWithTrace(converged, samples, 10, 1e-9);
  EXPECT_LE(again.iterations, 1);
  EXPECT_NEAR(again.log_prob_history.back(), again.log_prob_history.front(), 1e-9);
  EXPECT_EQ(CodeOf([&] { Train(converged, {}, 5, 1e-3); }), ErrorCode::kNoData);
}

TEST(RecognizeTest, RulesAndErrors) {
  const auto f = RandomMatrix(12);
  auto a = InitUniform(5, {f}, 7), b = a;
  b.label = 3;
  EXPECT_EQ(Recognize({a}, RandomMatrix(13)), 7);
  EXPECT_EQ(Recognize({a, b}, f), 3);
  EXPECT_EQ(Recognize({b, a}, f), 3);
  EXPECT_EQ(CodeOf([&] { Recognize({}, f); }), ErrorCode::kNoModels);
}

TEST(RecognizeTest, TrainingTokensComeBack) {
  std::vector<HmmModel> models;
  std::vector<std::vector<FeatureMatrix>> train(10);
  for (int label = 0; label < 10; ++label) {
    for (int u = 0; u < 5; ++u) train[label].push_back(WordFeatures(label, TokenSeed(1, label, u)));
    models.push_back(Train(InitUniform(5, train[label], label), train[label], 20, 1e-4));
  }
  // Any model order gives the same answers.
  auto reversed = models;
  std::reverse(reversed.begin(), reversed.end());
  for (int label = 0; label < 10; ++label)
    for (const auto &f : train[label]) {
      EXPECT_EQ(Recognize(models, f), label);
      EXPECT_EQ(Recognize(reversed, f), label);
    }
}

TEST(WordAccuracyTest, Values) {
  EXPECT_EQ(WordAccuracy(10, 10), 100.0);
  EXPECT_EQ(WordAccuracy(7, 10), 70.0);
  EXPECT_EQ(WordAccuracy(0, 3), 0.0);
  EXPECT_EQ(CodeOf([] { WordAccuracy(0, 0); }), ErrorCode::kEmptyTestSet);
  EXPECT_EQ(CodeOf([] { WordAccuracy(4, 3); }), ErrorCode::kInvalidArgument);
}

TEST(PersistenceTest, RoundTripIsExact) {
  std::vector<FeatureMatrix> samples = {RandomMatrix(14), RandomMatrix(15)};
  const auto m = Train(InitUniform(5, samples, 6), samples, 10, 1e-6);
  testing::TempDir dir;
  SaveModel(m, dir.File("m.hmm"));
  const auto back = LoadModel(dir.File("m.hmm"));
  EXPECT_EQ(back.label, 6);
  EXPECT_EQ(back.log_trans, m.log_trans);
  EXPECT_EQ(back.means, m.means);
  EXPECT_EQ(back.variances, m.variances);
  EXPECT_EQ(SerializeModel(back), SerializeModel(m));
  EXPECT_NE(SerializeModel(m).find("-inf"), std::string::npos);
}

TEST(PersistenceTest, RejectsBadFiles) {
  const auto good = SerializeModel(InitUniform(2, {RandomMatrix(16)}));
  EXPECT_EQ(CodeOf([&] { DeserializeModel(good.substr(0, good.size() / 2)); }), ErrorCode::kBadModelFile);
  EXPECT_EQ(CodeOf([&] { DeserializeModel(good + " 1"); }), ErrorCode::kBadModelFile);
  EXPECT_EQ(CodeOf([] { DeserializeModel("0 2 19\n"); }), ErrorCode::kBadModelFile);
  EXPECT_EQ(CodeOf([] { DeserializeModel("zero 2 20\n"); }), ErrorCode::kBadModelFile);
  // A backward arc breaks the Bakis structure.
  auto m = InitUniform(2, {RandomMatrix(17)});
  m.log_trans[1][0] = std::log(0.5);
  m.log_trans[1][1] = std::log(0.5);
  EXPECT_EQ(CodeOf([&] { DeserializeModel(SerializeModel(m)); }), ErrorCode::kBadModelFile);
  m = InitUniform(2, {RandomMatrix(17)});
  m.variances[0][0] = 1e-6;
  EXPECT_EQ(CodeOf([&] { DeserializeModel(SerializeModel(m)); }), ErrorCode::kBadModelFile);
  testing::TempDir dir;
  EXPECT_EQ(CodeOf([&] { LoadModel(dir.File("absent.hmm")); }), ErrorCode::kIoFailure);
}

}  // namespace
}  // namespace clearspeech
