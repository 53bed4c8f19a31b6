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

#ifndef CLEARSPEECH_FIS_H_
#define CLEARSPEECH_FIS_H_

#include <string>
#include <string_view>
#include <vector>

#include "clearspeech/error.h"

namespace clearspeech {

enum class MfKind { kTrimf, kGaussmf };

/// Trimf params are (a, b, c); Gaussmf params are (sigma, center).
struct MembershipFunction {
  std::string name;
  MfKind kind = MfKind::kTrimf;
  std::vector<double> params;

  static MembershipFunction Trimf(std::string name, double a, double b, double c);
  static MembershipFunction Gaussmf(std::string name, double sigma, double center);

  bool operator==(const MembershipFunction &) const = default;
};

struct FuzzyVariable {
  std::string name;
  double lo = 0.0;
  double hi = 1.0;
  std::vector<MembershipFunction> mfs;

  bool operator==(const FuzzyVariable &) const = default;
};

enum class Connective { kAnd, kOr };

struct RuleTerm {
  int variable = 0;  // index into inputs (or outputs for a consequent)
  int mf = 0;        // index into that variable's mfs

  bool operator==(const RuleTerm &) const = default;
};

struct FuzzyRule {
  std::vector<RuleTerm> antecedent;
  Connective connective = Connective::kAnd;
  RuleTerm consequent;
  double weight = 1.0;

  bool operator==(const FuzzyRule &) const = default;
};

/// Mamdani system. Operators are fixed: and=min, or=max, implication=min,
/// aggregation=max, defuzzification=centroid.
struct FisConfig {
  std::string name;
  std::string version = "2.0";
  std::vector<FuzzyVariable> inputs;
  std::vector<FuzzyVariable> outputs;
  std::vector<FuzzyRule> rules;

  /// Checks ranges, MF parameters and rule indices.
  void Validate() const;
  bool operator==(const FisConfig &) const = default;
};

/// Parse failure with a 1-based source position.
class FisParseError : public Error {
 public:
  FisParseError(ErrorCode code, int line, int column, const std::string &msg)
      : Error(code, "line " + std::to_string(line) + ", column " +
                        std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Reads the bracketed [System]/[InputK]/[OutputK]/[Rules] format. Lines
/// that are neither section headers, Key=value pairs nor rules are treated
/// as commentary and skipped.
FisConfig ParseFis(std::string_view text);
FisConfig LoadFis(const std::string &path);

/// Emits the bracketed format with rules in the textual "If ... then" form.
std::string SerializeFis(const FisConfig &fis);

double Membership(const MembershipFunction &mf, double x);

inline constexpr int kCentroidPoints = 1001;

struct FisOutput {
  std::vector<double> crisp;            // one per output variable
  std::vector<double> rule_strengths;   // weighted firing strengths
  // Per output: true when no rule fired and the midpoint was returned.
  std::vector<bool> no_rule_fired;
};

FisOutput Evaluate(const FisConfig &fis, const std::vector<double> &inputs);

/// The SpeechAccuracy system (Environment, WinSz, FrOver -> Accuracy).
FisConfig SpeechAccuracyFis();

struct GridRow {
  int window_len = 0;
  double overlap_pct = 0.0;
  double snr_db = 0.0;
  double accuracy_pct = 0.0;
};

struct OptimizeResult {
  int window_len = 0;
  double overlap_pct = 0.0;
  double predicted_accuracy = 0.0;
  bool no_rule_fired = false;
  std::size_t row_index = 0;
};

/// Scores each row with the SpeechAccuracy system and returns the best.
/// Rows where no rule fires rank below every row with a prediction.
OptimizeResult OptimizeParams(const std::vector<GridRow> &grid);
OptimizeResult OptimizeParams(const FisConfig &fis, const std::vector<GridRow> &grid);

}  // namespace clearspeech

#endif  // CLEARSPEECH_FIS_H_
