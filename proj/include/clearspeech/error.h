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

#ifndef CLEARSPEECH_ERROR_H_
#define CLEARSPEECH_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace clearspeech {

enum class ErrorCode {
  // audio
  kNotWav,
  kUnsupportedFormat,
  kTruncated,
  kIoFailure,
  kLengthMismatch,
  kZeroReference,
  kNoiseTooShort,
  kSilentClean,
  kSilentNoise,
  kInvalidArgument,
  // vad
  kEmptyFrame,
  kFrameTooShort,
  kNoSpeechFound,
  kTooShort,
  // filterbank
  kInvalidCutoff,
  kEvenTaps,
  kEmptyTaps,
  kZeroResidual,
  kEmptyFeatures,
  kTooFewFrames,
  // enhance
  kBadParams,
  kInconsistentGeometry,
  kNoNoiseFrames,
  kDimensionMismatch,
  kWrongVariant,
  kBlockTooShort,
  kMissingReference,
  kEmptyPipeline,
  // features
  kTooFewFilters,
  kEmptyInput,
  // recognizer
  kTooManyStates,
  kNoData,
  kNoLegalPath,
  kNoModels,
  kEmptyTestSet,
  kBadModelFile,
  // fis
  kSyntaxError,
  kUnknownMfKind,
  kCountMismatch,
  kBadRange,
  kArityMismatch,
  kEmptyGrid,
};

std::string_view ErrorCodeName(ErrorCode code);

/// Exception carrying a machine-checkable error kind. Every fallible
/// operation in the library throws this (or a subclass).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace clearspeech

#endif  // CLEARSPEECH_ERROR_H_
