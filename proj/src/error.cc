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

#include "clearspeech/error.h"

namespace clearspeech {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotWav: return "NotWav";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kTruncated: return "Truncated";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kZeroReference: return "ZeroReference";
    case ErrorCode::kNoiseTooShort: return "NoiseTooShort";
    case ErrorCode::kSilentClean: return "SilentClean";
    case ErrorCode::kSilentNoise: return "SilentNoise";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kEmptyFrame: return "EmptyFrame";
    case ErrorCode::kFrameTooShort: return "FrameTooShort";
    case ErrorCode::kNoSpeechFound: return "NoSpeechFound";
    case ErrorCode::kTooShort: return "TooShort";
    case ErrorCode::kInvalidCutoff: return "InvalidCutoff";
    case ErrorCode::kEvenTaps: return "EvenTaps";
    case ErrorCode::kEmptyTaps: return "EmptyTaps";
    case ErrorCode::kZeroResidual: return "ZeroResidual";
    case ErrorCode::kEmptyFeatures: return "EmptyFeatures";
    case ErrorCode::kTooFewFrames: return "TooFewFrames";
    case ErrorCode::kBadParams: return "BadParams";
    case ErrorCode::kInconsistentGeometry: return "InconsistentGeometry";
    case ErrorCode::kNoNoiseFrames: return "NoNoiseFrames";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kWrongVariant: return "WrongVariant";
    case ErrorCode::kBlockTooShort: return "BlockTooShort";
    case ErrorCode::kMissingReference: return "MissingReference";
    case ErrorCode::kEmptyPipeline: return "EmptyPipeline";
    case ErrorCode::kTooFewFilters: return "TooFewFilters";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kTooManyStates: return "TooManyStates";
    case ErrorCode::kNoData: return "NoData";
    case ErrorCode::kNoLegalPath: return "NoLegalPath";
    case ErrorCode::kNoModels: return "NoModels";
    case ErrorCode::kEmptyTestSet: return "EmptyTestSet";
    case ErrorCode::kBadModelFile: return "BadModelFile";
    case ErrorCode::kSyntaxError: return "SyntaxError";
    case ErrorCode::kUnknownMfKind: return "UnknownMfKind";
    case ErrorCode::kCountMismatch: return "CountMismatch";
    case ErrorCode::kBadRange: return "BadRange";
    case ErrorCode::kArityMismatch: return "ArityMismatch";
    case ErrorCode::kEmptyGrid: return "EmptyGrid";
  }
  return "Unknown";
}

}  // namespace clearspeech
