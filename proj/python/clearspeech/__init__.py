# Copyright 2026  The ClearSpeech Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0
#
# THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
# KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
# WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
# MERCHANTABLITY OR NON-INFRINGEMENT.
# See the Apache 2 License for the specific language governing permissions and
# limitations under the License.
"""Speech enhancement, MFCC/HMM isolated-word recognition and fuzzy
parameter selection, backed by the ClearSpeech C++ library."""

from ._clearspeech import *  # noqa: F401,F403
from ._clearspeech import Error, FuzzySystem, HmmModel, RecognitionConfig  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
