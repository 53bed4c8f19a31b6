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

#ifndef CLEARSPEECH_RNG_H_
#define CLEARSPEECH_RNG_H_

#include <cstdint>
#include <random>

namespace clearspeech {

// Seeded source used for every random quantity in the toolkit (noise,
// corpus perturbations, test models). The bit stream is std::mt19937_64,
// whose output sequence is fixed by the C++ standard. Uniforms take the top
// 53 bits; normals use the Box-Muller transform with both outputs consumed
// in order (cos branch first). std::*_distribution is avoided because its
// algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  double Gaussian();

  std::uint64_t NextU64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Mixes several integers into one seed (splitmix64 finalizer chain).
std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t a,
                         std::uint64_t b = 0, std::uint64_t c = 0);

}  // namespace clearspeech

#endif  // CLEARSPEECH_RNG_H_
