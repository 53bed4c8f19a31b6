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

#ifndef CLEARSPEECH_FFT_H_
#define CLEARSPEECH_FFT_H_

#include <complex>
#include <span>

namespace clearspeech {

/// Real-input FFT of a fixed size, backed by an FFTW plan. Not copyable;
/// one instance must not be used from two threads at once.
class RealFft {
 public:
  explicit RealFft(int n);
  ~RealFft();
  RealFft(const RealFft &) = delete;
  RealFft &operator=(const RealFft &) = delete;

  int size() const { return n_; }
  int bins() const { return n_ / 2 + 1; }

  // in.size() == size(), out.size() == bins().
  void Forward(std::span<const double> in,
               std::span<std::complex<double>> out);
  // Inverse of Forward, including the 1/n scaling.
  void Inverse(std::span<const std::complex<double>> in,
               std::span<double> out);

 private:
  int n_;
  double *real_;
  void *spectrum_;  // fftw_complex[]
  void *forward_;   // fftw_plan
  void *inverse_;
};

bool IsPowerOfTwo(int n);
int NextPowerOfTwo(int n);

}  // namespace clearspeech

#endif  // CLEARSPEECH_FFT_H_
