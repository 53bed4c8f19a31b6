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

#include "clearspeech/fft.h"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

#include "clearspeech/error.h"

namespace clearspeech {

namespace {
// FFTW's planner is not thread-safe.
std::mutex &PlannerMutex() {
  static std::mutex m;
  return m;
}
}  // namespace

bool IsPowerOfTwo(int n) { return n > 0 && (n & (n - 1)) == 0; }

int NextPowerOfTwo(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

RealFft::RealFft(int n) : n_(n) {
  if (n < 2) throw Error(ErrorCode::kBadParams, "FFT size must be >= 2");
  std::lock_guard<std::mutex> lock(PlannerMutex());
  real_ = fftw_alloc_real(static_cast<std::size_t>(n));
  auto *spec = fftw_alloc_complex(static_cast<std::size_t>(bins()));
  spectrum_ = spec;
  forward_ = fftw_plan_dft_r2c_1d(n, real_, spec, FFTW_ESTIMATE);
  inverse_ = fftw_plan_dft_c2r_1d(n, spec, real_, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  std::lock_guard<std::mutex> lock(PlannerMutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_));
  fftw_free(real_);
  fftw_free(spectrum_);
}

void RealFft::Forward(std::span<const double> in,
                      std::span<std::complex<double>> out) {
  std::copy(in.begin(), in.end(), real_);
  fftw_execute(static_cast<fftw_plan>(forward_));
  auto *spec = static_cast<fftw_complex *>(spectrum_);
  for (int k = 0; k < bins(); ++k) out[k] = {spec[k][0], spec[k][1]};
}

void RealFft::Inverse(std::span<const std::complex<double>> in,
                      std::span<double> out) {
  auto *spec = static_cast<fftw_complex *>(spectrum_);
  for (int k = 0; k < bins(); ++k) {
    spec[k][0] = in[k].real();
    spec[k][1] = in[k].imag();
  }
  // c2r destroys its input; the spectrum buffer is scratch anyway.
  fftw_execute(static_cast<fftw_plan>(inverse_));
  const double scale = 1.0 / n_;
  for (int i = 0; i < n_; ++i) out[i] = real_[i] * scale;
}

}  // namespace clearspeech
