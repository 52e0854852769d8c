// Copyright 2026 The Tundra Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tundra/fft.hpp"

#include <unsupported/Eigen/FFT>

namespace tundra {

VecXcd fft_forward(const VecXd& x, Index nfft) {
  VecXcd time = VecXcd::Zero(nfft);
  const Index n = std::min(nfft, x.size());
  time.head(n) = x.head(n).cast<std::complex<double>>();
  Eigen::FFT<double> fft;
  VecXcd freq(nfft);
  fft.fwd(freq, time);
  return freq;
}

VecXd fft_magnitude(const VecXd& x, Index nfft) {
  const VecXcd freq = fft_forward(x, nfft);
  return freq.head(nfft / 2 + 1).cwiseAbs();
}

VecXd fft_convolve(const VecXd& a, const VecXd& b) {
  if (a.size() == 0 || b.size() == 0) return VecXd();
  const Index out_len = a.size() + b.size() - 1;
  const Index nfft = next_pow2(out_len);
  const VecXcd fa = fft_forward(a, nfft);
  const VecXcd fb = fft_forward(b, nfft);
  const VecXcd prod = fa.cwiseProduct(fb);
  Eigen::FFT<double> fft;
  VecXcd time(nfft);
  fft.inv(time, prod);
  return time.head(out_len).real();
}

}  // namespace tundra
