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

#pragma once

#include <complex>

#include "tundra/types.hpp"

namespace tundra {

using VecXcd = Vec<std::complex<double>>;

inline Index next_pow2(Index n) {
  Index p = 1;
  while (p < n) p <<= 1;
  return p;
}

/// Forward DFT of x zero-padded (or truncated) to nfft points.
VecXcd fft_forward(const VecXd& x, Index nfft);

/// Magnitude spectrum, bins 0..nfft/2 inclusive.
VecXd fft_magnitude(const VecXd& x, Index nfft);

/// Full linear convolution, length a.size() + b.size() - 1.
VecXd fft_convolve(const VecXd& a, const VecXd& b);

}  // namespace tundra
