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

#ifndef TUNDRA_MFCC_HPP_
#define TUNDRA_MFCC_HPP_

#include "tundra/types.hpp"
#include "tundra/wav.hpp"

namespace tundra::audio {

// Pinned cepstral recipe. With deltas on, output columns are
// [static | delta | delta-delta], 13 * 3 = 39.
struct MfccConfig {
  double frame_ms = 25.0;
  double hop_ms = 10.0;
  double pre_emphasis = 0.97;
  int n_mels = 26;
  int n_ceps = 13;
  int fft_size = 0;          // 0: next power of two >= frame length
  bool deltas = true;
  int delta_window = 2;
  bool mean_normalize = true;  // per-utterance CMN on the static coefficients

  Index frame_length(int sample_rate_hz) const;
  Index hop_length(int sample_rate_hz) const;
  Index resolved_fft_size(int sample_rate_hz) const;
  int output_dim() const { return deltas ? 3 * n_ceps : n_ceps; }
};

// Triangular filters on the HTK mel scale, rows = filters,
// cols = nfft/2 + 1 spectrum bins.
MatXd mel_filterbank(int n_mels, Index nfft, int sample_rate_hz);

// Regression deltas over +-window frames with edge replication.
// Same shape as the input; single-row input gives zeros.
MatXd delta(const MatXd& features, int window);

// frames x output_dim feature matrix. Frame count is
// floor((N - frame_len)/hop_len) + 1. Throws DataError when the buffer
// is shorter than one frame.
MatXd mfcc(const AudioBuffer& audio, const MfccConfig& cfg);

}  // namespace tundra::audio

#endif  // TUNDRA_MFCC_HPP_
