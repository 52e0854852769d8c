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

#include "tundra/mfcc.hpp"

#include <cmath>

#include "tundra/error.hpp"
#include "tundra/fft.hpp"

namespace tundra::audio {
namespace {

constexpr double kLogFloor = 1e-10;

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

VecXd hamming(Index length) {
  VecXd w(length);
  if (length == 1) {
    w(0) = 1.0;
    return w;
  }
  for (Index n = 0; n < length; ++n) {
    w(n) = 0.54 - 0.46 * std::cos(2.0 * M_PI * n / (length - 1));
  }
  return w;
}

// DCT-II with orthonormal scaling, n_ceps x n_mels.
MatXd dct_matrix(int n_ceps, int n_mels) {
  MatXd d(n_ceps, n_mels);
  const double m = n_mels;
  for (int k = 0; k < n_ceps; ++k) {
    const double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / m);
    for (int n = 0; n < n_mels; ++n) {
      d(k, n) = scale * std::cos(M_PI * k * (2 * n + 1) / (2.0 * m));
    }
  }
  return d;
}

}  // namespace

Index MfccConfig::frame_length(int sample_rate_hz) const {
  return static_cast<Index>(std::lround(frame_ms * sample_rate_hz / 1000.0));
}

Index MfccConfig::hop_length(int sample_rate_hz) const {
  return static_cast<Index>(std::lround(hop_ms * sample_rate_hz / 1000.0));
}

Index MfccConfig::resolved_fft_size(int sample_rate_hz) const {
  if (fft_size > 0) return fft_size;
  return next_pow2(frame_length(sample_rate_hz));
}

MatXd mel_filterbank(int n_mels, Index nfft, int sample_rate_hz) {
  const Index n_bins = nfft / 2 + 1;
  const double mel_max = hz_to_mel(sample_rate_hz / 2.0);
  // n_mels + 2 equally spaced points on the mel axis, snapped to bins.
  std::vector<Index> bin(static_cast<std::size_t>(n_mels) + 2);
  for (int j = 0; j < n_mels + 2; ++j) {
    const double mel = mel_max * j / (n_mels + 1);
    bin[static_cast<std::size_t>(j)] = static_cast<Index>(
        std::floor((nfft + 1) * mel_to_hz(mel) / sample_rate_hz));
  }
  MatXd fb = MatXd::Zero(n_mels, n_bins);
  for (int m = 0; m < n_mels; ++m) {
    const Index lo = bin[static_cast<std::size_t>(m)];
    const Index mid = bin[static_cast<std::size_t>(m) + 1];
    const Index hi = bin[static_cast<std::size_t>(m) + 2];
    for (Index k = lo; k < mid && k < n_bins; ++k) {
      fb(m, k) = static_cast<double>(k - lo) / static_cast<double>(mid - lo);
    }
    for (Index k = mid; k < hi && k < n_bins; ++k) {
      fb(m, k) = static_cast<double>(hi - k) / static_cast<double>(hi - mid);
    }
  }
  return fb;
}

MatXd delta(const MatXd& features, int window) {
  if (window < 1) throw DataError("delta window must be >= 1");
  const Index rows = features.rows();
  MatXd out = MatXd::Zero(rows, features.cols());
  if (rows == 0) return out;
  double denom = 0.0;
  for (int n = 1; n <= window; ++n) denom += 2.0 * n * n;
  for (Index t = 0; t < rows; ++t) {
    for (int n = 1; n <= window; ++n) {
      const Index ahead = std::min<Index>(t + n, rows - 1);
      const Index behind = std::max<Index>(t - n, 0);
      out.row(t) += n * (features.row(ahead) - features.row(behind));
    }
    out.row(t) /= denom;
  }
  return out;
}

MatXd mfcc(const AudioBuffer& audio, const MfccConfig& cfg) {
  const int sr = audio.sample_rate_hz;
  const Index frame_len = cfg.frame_length(sr);
  const Index hop = cfg.hop_length(sr);
  if (frame_len <= 0 || hop <= 0) throw DataError("frame and hop must be positive");
  if (cfg.n_ceps > cfg.n_mels) throw DataError("n_ceps must not exceed n_mels");
  if (audio.size() < frame_len) {
    throw DataError("audio shorter than one frame (" +
                    std::to_string(audio.size()) + " < " +
                    std::to_string(frame_len) + " samples)");
  }
  const Index nfft = cfg.resolved_fft_size(sr);
  if (nfft < frame_len) throw DataError("fft_size smaller than frame length");
  const Index n_frames = (audio.size() - frame_len) / hop + 1;

  VecXd emphasized(audio.size());
  emphasized(0) = audio.samples(0);
  for (Index n = 1; n < audio.size(); ++n) {
    emphasized(n) = audio.samples(n) - cfg.pre_emphasis * audio.samples(n - 1);
  }

  const VecXd window = hamming(frame_len);
  const MatXd fbank = mel_filterbank(cfg.n_mels, nfft, sr);
  const MatXd dct = dct_matrix(cfg.n_ceps, cfg.n_mels);

  MatXd statics(n_frames, cfg.n_ceps);
  VecXd frame(frame_len);
  for (Index t = 0; t < n_frames; ++t) {
    frame = emphasized.segment(t * hop, frame_len).cwiseProduct(window);
    const VecXd mag = fft_magnitude(frame, nfft);
    VecXd mel_energy = fbank * mag;
    for (Index m = 0; m < mel_energy.size(); ++m) {
      mel_energy(m) = std::log(std::max(mel_energy(m), kLogFloor));
    }
    statics.row(t) = (dct * mel_energy).transpose();
  }

  if (cfg.mean_normalize) {
    statics.rowwise() -= statics.colwise().mean();
  }
  if (!cfg.deltas) return statics;

  MatXd out(n_frames, 3 * cfg.n_ceps);
  const MatXd d1 = delta(statics, cfg.delta_window);
  out << statics, d1, delta(d1, cfg.delta_window);
  return out;
}

}  // namespace tundra::audio
