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

#ifndef TUNDRA_VQVAE_HPP_
#define TUNDRA_VQVAE_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tundra/types.hpp"

namespace tundra::vq {

struct VqVaeConfig {
  int input_dim = 39;
  int hid_dim = 256;
  int enc_dim = 64;
  int codebook_size = 512;
  double beta = 0.25;      // commitment cost
  int epochs = 1000;
  double lr = 2e-4;
  int batch_train = 128;
  int batch_val = 10;
  int batch_test = 16;
  std::uint64_t seed = 0;

  void validate() const;  // throws DataError on nonsense values
};

// Per-frame autoencoder with a vector-quantized bottleneck:
// x -> affine+ReLU -> affine -> z_e -> nearest codebook row z_q
//   -> affine+ReLU -> affine -> reconstruction.
// All parameters live in one flat vector; the named views below map
// into it, which keeps the optimizer and finite-difference probing to
// plain vector arithmetic.
class VqVaeModel {
 public:
  explicit VqVaeModel(const VqVaeConfig& cfg);  // zero-initialized

  // Seeded init: weights uniform in +-1/sqrt(fan_in), biases zero,
  // codebook uniform in [-1/K, 1/K]. Codebook rows are distinct.
  static VqVaeModel init(const VqVaeConfig& cfg);

  const VqVaeConfig& config() const { return cfg_; }
  Index param_count() const { return theta_.size(); }
  VecXd& params() { return theta_; }
  const VecXd& params() const { return theta_; }

  Eigen::Map<MatXd> w1();              // hid x in
  Eigen::Map<VecXd> b1();              // hid
  Eigen::Map<MatXd> w2();              // enc x hid
  Eigen::Map<VecXd> b2();              // enc
  Eigen::Map<MatXd> codebook();        // K x enc, one code per row
  Eigen::Map<MatXd> w3();              // hid x enc
  Eigen::Map<VecXd> b3();              // hid
  Eigen::Map<MatXd> w4();              // in x hid
  Eigen::Map<VecXd> b4();              // in
  Eigen::Map<const MatXd> w1() const;
  Eigen::Map<const VecXd> b1() const;
  Eigen::Map<const MatXd> w2() const;
  Eigen::Map<const VecXd> b2() const;
  Eigen::Map<const MatXd> codebook() const;
  Eigen::Map<const MatXd> w3() const;
  Eigen::Map<const VecXd> b3() const;
  Eigen::Map<const MatXd> w4() const;
  Eigen::Map<const VecXd> b4() const;

 private:
  VqVaeConfig cfg_;
  struct Offsets {
    Index w1, b1, w2, b2, cb, w3, b3, w4, b4, total;
  } off_;
  VecXd theta_;
};

// Nearest codebook row by Euclidean distance, ties to the lowest index.
std::pair<Index, VecXd> quantize(const VecXd& z_e, const MatXd& codebook);

// Same rule for a stack of rows; returns one code index per row.
VecXi quantize_rows(const MatXd& z_e, const MatXd& codebook);

// Utterances zero-padded to a common frame count. values stacks the
// batch as rows b*frames + t; mask marks real frames.
struct PaddedBatch {
  Index batch = 0;
  Index frames = 0;
  Index dim = 0;
  MatXd values;  // (batch*frames) x dim
  MatXb mask;    // batch x frames
  Index real_frames() const;
};

PaddedBatch pad_batch(const std::vector<MatXd>& features);

struct ForwardResult {
  MatXd a1, h1;   // encoder hidden pre/post ReLU
  MatXd z_e;      // encoder output
  VecXi codes;    // chosen codebook row per frame
  MatXd z_q;      // quantized encoder output
  MatXd a2, h2;   // decoder hidden pre/post ReLU
  MatXd recon;    // reconstruction, same shape as the input
};

ForwardResult forward(const VqVaeModel& model, const PaddedBatch& batch);

// Each term is the per-frame squared error summed over dimensions,
// averaged over an utterance's real frames, then averaged over the
// batch. commit includes the beta factor. raw_sum is the undivided
// sum of all three terms over every real frame.
struct LossTerms {
  double recon = 0.0;
  double codebook_term = 0.0;
  double commit_term = 0.0;
  double total = 0.0;
  double raw_sum = 0.0;
};

LossTerms loss(const PaddedBatch& batch, const ForwardResult& fwd, double beta);

// How gradients are routed across the quantization junction.
// StraightThrough trains the model: the decoder-input gradient is
// copied to the encoder unchanged, and the codebook only feels the
// codebook term. LocalValue instead differentiates the loss value
// with the code assignments frozen, which is what a finite-difference
// probe of the total loss measures; it exists so the analytic
// backward pass can be checked against central differences.
enum class QuantizerGradientMode { StraightThrough, LocalValue };

VecXd backward(const VqVaeModel& model, const PaddedBatch& batch,
               const ForwardResult& fwd, QuantizerGradientMode mode);

struct AdamState {
  VecXd m, v;
  std::int64_t step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  explicit AdamState(Index n)
      : m(VecXd::Zero(n)), v(VecXd::Zero(n)) {}
};

// Bias-corrected update: theta -= lr * m_hat / (sqrt(v_hat) + eps).
void adam_step(VecXd& params, const VecXd& grad, AdamState& state, double lr);

// exp(entropy) of the code usage distribution over real frames;
// ranges from 1 (collapse) to codebook_size (uniform usage).
double codebook_perplexity(const VecXd& code_counts);
VecXd count_codes(const VecXi& codes, const MatXb& mask, int codebook_size);

}  // namespace tundra::vq

#endif  // TUNDRA_VQVAE_HPP_
