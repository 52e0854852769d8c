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

#include "tundra/vqvae.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tundra/error.hpp"
#include "tundra/rng.hpp"

namespace tundra::vq {

void VqVaeConfig::validate() const {
  if (input_dim <= 0 || hid_dim <= 0 || enc_dim <= 0) {
    throw DataError("model dimensions must be positive");
  }
  if (codebook_size < 2) throw DataError("codebook_size must be >= 2");
  if (beta < 0.0) throw DataError("beta must be >= 0");
  if (epochs < 1) throw DataError("epochs must be >= 1");
  if (!(lr > 0.0)) throw DataError("lr must be positive");
  if (batch_train < 1 || batch_val < 1 || batch_test < 1) {
    throw DataError("batch sizes must be >= 1");
  }
}

VqVaeModel::VqVaeModel(const VqVaeConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  const Index in = cfg.input_dim, hid = cfg.hid_dim, enc = cfg.enc_dim;
  const Index k = cfg.codebook_size;
  off_.w1 = 0;
  off_.b1 = off_.w1 + hid * in;
  off_.w2 = off_.b1 + hid;
  off_.b2 = off_.w2 + enc * hid;
  off_.cb = off_.b2 + enc;
  off_.w3 = off_.cb + k * enc;
  off_.b3 = off_.w3 + hid * enc;
  off_.w4 = off_.b3 + hid;
  off_.b4 = off_.w4 + in * hid;
  off_.total = off_.b4 + in;
  theta_ = VecXd::Zero(off_.total);
}

Eigen::Map<MatXd> VqVaeModel::w1() {
  return {theta_.data() + off_.w1, cfg_.hid_dim, cfg_.input_dim};
}
Eigen::Map<VecXd> VqVaeModel::b1() {
  return {theta_.data() + off_.b1, cfg_.hid_dim};
}
Eigen::Map<MatXd> VqVaeModel::w2() {
  return {theta_.data() + off_.w2, cfg_.enc_dim, cfg_.hid_dim};
}
Eigen::Map<VecXd> VqVaeModel::b2() {
  return {theta_.data() + off_.b2, cfg_.enc_dim};
}
Eigen::Map<MatXd> VqVaeModel::codebook() {
  return {theta_.data() + off_.cb, cfg_.codebook_size, cfg_.enc_dim};
}
Eigen::Map<MatXd> VqVaeModel::w3() {
  return {theta_.data() + off_.w3, cfg_.hid_dim, cfg_.enc_dim};
}
Eigen::Map<VecXd> VqVaeModel::b3() {
  return {theta_.data() + off_.b3, cfg_.hid_dim};
}
Eigen::Map<MatXd> VqVaeModel::w4() {
  return {theta_.data() + off_.w4, cfg_.input_dim, cfg_.hid_dim};
}
Eigen::Map<VecXd> VqVaeModel::b4() {
  return {theta_.data() + off_.b4, cfg_.input_dim};
}
Eigen::Map<const MatXd> VqVaeModel::w1() const {
  return {theta_.data() + off_.w1, cfg_.hid_dim, cfg_.input_dim};
}
Eigen::Map<const VecXd> VqVaeModel::b1() const {
  return {theta_.data() + off_.b1, cfg_.hid_dim};
}
Eigen::Map<const MatXd> VqVaeModel::w2() const {
  return {theta_.data() + off_.w2, cfg_.enc_dim, cfg_.hid_dim};
}
Eigen::Map<const VecXd> VqVaeModel::b2() const {
  return {theta_.data() + off_.b2, cfg_.enc_dim};
}
Eigen::Map<const MatXd> VqVaeModel::codebook() const {
  return {theta_.data() + off_.cb, cfg_.codebook_size, cfg_.enc_dim};
}
Eigen::Map<const MatXd> VqVaeModel::w3() const {
  return {theta_.data() + off_.w3, cfg_.hid_dim, cfg_.enc_dim};
}
Eigen::Map<const VecXd> VqVaeModel::b3() const {
  return {theta_.data() + off_.b3, cfg_.hid_dim};
}
Eigen::Map<const MatXd> VqVaeModel::w4() const {
  return {theta_.data() + off_.w4, cfg_.input_dim, cfg_.hid_dim};
}
Eigen::Map<const VecXd> VqVaeModel::b4() const {
  return {theta_.data() + off_.b4, cfg_.input_dim};
}

namespace {

void fill_uniform(Eigen::Map<MatXd> m, Rng& rng, double bound) {
  // Column order, matching the flat layout, so init is layout-stable.
  for (Index c = 0; c < m.cols(); ++c) {
    for (Index r = 0; r < m.rows(); ++r) {
      m(r, c) = rng.uniform(-bound, bound);
    }
  }
}

bool rows_distinct(const MatXd& m) {
  std::vector<Index> order(static_cast<std::size_t>(m.rows()));
  std::iota(order.begin(), order.end(), Index{0});
  auto row_less = [&](Index a, Index b) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (m(a, c) != m(b, c)) return m(a, c) < m(b, c);
    }
    return false;
  };
  std::sort(order.begin(), order.end(), row_less);
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (!row_less(order[i - 1], order[i]) && !row_less(order[i], order[i - 1])) {
      return false;
    }
  }
  return true;
}

}  // namespace

VqVaeModel VqVaeModel::init(const VqVaeConfig& cfg) {
  VqVaeModel model(cfg);
  Rng rng(derive_seed(cfg.seed, "model-init"));
  fill_uniform(model.w1(), rng, 1.0 / std::sqrt(cfg.input_dim));
  fill_uniform(model.w2(), rng, 1.0 / std::sqrt(cfg.hid_dim));
  fill_uniform(model.codebook(), rng, 1.0 / cfg.codebook_size);
  fill_uniform(model.w3(), rng, 1.0 / std::sqrt(cfg.enc_dim));
  fill_uniform(model.w4(), rng, 1.0 / std::sqrt(cfg.hid_dim));
  if (!rows_distinct(model.codebook())) {
    throw NumericError("codebook rows collided at init");
  }
  return model;
}

namespace {

// Squared distance up to the per-row constant |z|^2: |e_j|^2 - 2 z.e_j.
// The constant cancels in the argmin, and a strict < scan keeps ties on
// the lowest index.
Index argmin_code(const Eigen::RowVectorXd& scores) {
  Index best = 0;
  for (Index j = 1; j < scores.size(); ++j) {
    if (scores(j) < scores(best)) best = j;
  }
  return best;
}

}  // namespace

std::pair<Index, VecXd> quantize(const VecXd& z_e, const MatXd& codebook) {
  if (codebook.rows() == 0) throw DataError("empty codebook");
  if (codebook.cols() != z_e.size()) {
    throw DataError("codebook width does not match the encoder dimension");
  }
  Eigen::RowVectorXd scores =
      codebook.rowwise().squaredNorm().transpose() -
      2.0 * (codebook * z_e).transpose();
  const Index idx = argmin_code(scores);
  return {idx, codebook.row(idx).transpose()};
}

VecXi quantize_rows(const MatXd& z_e, const MatXd& codebook) {
  if (codebook.rows() == 0) throw DataError("empty codebook");
  if (codebook.cols() != z_e.cols()) {
    throw DataError("codebook width does not match the encoder dimension");
  }
  const Eigen::RowVectorXd norms = codebook.rowwise().squaredNorm().transpose();
  MatXd scores = (-2.0 * (z_e * codebook.transpose())).rowwise() + norms;
  VecXi codes(z_e.rows());
  for (Index r = 0; r < z_e.rows(); ++r) {
    codes(r) = static_cast<int>(argmin_code(scores.row(r)));
  }
  return codes;
}

Index PaddedBatch::real_frames() const {
  return static_cast<Index>(mask.cast<int>().sum());
}

PaddedBatch pad_batch(const std::vector<MatXd>& features) {
  if (features.empty()) throw DataError("pad_batch needs a non-empty list");
  PaddedBatch b;
  b.batch = static_cast<Index>(features.size());
  b.dim = features[0].cols();
  for (const auto& f : features) {
    if (f.cols() != b.dim) {
      throw DataError("feature matrices disagree on column count");
    }
    b.frames = std::max(b.frames, f.rows());
  }
  b.values = MatXd::Zero(b.batch * b.frames, b.dim);
  b.mask = MatXb::Constant(b.batch, b.frames, false);
  for (Index u = 0; u < b.batch; ++u) {
    const auto& f = features[static_cast<std::size_t>(u)];
    b.values.middleRows(u * b.frames, f.rows()) = f;
    b.mask.row(u).head(f.rows()).setConstant(true);
  }
  return b;
}

ForwardResult forward(const VqVaeModel& model, const PaddedBatch& batch) {
  if (batch.dim != model.config().input_dim) {
    throw DataError("batch feature dimension does not match the model");
  }
  ForwardResult f;
  f.a1 = (batch.values * model.w1().transpose()).rowwise() +
         model.b1().transpose();
  f.h1 = f.a1.cwiseMax(0.0);
  f.z_e = (f.h1 * model.w2().transpose()).rowwise() + model.b2().transpose();
  f.codes = quantize_rows(f.z_e, model.codebook());
  f.z_q.resize(f.z_e.rows(), f.z_e.cols());
  for (Index r = 0; r < f.z_e.rows(); ++r) {
    f.z_q.row(r) = model.codebook().row(f.codes(r));
  }
  f.a2 = (f.z_q * model.w3().transpose()).rowwise() + model.b3().transpose();
  f.h2 = f.a2.cwiseMax(0.0);
  f.recon = (f.h2 * model.w4().transpose()).rowwise() + model.b4().transpose();
  return f;
}

namespace {

// w(u*frames + t) = 1/(real frames of u * batch) on real frames, else 0,
// so sum_f w_f * per_frame_term is exactly the mean-over-frames then
// mean-over-batch reduction.
VecXd frame_weights(const PaddedBatch& batch) {
  VecXd w = VecXd::Zero(batch.batch * batch.frames);
  for (Index u = 0; u < batch.batch; ++u) {
    const Index real = batch.mask.row(u).cast<Index>().sum();
    if (real == 0) continue;
    const double wu = 1.0 / (static_cast<double>(real) *
                             static_cast<double>(batch.batch));
    for (Index t = 0; t < batch.frames; ++t) {
      if (batch.mask(u, t)) w(u * batch.frames + t) = wu;
    }
  }
  return w;
}

}  // namespace

LossTerms loss(const PaddedBatch& batch, const ForwardResult& fwd,
               double beta) {
  const VecXd w = frame_weights(batch);
  const VecXd rec_sq = (fwd.recon - batch.values).rowwise().squaredNorm();
  const VecXd vq_sq = (fwd.z_q - fwd.z_e).rowwise().squaredNorm();
  LossTerms t;
  t.recon = w.dot(rec_sq);
  t.codebook_term = w.dot(vq_sq);
  t.commit_term = beta * w.dot(vq_sq);
  t.total = t.recon + t.codebook_term + t.commit_term;
  for (Index f = 0; f < w.size(); ++f) {
    if (w(f) > 0.0) t.raw_sum += rec_sq(f) + (1.0 + beta) * vq_sq(f);
  }
  return t;
}

VecXd backward(const VqVaeModel& model, const PaddedBatch& batch,
               const ForwardResult& fwd, QuantizerGradientMode mode) {
  const double beta = model.config().beta;
  const VecXd w = frame_weights(batch);

  VqVaeModel g(model.config());  // gradient, same flat layout

  // Decoder path.
  MatXd g_rec = 2.0 * (w.asDiagonal() * (fwd.recon - batch.values));
  g.w4() = g_rec.transpose() * fwd.h2;
  g.b4() = g_rec.colwise().sum();
  MatXd g_a2 = (g_rec * model.w4()).cwiseProduct(
      (fwd.a2.array() > 0.0).cast<double>().matrix());
  g.w3() = g_a2.transpose() * fwd.z_q;
  g.b3() = g_a2.colwise().sum();
  const MatXd g_dq = g_a2 * model.w3();  // d loss / d decoder input

  // Quantization junction.
  const MatXd diff_w = w.asDiagonal() * (fwd.z_e - fwd.z_q);
  MatXd g_ze;
  if (mode == QuantizerGradientMode::StraightThrough) {
    g_ze = g_dq + 2.0 * beta * diff_w;
    auto cb = g.codebook();
    for (Index f = 0; f < diff_w.rows(); ++f) {
      if (w(f) > 0.0) cb.row(fwd.codes(f)) -= 2.0 * diff_w.row(f);
    }
  } else {
    g_ze = 2.0 * (1.0 + beta) * diff_w;
    auto cb = g.codebook();
    for (Index f = 0; f < diff_w.rows(); ++f) {
      if (w(f) > 0.0) {
        cb.row(fwd.codes(f)) +=
            g_dq.row(f) - 2.0 * (1.0 + beta) * diff_w.row(f);
      }
    }
  }

  // Encoder path.
  g.w2() = g_ze.transpose() * fwd.h1;
  g.b2() = g_ze.colwise().sum();
  MatXd g_a1 = (g_ze * model.w2()).cwiseProduct(
      (fwd.a1.array() > 0.0).cast<double>().matrix());
  g.w1() = g_a1.transpose() * batch.values;
  g.b1() = g_a1.colwise().sum();

  return std::move(g.params());
}

void adam_step(VecXd& params, const VecXd& grad, AdamState& state, double lr) {
  if (params.size() != grad.size() || params.size() != state.m.size()) {
    throw DataError("adam_step shape mismatch");
  }
  state.step += 1;
  state.m = state.beta1 * state.m + (1.0 - state.beta1) * grad;
  state.v = state.beta2 * state.v +
            (1.0 - state.beta2) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  params.array() -= lr * (state.m.array() / c1) /
                    ((state.v.array() / c2).sqrt() + state.eps);
}

double codebook_perplexity(const VecXd& code_counts) {
  const double total = code_counts.sum();
  if (!(total > 0.0)) return 1.0;
  double entropy = 0.0;
  for (Index k = 0; k < code_counts.size(); ++k) {
    const double p = code_counts(k) / total;
    if (p > 0.0) entropy -= p * std::log(p);
  }
  return std::exp(entropy);
}

VecXd count_codes(const VecXi& codes, const MatXb& mask, int codebook_size) {
  VecXd counts = VecXd::Zero(codebook_size);
  const Index frames = mask.cols();
  for (Index u = 0; u < mask.rows(); ++u) {
    for (Index t = 0; t < frames; ++t) {
      if (mask(u, t)) counts(codes(u * frames + t)) += 1.0;
    }
  }
  return counts;
}

}  // namespace tundra::vq
