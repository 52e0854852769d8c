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

#include "tundra/vqvae_train.hpp"

#include <zlib.h>

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "tundra/error.hpp"
#include "tundra/rng.hpp"

namespace tundra::vq {
namespace {

void check_dims(const std::vector<MatXd>& features, int input_dim,
                const char* which) {
  for (const auto& f : features) {
    if (f.cols() != input_dim) {
      throw DataError(std::string(which) + " feature matrix has " +
                      std::to_string(f.cols()) + " columns, model expects " +
                      std::to_string(input_dim));
    }
  }
}

std::vector<MatXd> gather(const std::vector<MatXd>& features,
                          const std::vector<std::size_t>& order,
                          std::size_t start, std::size_t count) {
  std::vector<MatXd> out;
  out.reserve(count);
  for (std::size_t i = start; i < start + count; ++i) {
    out.push_back(features[order[i]]);
  }
  return out;
}

}  // namespace

double evaluate(const VqVaeModel& model, const std::vector<MatXd>& features,
                int batch_size, VecXd* code_counts) {
  if (features.empty()) throw DataError("empty feature set");
  check_dims(features, model.config().input_dim, "evaluation");
  const std::size_t n = features.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  double sum = 0.0;
  for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(batch_size)) {
    const std::size_t count =
        std::min(static_cast<std::size_t>(batch_size), n - start);
    const PaddedBatch b = pad_batch(gather(features, order, start, count));
    const ForwardResult fwd = forward(model, b);
    sum += loss(b, fwd, model.config().beta).total * static_cast<double>(count);
    if (code_counts != nullptr) {
      *code_counts +=
          count_codes(fwd.codes, b.mask, model.config().codebook_size);
    }
  }
  return sum / static_cast<double>(n);
}

TrainResult train(const VqVaeConfig& cfg, const std::vector<MatXd>& train_set,
                  const std::vector<MatXd>& val_set, std::ostream* log) {
  cfg.validate();
  if (train_set.empty()) throw DataError("empty training set");
  if (val_set.empty()) throw DataError("empty validation set");
  check_dims(train_set, cfg.input_dim, "training");
  check_dims(val_set, cfg.input_dim, "validation");

  const auto t0 = std::chrono::steady_clock::now();
  VqVaeModel model = VqVaeModel::init(cfg);
  AdamState adam(model.param_count());
  Rng rng(derive_seed(cfg.seed, "train"));

  TrainReport report;
  report.config = cfg;
  VecXd best_params = model.params();
  double best_val = std::numeric_limits<double>::infinity();
  int best_epoch = 0;

  const std::size_t n = train_set.size();
  char line[256];
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const std::vector<std::size_t> order = rng.permutation(n);
    double train_sum = 0.0;
    VecXd counts = VecXd::Zero(cfg.codebook_size);
    for (std::size_t start = 0; start < n;
         start += static_cast<std::size_t>(cfg.batch_train)) {
      const std::size_t count =
          std::min(static_cast<std::size_t>(cfg.batch_train), n - start);
      const PaddedBatch b = pad_batch(gather(train_set, order, start, count));
      const ForwardResult fwd = forward(model, b);
      const LossTerms lt = loss(b, fwd, cfg.beta);
      train_sum += lt.total * static_cast<double>(count);
      counts += count_codes(fwd.codes, b.mask, cfg.codebook_size);
      const VecXd grad =
          backward(model, b, fwd, QuantizerGradientMode::StraightThrough);
      adam_step(model.params(), grad, adam, cfg.lr);
    }
    const double train_loss = train_sum / static_cast<double>(n);
    const double val = evaluate(model, val_set, cfg.batch_val);
    if (!std::isfinite(train_loss) || !std::isfinite(val)) {
      report.diverged = true;
      if (log != nullptr) {
        *log << "epoch=" << epoch << " diverged=1\n";
      }
      break;
    }
    report.train_loss.push_back(train_loss);
    report.val_loss.push_back(val);
    report.perplexity.push_back(codebook_perplexity(counts));
    if (val < best_val) {
      best_val = val;
      best_epoch = epoch;
      best_params = model.params();
    }
    if (log != nullptr) {
      std::snprintf(line, sizeof(line),
                    "epoch=%d train_loss=%.6f val_loss=%.6f perplexity=%.6f "
                    "best_epoch=%d\n",
                    epoch, train_loss, val, report.perplexity.back(),
                    best_epoch);
      *log << line;
    }
  }

  report.best_epoch = best_epoch;
  report.best_val = best_epoch > 0 ? best_val : 0.0;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  model.params() = best_params;
  return {std::move(model), std::move(report)};
}

std::string format_report_summary(const TrainReport& report,
                                  const std::string& experiment) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-24s %-26s %s\n", "experiment",
                "val loss (first epoch)", "val loss (last epoch)");
  out << buf;
  if (report.val_loss.empty()) {
    std::snprintf(buf, sizeof(buf), "%-24s %-26s %s\n", experiment.c_str(),
                  "n/a", "n/a");
    out << buf;
  } else {
    std::snprintf(buf, sizeof(buf), "%-24s %-26.4f %.4f\n", experiment.c_str(),
                  report.val_loss.front(), report.val_loss.back());
    out << buf;
  }
  if (report.best_epoch > 0) {
    std::snprintf(buf, sizeof(buf), "best epoch %d: val loss %.4f\n",
                  report.best_epoch, report.best_val);
    out << buf;
  }
  if (report.diverged) out << "training diverged before finishing\n";
  return out.str();
}

namespace {

constexpr char kMagic[8] = {'T', 'N', 'D', 'R', 'V', 'Q', '0', '1'};

void put_u32(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>(v >> (8 * i)));
}

void put_u64(std::string& s, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) s.push_back(static_cast<char>(v >> (8 * i)));
}

void put_f64(std::string& s, double v) {
  put_u64(s, std::bit_cast<std::uint64_t>(v));
}

class Cursor {
 public:
  Cursor(const std::string& s, std::size_t pos) : s_(s), pos_(pos) {}
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(
               static_cast<unsigned char>(s_[pos_ + static_cast<std::size_t>(i)]))
           << (8 * i);
    }
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<std::uint64_t>(
               static_cast<unsigned char>(s_[pos_ + static_cast<std::size_t>(i)]))
           << (8 * i);
    }
    pos_ += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::size_t pos() const { return pos_; }

 private:
  void need(std::size_t n) {
    if (pos_ + n > s_.size()) throw DataError("truncated checkpoint");
  }
  const std::string& s_;
  std::size_t pos_;
};

std::uint32_t crc_of(const std::string& body) {
  return static_cast<std::uint32_t>(
      crc32(crc32(0L, Z_NULL, 0),
            reinterpret_cast<const Bytef*>(body.data()),
            static_cast<uInt>(body.size())));
}

}  // namespace

void save_checkpoint(const std::string& path, const VqVaeModel& model) {
  if (!model.params().allFinite()) {
    throw NumericError("refusing to checkpoint non-finite parameters");
  }
  const VqVaeConfig& c = model.config();
  std::string body;
  body.reserve(64 + static_cast<std::size_t>(model.param_count()) * 8);
  put_u32(body, 1);  // format version
  put_u32(body, static_cast<std::uint32_t>(c.input_dim));
  put_u32(body, static_cast<std::uint32_t>(c.hid_dim));
  put_u32(body, static_cast<std::uint32_t>(c.enc_dim));
  put_u32(body, static_cast<std::uint32_t>(c.codebook_size));
  put_f64(body, c.beta);
  put_u32(body, static_cast<std::uint32_t>(c.epochs));
  put_f64(body, c.lr);
  put_u32(body, static_cast<std::uint32_t>(c.batch_train));
  put_u32(body, static_cast<std::uint32_t>(c.batch_val));
  put_u32(body, static_cast<std::uint32_t>(c.batch_test));
  put_u64(body, c.seed);
  put_u64(body, static_cast<std::uint64_t>(model.param_count()));
  for (Index i = 0; i < model.param_count(); ++i) {
    put_f64(body, model.params()(i));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out.write(kMagic, sizeof(kMagic));
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  std::string trailer;
  put_u32(trailer, crc_of(body));
  out.write(trailer.data(), static_cast<std::streamsize>(trailer.size()));
  if (!out) throw DataError("write failed for " + path);
}

VqVaeModel load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream raw;
  raw << in.rdbuf();
  const std::string data = raw.str();
  if (data.size() < sizeof(kMagic) + 4 ||
      data.compare(0, sizeof(kMagic), kMagic, sizeof(kMagic)) != 0) {
    throw DataError(path + ": not a checkpoint (bad magic)");
  }
  const std::string body =
      data.substr(sizeof(kMagic), data.size() - sizeof(kMagic) - 4);
  Cursor tail(data, data.size() - 4);
  if (tail.u32() != crc_of(body)) {
    throw DataError(path + ": checksum mismatch, file corrupt");
  }
  Cursor cur(body, 0);
  const std::uint32_t version = cur.u32();
  if (version != 1) {
    throw DataError(path + ": unsupported checkpoint version " +
                    std::to_string(version));
  }
  VqVaeConfig c;
  c.input_dim = static_cast<int>(cur.u32());
  c.hid_dim = static_cast<int>(cur.u32());
  c.enc_dim = static_cast<int>(cur.u32());
  c.codebook_size = static_cast<int>(cur.u32());
  c.beta = cur.f64();
  c.epochs = static_cast<int>(cur.u32());
  c.lr = cur.f64();
  c.batch_train = static_cast<int>(cur.u32());
  c.batch_val = static_cast<int>(cur.u32());
  c.batch_test = static_cast<int>(cur.u32());
  c.seed = cur.u64();
  VqVaeModel model(c);
  const std::uint64_t count = cur.u64();
  if (count != static_cast<std::uint64_t>(model.param_count())) {
    throw DataError(path + ": parameter count does not match its config");
  }
  for (Index i = 0; i < model.param_count(); ++i) {
    model.params()(i) = cur.f64();
  }
  if (!model.params().allFinite()) {
    throw NumericError(path + ": non-finite parameters in checkpoint");
  }
  return model;
}

}  // namespace tundra::vq
