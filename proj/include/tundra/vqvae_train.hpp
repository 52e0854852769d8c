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

#ifndef TUNDRA_VQVAE_TRAIN_HPP_
#define TUNDRA_VQVAE_TRAIN_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "tundra/vqvae.hpp"

namespace tundra::vq {

struct TrainReport {
  VqVaeConfig config;
  std::vector<double> train_loss;  // one entry per completed epoch
  std::vector<double> val_loss;
  std::vector<double> perplexity;  // code usage on the training data
  int best_epoch = 0;              // 1-based; 0 before any epoch finishes
  double best_val = 0.0;
  double wall_seconds = 0.0;
  // Set when a non-finite loss appeared; training stops at that epoch
  // and the histories end with the last finite epoch.
  bool diverged = false;
};

struct TrainResult {
  VqVaeModel model;  // parameters from the best validation epoch
  TrainReport report;
};

// Mean total loss of a feature set, evaluated in fixed-size batches.
// If code_counts is non-null, code usage over the set is added to it.
double evaluate(const VqVaeModel& model, const std::vector<MatXd>& features,
                int batch_size, VecXd* code_counts = nullptr);

// Epoch loop: seeded shuffle, minibatch Adam updates with
// straight-through gradients, per-epoch validation, best-by-validation
// parameters retained. Throws DataError on an empty feature set. When
// log is non-null, one key=value line per epoch is written to it.
TrainResult train(const VqVaeConfig& cfg, const std::vector<MatXd>& train_set,
                  const std::vector<MatXd>& val_set,
                  std::ostream* log = nullptr);

// Two-column summary naming the first and last recorded validation
// losses, plus the retained best epoch.
std::string format_report_summary(const TrainReport& report,
                                  const std::string& experiment = "vq-vae");

// Versioned binary checkpoint: config echo, flat parameters, CRC-32
// trailer. load re-validates the checksum and finiteness.
void save_checkpoint(const std::string& path, const VqVaeModel& model);
VqVaeModel load_checkpoint(const std::string& path);

}  // namespace tundra::vq

#endif  // TUNDRA_VQVAE_TRAIN_HPP_
