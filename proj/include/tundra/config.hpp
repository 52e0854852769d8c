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

#ifndef TUNDRA_CONFIG_HPP_
#define TUNDRA_CONFIG_HPP_

#include <array>
#include <cstdint>
#include <string>

#include "tundra/mfcc.hpp"
#include "tundra/segment.hpp"
#include "tundra/vqvae.hpp"

namespace tundra {

// Everything the pipeline stages read, loadable from one INI file.
// Unknown sections or keys are errors; every field has a default.
struct PipelineConfig {
  std::uint64_t seed = 0;  // root seed; stages derive named sub-seeds

  audio::SegmentationConfig segment;
  audio::MfccConfig mfcc;
  vq::VqVaeConfig vqvae;  // vqvae.seed is derived from the root seed

  std::string chukchi_lexicon;
  std::string russian_lexicon;

  std::array<double, 3> split_ratios{0.8, 0.1, 0.1};  // train/val/test

  bool cer_count_spaces = true;
  bool eval_lowercase = false;
  bool eval_strip_punctuation = false;
};

// INI sections: [pipeline] [segment] [mfcc] [vqvae] [langid] [split]
// [eval]. Lines whose first non-blank character is '#' or ';' are
// comments. Throws DataError naming the offending line.
PipelineConfig parse_config(const std::string& text, const std::string& name);
PipelineConfig load_config(const std::string& path);

// Deterministic full dump; equal configs produce equal text.
std::string canonical_config(const PipelineConfig& cfg);

// CRC-32 of the canonical dump, used to stamp run manifests.
std::uint32_t config_hash(const PipelineConfig& cfg);

}  // namespace tundra

#endif  // TUNDRA_CONFIG_HPP_
