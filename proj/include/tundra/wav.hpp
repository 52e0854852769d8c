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

#include <string>

#include "tundra/types.hpp"

namespace tundra::audio {

/// Mono audio held as doubles in [-1, 1]. Values are clamped on WAV write,
/// not on construction, so intermediate effect chains may overshoot.
struct AudioBuffer {
  VecXd samples;
  int sample_rate_hz = 0;

  Index size() const { return samples.size(); }
  double duration_s() const {
    return sample_rate_hz > 0
               ? static_cast<double>(samples.size()) / sample_rate_hz
               : 0.0;
  }
};

/// Read a RIFF WAV file: PCM 16-bit signed little-endian. Multi-channel
/// input is down-mixed to mono by averaging.
AudioBuffer read_wav(const std::string& path);

/// Write mono PCM 16-bit WAV, clamping samples to [-1, 1].
void write_wav(const std::string& path, const AudioBuffer& audio);

}  // namespace tundra::audio
