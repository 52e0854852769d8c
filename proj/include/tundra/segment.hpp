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

#include <vector>

#include "tundra/wav.hpp"

namespace tundra::audio {

struct SegmentationConfig {
  double frame_ms = 25.0;
  double hop_ms = 10.0;
  // Frames this far (dB) below the median frame energy count as silence.
  double silence_threshold_db = -35.0;
  // Frames below this absolute level (dBFS) count as silence regardless of
  // the median, so that all-quiet recordings produce no segments.
  double absolute_floor_db = -80.0;
  double min_silence_ms = 300.0;
  double max_segment_s = 20.0;
  double fallback_chunk_s = 300.0;  // fixed-length mode: "cut by 5 minutes"
};

/// A slice of the source buffer plus where it came from.
struct AudioSegment {
  Index offset = 0;  // first sample in the source buffer
  AudioBuffer audio;
};

/// Per-frame energies in dB: 10*log10(mean square + 1e-12).
VecXd frame_energies_db(const AudioBuffer& audio, double frame_ms,
                        double hop_ms);

/// Cut at the midpoint of every silent region of at least min_silence_ms.
/// Spans with no speech frames are dropped (all-silent input gives an empty
/// list); spans longer than max_segment_s are re-split recursively at their
/// weakest internal frame.
std::vector<AudioSegment> split_on_silence(const AudioBuffer& audio,
                                           const SegmentationConfig& cfg);

/// Consecutive fixed-length chunks; the final remainder is kept, so the
/// concatenation of the outputs reproduces the input exactly.
std::vector<AudioSegment> split_fixed(const AudioBuffer& audio, double chunk_s);

}  // namespace tundra::audio
