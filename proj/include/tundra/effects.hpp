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

#ifndef TUNDRA_EFFECTS_HPP_
#define TUNDRA_EFFECTS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "tundra/corpus.hpp"
#include "tundra/wav.hpp"

namespace tundra::audio {

// One-pole IIR lowpass, y[n] = y[n-1] + a * (x[n] - y[n-1]) with
// a = 1 - exp(-2*pi*fc/sr). DC gain is exactly 1; response is -3 dB
// near the cutoff. Throws DataError unless 0 < cutoff_hz < sr/2.
AudioBuffer lowpass_single_pole(const AudioBuffer& in, double cutoff_hz);

// Resamples by linear interpolation at positions n*factor while keeping
// the sample rate, so both duration and pitch scale by 1/factor and
// factor respectively. factor must lie in [0.1, 10].
AudioBuffer change_speed(const AudioBuffer& in, double factor);

struct ReverbConfig {
  double rt60_s = 0.5;    // time for the impulse response to decay by 60 dB
  bool wet_only = true;   // discard the dry path entirely
};

// Convolves with a seeded synthetic room response: white noise shaped by
// an exponential decay, normalized to unit energy. Output length is
// input length + ir length - 1.
AudioBuffer reverb(const AudioBuffer& in, std::uint64_t seed,
                   const ReverbConfig& cfg = {});

enum class EffectKind { Lowpass, Speed, Reverb };

struct EffectSpec {
  EffectKind kind = EffectKind::Lowpass;
  double param = 0.0;  // cutoff hz for lowpass, factor for speed, unused for reverb

  // Parses "lowpass:300", "speed:0.8" or "reverb". Throws UsageError on
  // anything else.
  static EffectSpec parse(const std::string& text);

  // Short id suffix, e.g. "lowpass300", "speed0p8", "reverb".
  std::string name() const;
};

AudioBuffer apply_effect(const AudioBuffer& in, const EffectSpec& spec,
                         std::uint64_t seed);

// Writes one augmented copy of every manifest entry per effect into
// out_dir, with ids suffixed by the effect name, and returns a manifest
// holding the originals followed by the new copies. Reverb seeds are
// derived per entry id so the result is independent of entry order.
corpus::Manifest augment_dataset(const corpus::Manifest& in,
                                 const std::vector<EffectSpec>& effects,
                                 const std::string& out_dir,
                                 std::uint64_t seed);

}  // namespace tundra::audio

#endif  // TUNDRA_EFFECTS_HPP_
