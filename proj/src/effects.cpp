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

#include "tundra/effects.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "tundra/error.hpp"
#include "tundra/fft.hpp"
#include "tundra/rng.hpp"

namespace tundra::audio {

AudioBuffer lowpass_single_pole(const AudioBuffer& in, double cutoff_hz) {
  const double nyquist = in.sample_rate_hz / 2.0;
  if (!(cutoff_hz > 0.0 && cutoff_hz < nyquist)) {
    throw DataError("lowpass cutoff must be in (0, " + std::to_string(nyquist) +
                    ") Hz, got " + std::to_string(cutoff_hz));
  }
  const double alpha = 1.0 - std::exp(-2.0 * M_PI * cutoff_hz / in.sample_rate_hz);
  AudioBuffer out;
  out.sample_rate_hz = in.sample_rate_hz;
  out.samples.resize(in.size());
  double y = 0.0;
  for (Index n = 0; n < in.size(); ++n) {
    y += alpha * (in.samples(n) - y);
    out.samples(n) = y;
  }
  return out;
}

AudioBuffer change_speed(const AudioBuffer& in, double factor) {
  if (!(factor >= 0.1 && factor <= 10.0)) {
    throw DataError("speed factor must be in [0.1, 10], got " +
                    std::to_string(factor));
  }
  AudioBuffer out;
  out.sample_rate_hz = in.sample_rate_hz;
  if (in.size() == 0) {
    out.samples.resize(0);
    return out;
  }
  const Index out_len =
      static_cast<Index>(std::floor(static_cast<double>(in.size() - 1) / factor)) + 1;
  out.samples.resize(out_len);
  for (Index n = 0; n < out_len; ++n) {
    const double pos = n * factor;
    const Index i = static_cast<Index>(pos);
    const double frac = pos - i;
    if (i + 1 < in.size()) {
      out.samples(n) = (1.0 - frac) * in.samples(i) + frac * in.samples(i + 1);
    } else {
      out.samples(n) = in.samples(i);
    }
  }
  return out;
}

AudioBuffer reverb(const AudioBuffer& in, std::uint64_t seed,
                   const ReverbConfig& cfg) {
  if (!(cfg.rt60_s > 0.0)) {
    throw DataError("reverb rt60 must be positive");
  }
  AudioBuffer out;
  out.sample_rate_hz = in.sample_rate_hz;
  if (in.size() == 0) {
    out.samples.resize(0);
    return out;
  }
  const Index ir_len = static_cast<Index>(
      std::lround(cfg.rt60_s * in.sample_rate_hz));
  // Amplitude decay rate so that the envelope drops 60 dB over rt60.
  const double decay = std::log(1000.0) / (cfg.rt60_s * in.sample_rate_hz);
  Rng rng(seed);
  VecXd ir(ir_len);
  for (Index n = 0; n < ir_len; ++n) {
    ir(n) = rng.normal() * std::exp(-decay * n);
  }
  const double energy = ir.squaredNorm();
  if (energy > 0.0) ir /= std::sqrt(energy);

  VecXd wet = fft_convolve(in.samples, ir);
  if (!cfg.wet_only) {
    wet.head(in.size()) += in.samples;
  }
  out.samples = std::move(wet);
  return out;
}

EffectSpec EffectSpec::parse(const std::string& text) {
  EffectSpec spec;
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  std::string arg;
  if (colon != std::string::npos) arg = text.substr(colon + 1);

  auto parse_num = [&](const char* what) {
    if (arg.empty()) {
      throw UsageError(std::string(head) + " effect needs a " + what +
                       ", e.g. " + head + ":" +
                       (head == "speed" ? "0.8" : "300"));
    }
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != arg.size()) {
      throw UsageError("bad " + std::string(what) + " '" + arg + "' for " + head);
    }
    return value;
  };

  if (head == "lowpass") {
    spec.kind = EffectKind::Lowpass;
    spec.param = parse_num("cutoff frequency");
  } else if (head == "speed") {
    spec.kind = EffectKind::Speed;
    spec.param = parse_num("factor");
  } else if (head == "reverb") {
    if (!arg.empty()) {
      throw UsageError("reverb takes no parameter, got '" + arg + "'");
    }
    spec.kind = EffectKind::Reverb;
  } else {
    throw UsageError("unknown effect '" + head +
                     "' (expected lowpass:<hz>, speed:<factor> or reverb)");
  }
  return spec;
}

std::string EffectSpec::name() const {
  auto fmt = [](double v) {
    char buf[32];
    if (v == std::floor(v) && std::abs(v) < 1e9) {
      std::snprintf(buf, sizeof(buf), "%.0f", v);
    } else {
      std::snprintf(buf, sizeof(buf), "%g", v);
    }
    std::string s(buf);
    for (char& c : s) {
      if (c == '.') c = 'p';
      if (c == '-') c = 'm';
    }
    return s;
  };
  switch (kind) {
    case EffectKind::Lowpass: return "lowpass" + fmt(param);
    case EffectKind::Speed: return "speed" + fmt(param);
    case EffectKind::Reverb: return "reverb";
  }
  return "effect";
}

AudioBuffer apply_effect(const AudioBuffer& in, const EffectSpec& spec,
                         std::uint64_t seed) {
  switch (spec.kind) {
    case EffectKind::Lowpass: return lowpass_single_pole(in, spec.param);
    case EffectKind::Speed: return change_speed(in, spec.param);
    case EffectKind::Reverb: return reverb(in, seed);
  }
  throw UsageError("unhandled effect kind");
}

corpus::Manifest augment_dataset(const corpus::Manifest& in,
                                 const std::vector<EffectSpec>& effects,
                                 const std::string& out_dir,
                                 std::uint64_t seed) {
  if (effects.empty()) {
    throw UsageError("no effects given");
  }
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  corpus::Manifest out;
  out.entries = in.entries;
  for (const auto& entry : in.entries) {
    const AudioBuffer original = read_wav(entry.audio_path);
    for (const auto& spec : effects) {
      corpus::ManifestEntry copy = entry;
      copy.id = entry.id + "_" + spec.name();
      copy.audio_path = (fs::path(out_dir) / (copy.id + ".wav")).string();
      const std::uint64_t effect_seed = derive_seed(seed, copy.id);
      write_wav(copy.audio_path, apply_effect(original, spec, effect_seed));
      out.entries.push_back(std::move(copy));
    }
  }
  return out;
}

}  // namespace tundra::audio
