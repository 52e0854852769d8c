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

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "tundra/error.hpp"
#include "tundra/fft.hpp"
#include "tundra/rng.hpp"

using namespace tundra;
using audio::AudioBuffer;
using audio::EffectKind;
using audio::EffectSpec;

namespace {

namespace fs = std::filesystem;

AudioBuffer tone(double seconds, double amplitude, double hz, int sr) {
  AudioBuffer buf;
  buf.sample_rate_hz = sr;
  const Index n = static_cast<Index>(std::lround(seconds * sr));
  buf.samples.resize(n);
  for (Index i = 0; i < n; ++i) {
    buf.samples(i) =
        amplitude * std::sin(2.0 * M_PI * hz * static_cast<double>(i) / sr);
  }
  return buf;
}

double steady_rms(const VecXd& x, Index skip) {
  const Index n = x.size() - skip;
  return std::sqrt(x.tail(n).squaredNorm() / static_cast<double>(n));
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           fs::path("tundra-effects-" + std::to_string(::getpid()) + "-" +
                    std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::string file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

corpus::Manifest make_audio_manifest(const TempDir& tmp, int n_entries,
                                     int sr = 8000) {
  corpus::Manifest m;
  for (int i = 0; i < n_entries; ++i) {
    const std::string id = "utt" + std::to_string(i);
    const std::string path = (tmp.path / (id + ".wav")).string();
    audio::write_wav(path, tone(0.125, 0.4, 200.0 + 50.0 * i, sr));
    m.entries.push_back(corpus::ManifestEntry{id, path, "", "sub"});
  }
  return m;
}

}  // namespace

TEST_CASE("lowpass impulse response starts at the pole coefficient") {
  AudioBuffer impulse;
  impulse.sample_rate_hz = 16000;
  impulse.samples = VecXd::Zero(8);
  impulse.samples(0) = 1.0;
  const AudioBuffer out = audio::lowpass_single_pole(impulse, 300.0);
  const double alpha = 1.0 - std::exp(-2.0 * M_PI * 300.0 / 16000.0);
  CHECK(out.samples(0) == doctest::Approx(alpha).epsilon(1e-12));
  CHECK(out.samples(1) == doctest::Approx(alpha * (1.0 - alpha)).epsilon(1e-12));
}

TEST_CASE("lowpass has unit DC gain") {
  AudioBuffer dc;
  dc.sample_rate_hz = 16000;
  dc.samples = VecXd::Constant(16000, 1.0);
  const AudioBuffer out = audio::lowpass_single_pole(dc, 300.0);
  CHECK(std::abs(out.samples(out.samples.size() - 1) - 1.0) < 1e-6);
}

TEST_CASE("lowpass attenuates the cutoff tone by about 3 dB") {
  const int sr = 16000;
  const AudioBuffer in = tone(1.0, 0.5, 300.0, sr);
  const AudioBuffer out = audio::lowpass_single_pole(in, 300.0);
  const Index skip = sr / 10;  // let the filter settle
  const double gain_db = 20.0 * std::log10(steady_rms(out.samples, skip) /
                                           steady_rms(in.samples, skip));
  CHECK(gain_db < -2.0);
  CHECK(gain_db > -4.0);

  // And the measured gain agrees with the analytic transfer function.
  const double alpha = 1.0 - std::exp(-2.0 * M_PI * 300.0 / sr);
  const double w = 2.0 * M_PI * 300.0 / sr;
  const double beta = 1.0 - alpha;
  const double h2 = alpha * alpha /
                    (1.0 - 2.0 * beta * std::cos(w) + beta * beta);
  CHECK(gain_db == doctest::Approx(10.0 * std::log10(h2)).epsilon(0.02));
}

TEST_CASE("lowpass is linear") {
  Rng rng(5);
  AudioBuffer x, z;
  x.sample_rate_hz = z.sample_rate_hz = 8000;
  x.samples.resize(400);
  z.samples.resize(400);
  for (Index i = 0; i < 400; ++i) {
    x.samples(i) = rng.uniform(-1.0, 1.0);
    z.samples(i) = rng.uniform(-1.0, 1.0);
  }
  AudioBuffer mix = x;
  mix.samples = 0.7 * x.samples + 0.3 * z.samples;
  const VecXd lhs = audio::lowpass_single_pole(mix, 500.0).samples;
  const VecXd rhs = 0.7 * audio::lowpass_single_pole(x, 500.0).samples +
                    0.3 * audio::lowpass_single_pole(z, 500.0).samples;
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("lowpass rejects cutoffs outside the open nyquist interval") {
  const AudioBuffer in = tone(0.1, 0.5, 300.0, 16000);
  CHECK_THROWS_AS(audio::lowpass_single_pole(in, 0.0), DataError);
  CHECK_THROWS_AS(audio::lowpass_single_pole(in, 8000.0), DataError);
  CHECK_THROWS_AS(audio::lowpass_single_pole(in, -10.0), DataError);
}

TEST_CASE("slowing down stretches duration and lowers pitch") {
  const int sr = 16000;
  const AudioBuffer in = tone(1.0, 0.5, 440.0, sr);
  const AudioBuffer out = audio::change_speed(in, 0.8);
  CHECK(out.sample_rate_hz == sr);

  const double duration_ratio =
      static_cast<double>(out.size()) / static_cast<double>(in.size());
  CHECK(duration_ratio == doctest::Approx(1.25).epsilon(0.01));

  // Dominant frequency should scale by the factor: 440 * 0.8 = 352 Hz.
  const Index nfft = 16384;
  const VecXd mag = fft_magnitude(out.samples.head(nfft), nfft);
  Index peak = 0;
  mag.maxCoeff(&peak);
  const double peak_hz = static_cast<double>(peak) * sr / static_cast<double>(nfft);
  CHECK(peak_hz == doctest::Approx(352.0).epsilon(0.01));
}

TEST_CASE("speed factor one is the identity") {
  const AudioBuffer in = tone(0.25, 0.5, 440.0, 8000);
  const AudioBuffer out = audio::change_speed(in, 1.0);
  REQUIRE(out.size() == in.size());
  CHECK((out.samples.array() == in.samples.array()).all());
}

TEST_CASE("speeding up shortens duration") {
  const AudioBuffer in = tone(1.0, 0.5, 440.0, 8000);
  const AudioBuffer out = audio::change_speed(in, 2.0);
  CHECK(static_cast<double>(out.size()) / static_cast<double>(in.size()) ==
        doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("speed factors outside the supported range are rejected") {
  const AudioBuffer in = tone(0.1, 0.5, 440.0, 8000);
  CHECK_THROWS_AS(audio::change_speed(in, 0.05), DataError);
  CHECK_THROWS_AS(audio::change_speed(in, 11.0), DataError);
}

TEST_CASE("reverb of an impulse is a unit-energy response") {
  AudioBuffer impulse;
  impulse.sample_rate_hz = 8000;
  impulse.samples = VecXd::Zero(1);
  impulse.samples(0) = 1.0;
  const AudioBuffer out = audio::reverb(impulse, 42);
  CHECK(out.size() == 4000);  // rt60 0.5 s at 8 kHz, input length 1
  CHECK(out.samples.squaredNorm() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("reverb is deterministic in the seed and length-correct") {
  const AudioBuffer in = tone(0.125, 0.4, 300.0, 8000);
  const AudioBuffer a = audio::reverb(in, 7);
  const AudioBuffer b = audio::reverb(in, 7);
  const AudioBuffer c = audio::reverb(in, 8);
  CHECK(a.size() == in.size() + 4000 - 1);
  CHECK((a.samples.array() == b.samples.array()).all());
  CHECK((a.samples.array() != c.samples.array()).any());
}

TEST_CASE("reverb keeps the dry path when asked") {
  const AudioBuffer in = tone(0.125, 0.4, 300.0, 8000);
  audio::ReverbConfig cfg;
  cfg.wet_only = false;
  const AudioBuffer wet = audio::reverb(in, 7);
  const AudioBuffer both = audio::reverb(in, 7, cfg);
  const VecXd expected_head = wet.samples.head(in.size()) + in.samples;
  CHECK((both.samples.head(in.size()) - expected_head).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("effect specs parse and print round-trip names") {
  const EffectSpec lp = EffectSpec::parse("lowpass:300");
  CHECK(lp.kind == EffectKind::Lowpass);
  CHECK(lp.param == doctest::Approx(300.0));
  CHECK(lp.name() == "lowpass300");

  const EffectSpec sp = EffectSpec::parse("speed:0.8");
  CHECK(sp.kind == EffectKind::Speed);
  CHECK(sp.param == doctest::Approx(0.8));
  CHECK(sp.name() == "speed0p8");

  const EffectSpec rv = EffectSpec::parse("reverb");
  CHECK(rv.kind == EffectKind::Reverb);
  CHECK(rv.name() == "reverb");

  CHECK_THROWS_AS(EffectSpec::parse("speed"), UsageError);
  CHECK_THROWS_AS(EffectSpec::parse("lowpass:abc"), UsageError);
  CHECK_THROWS_AS(EffectSpec::parse("speed:0.8x"), UsageError);
  CHECK_THROWS_AS(EffectSpec::parse("reverb:3"), UsageError);
  CHECK_THROWS_AS(EffectSpec::parse("chorus"), UsageError);
}

TEST_CASE("augmenting ten entries with one effect doubles the manifest") {
  TempDir tmp;
  const corpus::Manifest in = make_audio_manifest(tmp, 10);
  const std::string out_dir = (tmp.path / "aug").string();
  const corpus::Manifest out =
      audio::augment_dataset(in, {EffectSpec::parse("speed:0.8")}, out_dir, 1);
  REQUIRE(out.size() == 20);
  for (int i = 0; i < 10; ++i) {
    CHECK(out.entries[static_cast<std::size_t>(i)].id == in.entries[static_cast<std::size_t>(i)].id);
  }
  for (int i = 0; i < 10; ++i) {
    const auto& copy = out.entries[static_cast<std::size_t>(10 + i)];
    CHECK(copy.id == in.entries[static_cast<std::size_t>(i)].id + "_speed0p8");
    CHECK(copy.subcorpus == "sub");
    CHECK(fs::exists(copy.audio_path));
    const AudioBuffer slow = audio::read_wav(copy.audio_path);
    CHECK(slow.sample_rate_hz == 8000);
    CHECK(static_cast<double>(slow.size()) / 1000.0 ==
          doctest::Approx(1.25).epsilon(0.01));
  }
}

TEST_CASE("three entries with three effects add nine copies") {
  TempDir tmp;
  const corpus::Manifest in = make_audio_manifest(tmp, 3);
  const std::vector<EffectSpec> effects = {EffectSpec::parse("lowpass:500"),
                                           EffectSpec::parse("speed:1.1"),
                                           EffectSpec::parse("reverb")};
  const corpus::Manifest out = audio::augment_dataset(
      in, effects, (tmp.path / "aug").string(), 9);
  CHECK(out.size() == 12);
}

TEST_CASE("augmentation requires at least one effect") {
  TempDir tmp;
  const corpus::Manifest in = make_audio_manifest(tmp, 1);
  CHECK_THROWS_AS(
      audio::augment_dataset(in, {}, (tmp.path / "aug").string(), 1),
      UsageError);
}

TEST_CASE("reverb copies depend on the id, not the manifest order") {
  TempDir tmp;
  corpus::Manifest in = make_audio_manifest(tmp, 2);
  const std::vector<EffectSpec> effects = {EffectSpec::parse("reverb")};
  audio::augment_dataset(in, effects, (tmp.path / "a").string(), 5);
  std::swap(in.entries[0], in.entries[1]);
  audio::augment_dataset(in, effects, (tmp.path / "b").string(), 5);
  CHECK(file_bytes((tmp.path / "a" / "utt0_reverb.wav").string()) ==
        file_bytes((tmp.path / "b" / "utt0_reverb.wav").string()));
  CHECK(file_bytes((tmp.path / "a" / "utt1_reverb.wav").string()) ==
        file_bytes((tmp.path / "b" / "utt1_reverb.wav").string()));
}
