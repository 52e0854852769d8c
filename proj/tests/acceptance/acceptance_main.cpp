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

// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any fail. The last criterion drives the
// installed command-line binary (path in argv[1]) through a synthetic
// pipeline twice and compares the artifact trees.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tundra/config.hpp"
#include "tundra/corpus.hpp"
#include "tundra/effects.hpp"
#include "tundra/error.hpp"
#include "tundra/evalmetrics.hpp"
#include "tundra/featfile.hpp"
#include "tundra/fft.hpp"
#include "tundra/langid.hpp"
#include "tundra/rng.hpp"
#include "tundra/segment.hpp"
#include "tundra/textnorm.hpp"
#include "tundra/unicode.hpp"
#include "tundra/vqvae.hpp"
#include "tundra/vqvae_train.hpp"
#include "tundra/wav.hpp"

namespace fs = std::filesystem;
using namespace tundra;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& what) {
  if (!cond) throw Failure(what);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), "cannot write " + path);
  out << content;
}

audio::AudioBuffer tone(double freq_hz, double seconds, double amplitude,
                        int sr) {
  audio::AudioBuffer buf;
  buf.sample_rate_hz = sr;
  const Index n = static_cast<Index>(seconds * sr);
  buf.samples.resize(n);
  for (Index i = 0; i < n; ++i) {
    buf.samples(i) =
        amplitude * std::sin(2.0 * M_PI * freq_hz * static_cast<double>(i) / sr);
  }
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Edit distance against exhaustive search.

// Minimal edit cost by brute force: enumerate every order-preserving
// matching between the two sequences (subset bitmasks on both sides),
// charge unmatched tokens as deletions/insertions and mismatched matches
// as substitutions. No dynamic programming involved.
std::int64_t exhaustive_distance(const std::vector<int>& a,
                                 const std::vector<int>& b) {
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());
  std::int64_t best = n + m;
  for (unsigned sa = 0; sa < (1u << n); ++sa) {
    const int k = __builtin_popcount(sa);
    for (unsigned sb = 0; sb < (1u << m); ++sb) {
      if (__builtin_popcount(sb) != k) continue;
      std::int64_t cost = (n - k) + (m - k);
      int ja = 0;
      std::vector<int> picked;
      picked.reserve(k);
      for (int i = 0; i < n; ++i) {
        if (sa & (1u << i)) picked.push_back(a[static_cast<std::size_t>(i)]);
      }
      for (int j = 0; j < m; ++j) {
        if (sb & (1u << j)) {
          if (picked[static_cast<std::size_t>(ja)] !=
              b[static_cast<std::size_t>(j)]) {
            ++cost;
          }
          ++ja;
        }
      }
      best = std::min(best, cost);
    }
  }
  return best;
}

void check_edit_distance_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(6);
    const std::size_t m = rng.uniform_index(7);
    std::vector<int> a(n), b(m);
    for (auto& v : a) v = static_cast<int>(rng.uniform_index(3));
    for (auto& v : b) v = static_cast<int>(rng.uniform_index(3));
    const eval::EditOps ops = eval::edit_ops(a, b);
    const std::int64_t want = exhaustive_distance(a, b);
    require(ops.total() == want,
            "distance mismatch on trial " + std::to_string(trial) + ": dp " +
                std::to_string(ops.total()) + " vs exhaustive " +
                std::to_string(want));
  }
  const double secs = seconds_since(t0);
  require(secs < 10.0,
          "oracle comparison took " + std::to_string(secs) + " s (budget 10)");
}

// ---------------------------------------------------------------------------
// 2. Error-rate identities, hand examples and report precision.

void check_error_rate_identities() {
  Rng rng(22);
  const std::u32string alphabet =
      U"абвгдеёжзиклмнопрстуӄӈӆьъыэюя ABCxyz ‐.,";
  const std::size_t letters = 29;  // leading run of the alphabet
  for (int trial = 0; trial < 100; ++trial) {
    std::u32string s;
    // First character is a letter so the string always holds a word.
    s.push_back(alphabet[rng.uniform_index(letters)]);
    const std::size_t len = rng.uniform_index(40);
    for (std::size_t i = 0; i < len; ++i) {
      s.push_back(alphabet[rng.uniform_index(alphabet.size())]);
    }
    const std::string x = encode_utf8(s);
    require(eval::wer(x, x) == 0.0, "wer(x,x) != 0");
    require(eval::cer(x, x) == 0.0, "cer(x,x) != 0");
  }

  // One dropped word out of three.
  const eval::EditOps del =
      eval::word_edit_ops("ынкъам гивик ымы", "ынкъам гивик");
  require(del.deletions == 1 && del.insertions == 0 && del.substitutions == 0,
          "expected exactly one deletion");
  require(eval::wer("ынкъам гивик ымы", "ынкъам гивик") == 1.0 / 3.0,
          "single-deletion rate is not 1/3");

  // The checked-in transcript pair and its frozen scores.
  const std::string original =
      "ӈутингивик ымыӆьычукоткак ӈыраӄ аӄатвагыргын гатваленат яама "
      "нымытваӆьа милгэрти ыннэнчьэн о'равэтӆьан егтэлытваркын ӄутти "
      "ӈыроӄ гэвъилинэт";
  const std::string recognised =
      "ӈутингивик м чукуткак ӈыаӄалтвагыргыт гатваленат яма нымытваӆьа "
      "милгэри ынэчьэнноравэтлан егтэлвркын отиӈыргэвилиэт";
  const eval::EditOps w = eval::word_edit_ops(original, recognised);
  const eval::EditOps c = eval::char_edit_ops(original, recognised);
  require(w.total() == 11 && w.reference_length == 14,
          "word ops drifted from the frozen 11/14");
  require(c.total() == 31 && c.reference_length == 139,
          "char ops drifted from the frozen 31/139");
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", w.rate());
  require(std::string(buf) == "0.785714", "frozen word rate changed");
  std::snprintf(buf, sizeof(buf), "%.6f", c.rate());
  require(std::string(buf) == "0.223022", "frozen char rate changed");

  // Six-decimal report lines.
  const auto report = eval::evaluate_corpus({{"а б в г", "а б в д"}});
  const std::string text = eval::format_report(report);
  require(text.find("WER\t0.250000") != std::string::npos,
          "report lacks the 6-decimal WER line");
  const std::size_t cer_at = text.find("CER\t");
  require(cer_at != std::string::npos, "report lacks a CER line");
  const std::string cer_val = text.substr(cer_at + 4, 8);
  require(cer_val.size() == 8 && cer_val[1] == '.' &&
              std::count_if(cer_val.begin(), cer_val.end(),
                            [](char ch) { return ch >= '0' && ch <= '9'; }) == 7,
          "CER is not printed to six decimals");
}

// ---------------------------------------------------------------------------
// 3. Every analytic gradient matches central differences.

vq::VqVaeConfig probe_config() {
  vq::VqVaeConfig cfg;
  cfg.input_dim = 4;
  cfg.hid_dim = 8;
  cfg.enc_dim = 3;
  cfg.codebook_size = 5;
  cfg.beta = 0.25;
  cfg.seed = 20260819;
  return cfg;
}

void check_gradients() {
  const auto t0 = std::chrono::steady_clock::now();
  const vq::VqVaeConfig cfg = probe_config();
  vq::VqVaeModel model = vq::VqVaeModel::init(cfg);
  Rng rng(33);
  std::vector<MatXd> feats;
  for (Index len : {5, 3, 4}) {
    MatXd f(len, 4);
    for (Index r = 0; r < len; ++r) {
      for (Index col = 0; col < 4; ++col) f(r, col) = 0.8 * rng.normal();
    }
    feats.push_back(std::move(f));
  }
  const vq::PaddedBatch batch = vq::pad_batch(feats);
  const vq::ForwardResult fwd = vq::forward(model, batch);
  const VecXd analytic = vq::backward(model, batch, fwd,
                                      vq::QuantizerGradientMode::LocalValue);

  const double h = 1e-5;
  double worst = 0.0;
  for (Index i = 0; i < model.param_count(); ++i) {
    const auto at = [&](double delta) {
      vq::VqVaeModel m(cfg);
      m.params() = model.params();
      m.params()(i) += delta;
      return vq::loss(batch, vq::forward(m, batch), cfg.beta).total;
    };
    const double fd = (at(h) - at(-h)) / (2.0 * h);
    const double gap = std::abs(analytic(i) - fd) /
                       std::max({std::abs(analytic(i)), std::abs(fd), 1e-3});
    worst = std::max(worst, gap);
  }
  require(worst < 1e-4,
          "worst relative gradient gap " + std::to_string(worst));
  const double secs = seconds_since(t0);
  require(secs < 5.0,
          "gradient probe took " + std::to_string(secs) + " s (budget 5)");
}

// ---------------------------------------------------------------------------
// 4. The autoencoder learns synthetic clustered frames.

void check_training_benchmark() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(44);
  const int dim = 39;
  MatXd centers(8, dim);
  for (Index c = 0; c < 8; ++c) {
    for (Index d = 0; d < dim; ++d) centers(c, d) = 0.8 + 0.5 * rng.normal();
  }
  // 100 utterances x 50 frames = 5,000 frames.
  std::vector<MatXd> all;
  for (int u = 0; u < 100; ++u) {
    MatXd f(50, dim);
    const Index c = u % 8;
    for (Index r = 0; r < 50; ++r) {
      for (Index d = 0; d < dim; ++d) {
        f(r, d) = centers(c, d) + 0.1 * rng.normal();
      }
    }
    all.push_back(std::move(f));
  }
  const std::vector<MatXd> train_set(all.begin(), all.begin() + 90);
  const std::vector<MatXd> val_set(all.begin() + 90, all.end());

  vq::VqVaeConfig cfg;
  cfg.input_dim = dim;
  cfg.hid_dim = 64;
  cfg.enc_dim = 16;
  cfg.codebook_size = 32;
  cfg.beta = 0.25;
  cfg.epochs = 200;
  cfg.lr = 2e-4;
  cfg.batch_train = 1;
  cfg.batch_val = 10;
  cfg.seed = 55;

  const vq::TrainResult result = vq::train(cfg, train_set, val_set);
  require(!result.report.diverged, "training diverged");
  require(result.report.val_loss.size() == 200, "missing epochs");
  const double first = result.report.val_loss.front();
  const double last = result.report.val_loss.back();
  require(last <= 0.7 * first,
          "validation loss fell only " +
              std::to_string(100.0 * (1.0 - last / first)) +
              "% (need >= 30%): " + std::to_string(first) + " -> " +
              std::to_string(last));
  require(result.report.perplexity.back() > 2.0,
          "codebook perplexity " +
              std::to_string(result.report.perplexity.back()) +
              " (need > 2)");
  const double secs = seconds_since(t0);
  require(secs < 120.0,
          "benchmark took " + std::to_string(secs) + " s (budget 120)");
}

// ---------------------------------------------------------------------------
// 5. Zero padding never moves a loss term.

void check_padding_invariance() {
  Rng rng(66);
  for (int trial = 0; trial < 10; ++trial) {
    vq::VqVaeConfig cfg = probe_config();
    cfg.seed = 100 + static_cast<std::uint64_t>(trial);
    const vq::VqVaeModel model = vq::VqVaeModel::init(cfg);
    std::vector<MatXd> feats;
    for (int u = 0; u < 3; ++u) {
      const Index len = 2 + static_cast<Index>(rng.uniform_index(5));
      MatXd f(len, 4);
      for (Index r = 0; r < len; ++r) {
        for (Index col = 0; col < 4; ++col) f(r, col) = rng.normal();
      }
      feats.push_back(std::move(f));
    }
    const vq::PaddedBatch batch = vq::pad_batch(feats);
    vq::PaddedBatch wide;
    wide.batch = batch.batch;
    wide.frames = batch.frames + 3;
    wide.dim = batch.dim;
    wide.values = MatXd::Zero(wide.batch * wide.frames, wide.dim);
    wide.mask = MatXb::Constant(wide.batch, wide.frames, false);
    for (Index u = 0; u < batch.batch; ++u) {
      wide.values.middleRows(u * wide.frames, batch.frames) =
          batch.values.middleRows(u * batch.frames, batch.frames);
      for (Index t = 0; t < batch.frames; ++t) wide.mask(u, t) = batch.mask(u, t);
    }
    const vq::LossTerms a = vq::loss(batch, vq::forward(model, batch), cfg.beta);
    const vq::LossTerms b = vq::loss(wide, vq::forward(model, wide), cfg.beta);
    require(std::abs(a.recon - b.recon) <= 1e-9 &&
                std::abs(a.codebook_term - b.codebook_term) <= 1e-9 &&
                std::abs(a.commit_term - b.commit_term) <= 1e-9 &&
                std::abs(a.total - b.total) <= 1e-9 &&
                std::abs(a.raw_sum - b.raw_sum) <= 1e-9,
            "padding moved a loss term on trial " + std::to_string(trial));
  }
}

// ---------------------------------------------------------------------------
// 6. Lowpass frequency response.

void check_lowpass_response() {
  const int sr = 16000;
  // DC gain.
  audio::AudioBuffer dc;
  dc.sample_rate_hz = sr;
  dc.samples = VecXd::Constant(sr, 1.0);
  const audio::AudioBuffer dc_out = audio::lowpass_single_pole(dc, 300.0);
  require(std::abs(dc_out.samples(dc_out.size() - 1) - 1.0) <= 1e-6,
          "DC gain is off by more than 1e-6");

  // Gain at the cutoff frequency.
  const audio::AudioBuffer sine = tone(300.0, 1.0, 0.5, sr);
  const audio::AudioBuffer out = audio::lowpass_single_pole(sine, 300.0);
  const Index half = sine.size() / 2;
  const double in_rms =
      std::sqrt(sine.samples.tail(half).squaredNorm() / static_cast<double>(half));
  const double out_rms =
      std::sqrt(out.samples.tail(half).squaredNorm() / static_cast<double>(half));
  const double gain_db = 20.0 * std::log10(out_rms / in_rms);
  require(gain_db > -4.0 && gain_db < -2.0,
          "cutoff gain " + std::to_string(gain_db) + " dB not within -3 +/- 1");
}

// ---------------------------------------------------------------------------
// 7. Speed effect ratios and manifest doubling.

void check_speed_and_augmentation() {
  const int sr = 16000;
  const audio::AudioBuffer in = tone(440.0, 2.0, 0.5, sr);
  const audio::AudioBuffer out = audio::change_speed(in, 0.8);

  const double duration_ratio = out.duration_s() / in.duration_s();
  require(std::abs(duration_ratio - 1.25) <= 0.0125,
          "duration ratio " + std::to_string(duration_ratio));

  const Index nfft = 16384;
  const VecXd mags = fft_magnitude(out.samples.head(nfft), nfft);
  Index peak = 1;
  for (Index k = 1; k <= nfft / 2; ++k) {
    if (mags(k) > mags(peak)) peak = k;
  }
  const double f_out = static_cast<double>(peak) * sr / static_cast<double>(nfft);
  const double pitch_ratio = 440.0 / f_out;
  require(std::abs(pitch_ratio - 1.25) <= 0.0125,
          "pitch ratio " + std::to_string(pitch_ratio) + " (peak " +
              std::to_string(f_out) + " Hz)");

  // Ten entries and one effect give twenty.
  const fs::path base = fs::temp_directory_path() /
                        ("tundra-accept-aug-" + std::to_string(::getpid()));
  fs::create_directories(base / "in");
  corpus::Manifest manifest;
  for (int i = 0; i < 10; ++i) {
    char id[16];
    std::snprintf(id, sizeof(id), "u%03d", i);
    const std::string wav = (base / "in" / (std::string(id) + ".wav")).string();
    audio::write_wav(wav, tone(200.0 + 40.0 * i, 0.125, 0.4, 8000));
    manifest.entries.push_back({id, wav, "", "synthetic"});
  }
  const std::vector<audio::EffectSpec> effects = {
      audio::EffectSpec::parse("speed:0.8")};
  const corpus::Manifest augmented =
      audio::augment_dataset(manifest, effects, (base / "out").string(), 7);
  require(augmented.entries.size() == 20,
          "augmented manifest has " + std::to_string(augmented.entries.size()) +
              " entries, want 20");
  for (const auto& e : augmented.entries) {
    require(fs::exists(e.audio_path), "missing " + e.audio_path);
  }
  fs::remove_all(base);
}

// ---------------------------------------------------------------------------
// 8. Segmentation boundaries, caps and exact fixed splitting.

void check_segmentation() {
  const int sr = 16000;
  audio::AudioBuffer fixture;
  fixture.sample_rate_hz = sr;
  {
    const audio::AudioBuffer a = tone(440.0, 1.0, 0.3, sr);
    const audio::AudioBuffer b = tone(440.0, 1.0, 0.3, sr);
    VecXd gap = VecXd::Zero(static_cast<Index>(0.8 * sr));
    fixture.samples.resize(a.size() + gap.size() + b.size());
    fixture.samples << a.samples, gap, b.samples;
  }
  const audio::SegmentationConfig cfg;
  const auto segs = audio::split_on_silence(fixture, cfg);
  require(segs.size() == 2,
          "fixture split into " + std::to_string(segs.size()) + " segments");
  const Index pause_mid = sr + static_cast<Index>(0.8 * sr) / 2;
  const Index hop = static_cast<Index>(cfg.hop_ms / 1000.0 * sr);
  require(segs[0].offset == 0, "first segment does not start at 0");
  require(std::abs(segs[1].offset - pause_mid) <= hop,
          "cut " + std::to_string(segs[1].offset) + " more than one hop from " +
              std::to_string(pause_mid));
  require(segs[0].offset + segs[0].audio.size() == segs[1].offset &&
              segs[1].offset + segs[1].audio.size() == fixture.size(),
          "segments do not tile the fixture");

  // A long steady tone still never yields a segment over the cap.
  const audio::AudioBuffer long_tone = tone(330.0, 30.0, 0.3, sr);
  const auto capped = audio::split_on_silence(long_tone, cfg);
  require(!capped.empty(), "long tone produced no segments");
  Index covered = 0;
  for (const auto& s : capped) {
    require(s.audio.size() <= static_cast<Index>(cfg.max_segment_s * sr),
            "segment exceeds the length cap");
    covered += s.audio.size();
  }
  require(covered == long_tone.size(), "length cap split lost samples");

  // Fixed-length splitting concatenates back bit-exactly.
  Rng rng(88);
  audio::AudioBuffer noise;
  noise.sample_rate_hz = sr;
  noise.samples.resize(70000);
  for (Index i = 0; i < noise.size(); ++i) {
    noise.samples(i) = rng.uniform(-0.8, 0.8);
  }
  const auto chunks = audio::split_fixed(noise, 1.0);
  VecXd joined(noise.size());
  Index at = 0;
  for (const auto& ch : chunks) {
    require(ch.offset == at, "fixed chunks are not contiguous");
    joined.segment(at, ch.audio.size()) = ch.audio.samples;
    at += ch.audio.size();
  }
  require(at == noise.size() &&
              (joined.array() == noise.samples.array()).all(),
          "fixed-split concatenation is not bit-exact");
}

// ---------------------------------------------------------------------------
// 9. Normalization golden file and idempotence.

std::string random_noisy_text(Rng& rng) {
  static const std::u32string alphabet =
      U"абвгдеклмнопрстуӄӈӆАКНГ ʼ'’‘`“”abcxyz09.,!?@:/#\t\n";
  std::u32string s;
  const std::size_t len = rng.uniform_index(60);
  for (std::size_t i = 0; i < len; ++i) {
    s.push_back(alphabet[rng.uniform_index(alphabet.size())]);
  }
  std::string text = encode_utf8(s);
  if (rng.uniform_index(8) == 0) text += " www.example.org/path";
  if (rng.uniform_index(8) == 0) text += " http://q.r/s ";
  return text;
}

void check_normalization() {
  const std::string data_dir = TUNDRA_TEST_DATA_DIR;
  const std::string input = read_file(data_dir + "/normalize_golden_input.txt");
  const std::string expected =
      read_file(data_dir + "/normalize_golden_expected.txt");
  const std::string got = textnorm::normalize(input);
  require(got == expected, "golden corpus normalization drifted");

  // No convertible digraph survives anywhere in the output.
  const std::u32string u = decode_utf8(got);
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    const bool head = u[i] == U'к' || u[i] == U'К' || u[i] == U'н' ||
                      u[i] == U'Н';
    if (!head) continue;
    for (char32_t v : textnorm::NormalizationRules::kApostropheVariants) {
      require(u[i + 1] != v, "unconverted digraph remains in the golden output");
    }
  }

  Rng rng(99);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::string text = random_noisy_text(rng);
    const std::string once = textnorm::normalize(text);
    require(textnorm::normalize(once) == once,
            "normalize is not idempotent on: " + text);
  }
}

// ---------------------------------------------------------------------------
// 10. Language filters on synthetic sentences; kmeans monotonicity.

void check_language_filters() {
  const std::vector<std::string> chukchi = {
      "ынкъам", "гивик",  "ӄол",    "ӈыроӄ", "ытлён", "мургин", "гатвален",
      "ӄора",   "ӈинӄэй", "уттыут", "мэмыл", "пыӈыл", "тэкичгын"};
  const std::vector<std::string> russian = {
      "и",    "в",    "не",  "на",  "что", "быть", "он",
      "наш",  "этот", "год", "для", "они", "так"};
  langid::FrequencyLexicon lex;
  lex.chukchi_words.insert(chukchi.begin(), chukchi.end());
  lex.russian_words.insert(russian.begin(), russian.end());

  Rng rng(1010);
  std::vector<langid::Lang> gold;
  std::vector<langid::Lang> freq_pred;
  for (int i = 0; i < 200; ++i) {
    const bool is_chukchi = i % 2 == 0;
    const auto& words = is_chukchi ? chukchi : russian;
    std::string sentence;
    const std::size_t n = 3 + rng.uniform_index(5);
    for (std::size_t wi = 0; wi < n; ++wi) {
      if (wi > 0) sentence += " ";
      sentence += words[rng.uniform_index(words.size())];
    }
    gold.push_back(is_chukchi ? langid::Lang::Chukchi : langid::Lang::Russian);
    freq_pred.push_back(langid::classify_sentence(sentence, lex).label);
  }
  const double f1 = langid::f1_score(freq_pred, gold, langid::Lang::Chukchi);
  require(f1 == 1.0,
          "frequency classifier f1 " + std::to_string(f1) + " (want 1.0)");

  // Well-separated probability blobs: the k=2 filter must be exact.
  std::vector<std::string> texts;
  MatXd probs(200, 2);
  for (int i = 0; i < 200; ++i) {
    texts.push_back("s" + std::to_string(i));
    const bool is_chukchi = i % 2 == 0;
    const double jitter = 0.02 * rng.uniform();
    probs(i, 0) = is_chukchi ? 0.9 - jitter : 0.1 + jitter;
    probs(i, 1) = 1.0 - probs(i, 0);
  }
  const auto filtered = langid::cluster_filter(texts, probs, 2024);
  for (int i = 0; i < 200; ++i) {
    require(filtered[static_cast<std::size_t>(i)].label ==
                gold[static_cast<std::size_t>(i)],
            "cluster filter mislabeled blob point " + std::to_string(i));
  }

  // Lloyd iterations never increase inertia.
  for (int ds = 0; ds < 100; ++ds) {
    const Index n = 20 + static_cast<Index>(rng.uniform_index(40));
    const Index dim = 2 + static_cast<Index>(rng.uniform_index(3));
    const int k = 2 + static_cast<int>(rng.uniform_index(4));
    MatXd pts(n, dim);
    for (Index r = 0; r < n; ++r) {
      for (Index col = 0; col < dim; ++col) pts(r, col) = rng.uniform(-5.0, 5.0);
    }
    const auto res = langid::kmeans(pts, k, 3000 + static_cast<std::uint64_t>(ds));
    for (std::size_t i = 1; i < res.inertia_history.size(); ++i) {
      require(res.inertia_history[i] <= res.inertia_history[i - 1] + 1e-9,
              "inertia rose on dataset " + std::to_string(ds));
    }
  }
}

// ---------------------------------------------------------------------------
// 11. Full-pipeline determinism through the command-line binary.

struct PipelineInputs {
  void materialize(const fs::path& dir) const {
    write_file((dir / "raw.txt").string(),
               "К'эргынто  н'утку гатвален www.junk.example\n"
               "наш год был так хорош\n"
               "ытлён к`ора ынкъам н‘инӄэй\n");
    write_file((dir / "ckt.txt").string(),
               "ынкъам\nгивик\nӄол\nӈутку\nгатвален\nытлён\nӄора\nӈинӄэй\n");
    write_file((dir / "rus.txt").string(),
               "и\nв\nнаш\nгод\nбыл\nтак\nхорош\n");
    write_file((dir / "ref.txt").string(),
               "ынкъам гивик ымы\nӈыроӄ ӄликкин\n");
    write_file((dir / "hyp.txt").string(),
               "ынкъам гивик\nӈыроӄ ӄликкин\n");
    write_file((dir / "tagged.tsv").string(),
               "folklore\tdoc1\tынкъам гивик ӄол\n"
               "folklore\tdoc2\tӈыроӄ ӄликкин\n"
               "news\tdoc3\tмургин нутэнут гатвален ынкъам\n");

    const int sr = 16000;
    std::vector<audio::AudioBuffer> parts;
    parts.push_back(tone(330.0, 0.6, 0.4, sr));
    for (double freq : {440.0, 550.0, 660.0}) {
      audio::AudioBuffer gap;
      gap.sample_rate_hz = sr;
      gap.samples = VecXd::Zero(static_cast<Index>(0.5 * sr));
      parts.push_back(gap);
      parts.push_back(tone(freq, 0.6, 0.4, sr));
    }
    Index total = 0;
    for (const auto& p : parts) total += p.size();
    audio::AudioBuffer joined;
    joined.sample_rate_hz = sr;
    joined.samples.resize(total);
    Index at = 0;
    for (const auto& p : parts) {
      joined.samples.segment(at, p.size()) = p.samples;
      at += p.size();
    }
    audio::write_wav((dir / "input.wav").string(), joined);
  }
};

void run_stage(const std::string& cli, const fs::path& cwd,
               const std::string& args, const fs::path& console_log) {
  const std::string cmd = "cd '" + cwd.string() + "' && '" + cli + "' " + args +
                          " >> '" + console_log.string() + "' 2>&1";
  const int rc = std::system(cmd.c_str());
  require(rc != -1 && WIFEXITED(rc) && WEXITSTATUS(rc) == 0,
          "stage failed (" + args + "), see " + console_log.string());
}

void run_pipeline(const std::string& cli, const fs::path& dir,
                  const fs::path& console_log) {
  PipelineInputs{}.materialize(dir);
  const std::string seed = " --seed 777";
  run_stage(cli, dir, "normalize --in raw.txt --out clean.txt" + seed,
            console_log);
  run_stage(cli, dir,
            "langid --in clean.txt --out langid.tsv --chukchi-lexicon ckt.txt "
            "--russian-lexicon rus.txt --method both --combine union" +
                seed,
            console_log);
  run_stage(cli, dir, "segment --in input.wav --out seg" + seed, console_log);
  run_stage(cli, dir,
            "augment --manifest seg/manifest.tsv --out aug "
            "--effect speed:0.8 --effect reverb" +
                seed,
            console_log);
  run_stage(cli, dir, "features --manifest aug/manifest.tsv --out feats" + seed,
            console_log);
  run_stage(cli, dir,
            "train-vqvae --features feats --out model.ckpt --hid-dim 16 "
            "--enc-dim 4 --codebook-size 8 --epochs 5 --lr 1e-3 "
            "--batch-train 2 --batch-val 2 --batch-test 2" +
                seed,
            console_log);
  run_stage(cli, dir, "eval --ref ref.txt --hyp hyp.txt --out eval.tsv" + seed,
            console_log);
  run_stage(cli, dir, "stats --in tagged.tsv --out stats.txt" + seed,
            console_log);
}

// Text lines minus the wall-clock line, the one legitimately varying field.
std::vector<std::string> comparable_lines(const std::string& content) {
  std::vector<std::string> lines;
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("duration_s=", 0) == 0) continue;
    lines.push_back(line);
  }
  return lines;
}

void compare_trees(const fs::path& a, const fs::path& b) {
  std::size_t count_a = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    ++count_a;
    const fs::path rel = fs::relative(entry.path(), a);
    const fs::path twin = b / rel;
    require(fs::exists(twin), "second run lacks " + rel.string());
    const std::string name = rel.filename().string();
    const std::string bytes_a = read_file(entry.path().string());
    const std::string bytes_b = read_file(twin.string());
    if (name.size() > 4 && name.rfind(".run") == name.size() - 4) {
      require(comparable_lines(bytes_a) == comparable_lines(bytes_b),
              "run record differs: " + rel.string());
    } else if (name == "run.manifest") {
      require(comparable_lines(bytes_a) == comparable_lines(bytes_b),
              "run record differs: " + rel.string());
    } else if (name.size() > 5 && name.rfind(".feat") == name.size() - 5) {
      if (bytes_a != bytes_b) {
        const auto fa = feat::read_features(entry.path().string());
        const auto fb = feat::read_features(twin.string());
        require(fa.id == fb.id && fa.features.rows() == fb.features.rows() &&
                    fa.features.cols() == fb.features.cols() &&
                    (fa.features.cast<double>() - fb.features.cast<double>())
                            .cwiseAbs()
                            .maxCoeff() <= 1e-9,
                "features differ beyond 1e-9: " + rel.string());
      }
    } else if (name.size() > 5 && name.rfind(".ckpt") == name.size() - 5) {
      if (bytes_a != bytes_b) {
        const vq::VqVaeModel ma = vq::load_checkpoint(entry.path().string());
        const vq::VqVaeModel mb = vq::load_checkpoint(twin.string());
        require((ma.params() - mb.params()).cwiseAbs().maxCoeff() <= 1e-9,
                "checkpoints differ beyond 1e-9: " + rel.string());
      }
    } else {
      require(bytes_a == bytes_b, "artifact differs: " + rel.string());
    }
  }
  std::size_t count_b = 0;
  for (const auto& entry : fs::recursive_directory_iterator(b)) {
    if (entry.is_regular_file()) ++count_b;
  }
  require(count_a == count_b, "runs produced different file counts");
  require(count_a > 20, "pipeline produced suspiciously few artifacts");
}

void check_pipeline_determinism(const std::string& cli) {
  require(!cli.empty(), "no pipeline binary given on the command line");
  const fs::path base = fs::temp_directory_path() /
                        ("tundra-accept-pipe-" + std::to_string(::getpid()));
  fs::remove_all(base);
  fs::create_directories(base / "runA");
  fs::create_directories(base / "runB");
  run_pipeline(cli, base / "runA", base / "consoleA.txt");
  run_pipeline(cli, base / "runB", base / "consoleB.txt");
  compare_trees(base / "runA", base / "runB");
  fs::remove_all(base);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli =
      argc > 1 ? fs::absolute(argv[1]).string() : std::string();

  struct Criterion {
    const char* name;
    std::function<void()> fn;
  };
  const std::vector<Criterion> criteria = {
      {"edit distance equals exhaustive search on 1000 random pairs",
       check_edit_distance_oracle},
      {"error-rate identities, frozen examples and 6-decimal report",
       check_error_rate_identities},
      {"analytic gradients match central differences on every parameter",
       check_gradients},
      {"autoencoder cuts validation loss >= 30% on clustered frames",
       check_training_benchmark},
      {"zero padding leaves every loss term unchanged", check_padding_invariance},
      {"lowpass: -3 dB at the cutoff, unity DC gain", check_lowpass_response},
      {"speed 0.8 scales duration and pitch by 1.25; one effect doubles "
       "a manifest",
       check_speed_and_augmentation},
      {"pause segmentation, length caps and bit-exact fixed splitting",
       check_segmentation},
      {"orthography normalization: golden corpus and idempotence",
       check_normalization},
      {"language filters are exact on synthetic data; kmeans inertia "
       "never rises",
       check_language_filters},
      {"same seed, same artifacts: full pipeline determinism",
       [&cli] { check_pipeline_determinism(cli); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    try {
      c.fn();
      std::printf("PASS  %s\n", c.name);
    } catch (const std::exception& e) {
      ++failures;
      std::printf("FAIL  %s: %s\n", c.name, e.what());
    }
    std::fflush(stdout);
  }
  if (failures > 0) {
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
