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

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tundra/config.hpp"
#include "tundra/corpus.hpp"
#include "tundra/effects.hpp"
#include "tundra/error.hpp"
#include "tundra/evalmetrics.hpp"
#include "tundra/featfile.hpp"
#include "tundra/langid.hpp"
#include "tundra/mfcc.hpp"
#include "tundra/rng.hpp"
#include "tundra/segment.hpp"
#include "tundra/textnorm.hpp"
#include "tundra/vqvae_train.hpp"
#include "tundra/wav.hpp"

namespace fs = std::filesystem;
using namespace tundra;

namespace {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << content;
  if (!out) throw DataError("write failed for " + path);
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

// Files and directories created by the running stage; everything still
// registered when an error unwinds is deleted, so failed runs leave no
// partial outputs behind.
class OutputTracker {
 public:
  ~OutputTracker() {
    if (committed_) return;
    std::error_code ec;
    for (auto it = files_.rbegin(); it != files_.rend(); ++it) {
      fs::remove(*it, ec);
    }
    for (auto it = dirs_.rbegin(); it != dirs_.rend(); ++it) {
      fs::remove(*it, ec);  // only succeeds if now empty
    }
  }
  const std::string& file(const std::string& path) {
    files_.push_back(path);
    return path;
  }
  void dir(const std::string& path) {
    if (path.empty()) return;
    fs::path accum;
    for (const auto& part : fs::path(path)) {
      accum /= part;
      if (!fs::exists(accum)) {
        fs::create_directory(accum);
        dirs_.push_back(accum.string());
      }
    }
  }
  void parent_dirs_of(const std::string& file_path) {
    const fs::path parent = fs::path(file_path).parent_path();
    if (!parent.empty()) dir(parent.string());
  }
  void commit() { committed_ = true; }

 private:
  std::vector<std::string> files_;
  std::vector<std::string> dirs_;
  bool committed_ = false;
};

// Machine-readable record of one stage invocation, written next to the
// stage output.
class RunWriter {
 public:
  RunWriter(std::string command, const PipelineConfig& cfg)
      : command_(std::move(command)),
        hash_(config_hash(cfg)),
        seed_(cfg.seed),
        t0_(std::chrono::steady_clock::now()) {}

  void input(const std::string& path) { inputs_.push_back(path); }
  void output(const std::string& path) { outputs_.push_back(path); }

  void write(const std::string& path) const {
    std::ostringstream out;
    out << "command=" << command_ << "\n";
    char h[16];
    std::snprintf(h, sizeof(h), "%08x", hash_);
    out << "config_hash=" << h << "\n";
    out << "seed=" << seed_ << "\n";
    for (const auto& p : inputs_) out << "input=" << p << "\n";
    for (const auto& p : outputs_) out << "output=" << p << "\n";
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_)
            .count();
    char d[32];
    std::snprintf(d, sizeof(d), "%.3f", secs);
    out << "duration_s=" << d << "\n";
    out << "status=ok\n";
    write_text_file(path, out.str());
  }

 private:
  std::string command_;
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
  std::uint32_t hash_;
  std::uint64_t seed_;
  std::chrono::steady_clock::time_point t0_;
};

// The config file must be loaded before CLI11 binds flag storage, so
// flag values land on top of file values. A simple prescan finds it.
PipelineConfig prescan_config(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return load_config(argv[i + 1]);
    if (arg.rfind("--config=", 0) == 0) return load_config(arg.substr(9));
  }
  return PipelineConfig{};
}

std::string sanitize_id(const std::string& raw) {
  std::string out = raw;
  for (char& c : out) {
    if (c == '\t' || c == '\n' || c == '\r' || c == '/') c = '_';
  }
  return out;
}

int run_normalize(const PipelineConfig& cfg, const std::string& in_path,
                  const std::string& out_path) {
  std::string text;
  if (in_path.empty()) {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    text = read_text_file(in_path);
  }
  const std::string result = textnorm::normalize(text);
  if (out_path.empty()) {
    std::cout << result;
    return 0;
  }
  OutputTracker tracker;
  RunWriter run("normalize", cfg);
  if (!in_path.empty()) run.input(in_path);
  tracker.parent_dirs_of(out_path);
  write_text_file(tracker.file(out_path), result);
  run.output(out_path);
  run.write(tracker.file(out_path + ".run"));
  tracker.commit();
  return 0;
}

int run_langid(const PipelineConfig& cfg, const std::string& in_path,
               const std::string& out_path, const std::string& method,
               const std::string& combine) {
  if (cfg.chukchi_lexicon.empty() || cfg.russian_lexicon.empty()) {
    throw UsageError(
        "langid needs both lexicons (--chukchi-lexicon and "
        "--russian-lexicon, or the [langid] config section)");
  }
  const auto lexicon =
      langid::FrequencyLexicon::load(cfg.chukchi_lexicon, cfg.russian_lexicon);
  const std::vector<std::string> sentences = read_lines(in_path);

  std::vector<langid::SentenceRecord> freq_records;
  freq_records.reserve(sentences.size());
  for (const auto& s : sentences) {
    freq_records.push_back(langid::classify_sentence(s, lexicon));
  }

  std::vector<langid::Lang> labels(sentences.size(), langid::Lang::Chukchi);
  if (method == "freq") {
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      labels[i] = freq_records[i].label;
    }
  } else {
    // Trigram profiles stand in for an external language-ID scorer.
    const auto scorer = langid::TrigramScorer::train(
        read_lines(cfg.chukchi_lexicon), read_lines(cfg.russian_lexicon));
    MatXd probs(static_cast<Index>(sentences.size()), 2);
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      probs.row(static_cast<Index>(i)) = scorer.score(sentences[i]).transpose();
    }
    const auto cluster_records = langid::cluster_filter(
        sentences, probs, derive_seed(cfg.seed, "langid"));
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      const langid::Lang c = cluster_records[i].label;
      if (method == "cluster") {
        labels[i] = c;
      } else {  // both: combine with the frequency labels
        const bool freq_chukchi = freq_records[i].label == langid::Lang::Chukchi;
        const bool clus_chukchi = c == langid::Lang::Chukchi;
        const bool keep = combine == "intersect" ? (freq_chukchi && clus_chukchi)
                                                 : (freq_chukchi || clus_chukchi);
        labels[i] = keep ? langid::Lang::Chukchi : langid::Lang::Russian;
      }
    }
  }

  std::ostringstream out;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    out << sentences[i] << "\t" << freq_records[i].chukchi_hits << "\t"
        << freq_records[i].russian_hits << "\t" << langid::to_string(labels[i])
        << "\n";
  }

  OutputTracker tracker;
  RunWriter run("langid", cfg);
  run.input(in_path);
  run.input(cfg.chukchi_lexicon);
  run.input(cfg.russian_lexicon);
  tracker.parent_dirs_of(out_path);
  write_text_file(tracker.file(out_path), out.str());
  run.output(out_path);
  run.write(tracker.file(out_path + ".run"));
  tracker.commit();
  return 0;
}

int run_segment(const PipelineConfig& cfg, const std::string& in_path,
                const std::string& out_dir, const std::string& mode) {
  const audio::AudioBuffer buffer = audio::read_wav(in_path);
  std::vector<audio::AudioSegment> segments;
  if (mode == "fixed") {
    segments = audio::split_fixed(buffer, cfg.segment.fallback_chunk_s);
  } else {
    segments = audio::split_on_silence(buffer, cfg.segment);
  }

  OutputTracker tracker;
  RunWriter run("segment", cfg);
  run.input(in_path);
  tracker.dir(out_dir);
  const std::string stem = sanitize_id(fs::path(in_path).stem().string());

  corpus::Manifest manifest;
  std::ostringstream offsets;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    char suffix[32];
    std::snprintf(suffix, sizeof(suffix), "_%04zu", i);
    const std::string id = stem + suffix;
    const std::string wav_path = (fs::path(out_dir) / (id + ".wav")).string();
    audio::write_wav(tracker.file(wav_path), segments[i].audio);
    manifest.entries.push_back({id, wav_path, "", stem});
    offsets << id << "\t" << segments[i].offset << "\t"
            << segments[i].audio.size() << "\n";
  }
  const std::string manifest_path =
      (fs::path(out_dir) / "manifest.tsv").string();
  corpus::save_manifest(manifest, tracker.file(manifest_path));
  const std::string offsets_path =
      (fs::path(out_dir) / "segments.tsv").string();
  write_text_file(tracker.file(offsets_path), offsets.str());
  run.output(manifest_path);
  run.output(offsets_path);
  run.write(tracker.file((fs::path(out_dir) / "run.manifest").string()));
  tracker.commit();
  std::cout << "segments=" << segments.size() << "\n";
  return 0;
}

int run_augment(const PipelineConfig& cfg, const std::string& manifest_path,
                const std::string& out_dir,
                const std::vector<std::string>& effect_args) {
  if (effect_args.empty()) {
    throw UsageError("augment needs at least one --effect");
  }
  std::vector<audio::EffectSpec> effects;
  effects.reserve(effect_args.size());
  for (const auto& a : effect_args) effects.push_back(audio::EffectSpec::parse(a));

  const corpus::Manifest manifest = corpus::load_manifest(manifest_path);

  OutputTracker tracker;
  RunWriter run("augment", cfg);
  run.input(manifest_path);
  tracker.dir(out_dir);
  for (const auto& entry : manifest.entries) {
    for (const auto& spec : effects) {
      tracker.file(
          (fs::path(out_dir) / (entry.id + "_" + spec.name() + ".wav"))
              .string());
    }
  }
  const corpus::Manifest augmented =
      audio::augment_dataset(manifest, effects, out_dir, cfg.seed);
  const std::string out_manifest =
      (fs::path(out_dir) / "manifest.tsv").string();
  corpus::save_manifest(augmented, tracker.file(out_manifest));
  run.output(out_manifest);
  run.write(tracker.file((fs::path(out_dir) / "run.manifest").string()));
  tracker.commit();
  std::cout << "entries=" << augmented.entries.size() << "\n";
  return 0;
}

int run_features(const PipelineConfig& cfg, const std::string& manifest_path,
                 const std::string& out_dir, const std::string& dump_path) {
  if (!dump_path.empty()) {
    std::cout << feat::format_features_text(feat::read_features(dump_path));
    return 0;
  }
  if (manifest_path.empty() || out_dir.empty()) {
    throw UsageError("features needs --manifest and --out (or --dump FILE)");
  }
  const corpus::Manifest manifest = corpus::load_manifest(manifest_path);
  if (manifest.empty()) throw DataError("manifest has no entries");

  OutputTracker tracker;
  RunWriter run("features", cfg);
  run.input(manifest_path);
  tracker.dir(out_dir);
  for (const auto& entry : manifest.entries) {
    const audio::AudioBuffer buffer = audio::read_wav(entry.audio_path);
    const MatXd f = audio::mfcc(buffer, cfg.mfcc);
    const std::string path =
        (fs::path(out_dir) / (entry.id + ".feat")).string();
    feat::write_features(tracker.file(path), entry.id, f);
  }
  run.output(out_dir);
  run.write(tracker.file((fs::path(out_dir) / "run.manifest").string()));
  tracker.commit();
  std::cout << "features=" << manifest.entries.size() << "\n";
  return 0;
}

int run_train(PipelineConfig& cfg, const std::string& features_dir,
              const std::string& out_path) {
  std::vector<std::string> feat_paths;
  if (!fs::is_directory(features_dir)) {
    throw DataError(features_dir + " is not a directory");
  }
  for (const auto& e : fs::directory_iterator(features_dir)) {
    if (e.is_regular_file() && e.path().extension() == ".feat") {
      feat_paths.push_back(e.path().string());
    }
  }
  std::sort(feat_paths.begin(), feat_paths.end());
  if (feat_paths.empty()) {
    throw DataError("no .feat files in " + features_dir);
  }

  corpus::Manifest inventory;
  for (const auto& p : feat_paths) {
    inventory.entries.push_back({fs::path(p).stem().string(), p, "", "feat"});
  }
  const auto parts = corpus::split_dataset(inventory, cfg.split_ratios, cfg.seed);

  auto load_part = [](const corpus::Manifest& part) {
    std::vector<MatXd> out;
    out.reserve(part.entries.size());
    for (const auto& e : part.entries) {
      out.push_back(feat::read_features(e.audio_path).features.cast<double>());
    }
    return out;
  };
  const std::vector<MatXd> train_set = load_part(parts[0]);
  const std::vector<MatXd> val_set = load_part(parts[1]);
  const std::vector<MatXd> test_set = load_part(parts[2]);
  if (train_set.empty()) throw DataError("train split is empty; adjust ratios");
  if (val_set.empty()) throw DataError("validation split is empty; adjust ratios");

  cfg.vqvae.seed = derive_seed(cfg.seed, "vqvae");
  std::ostringstream log;
  const vq::TrainResult result = vq::train(cfg.vqvae, train_set, val_set, &log);
  std::cout << log.str();

  if (result.report.diverged) {
    std::cout << vq::format_report_summary(result.report);
    throw NumericError("training diverged (non-finite loss); no checkpoint written");
  }

  OutputTracker tracker;
  RunWriter run("train-vqvae", cfg);
  run.input(features_dir);
  tracker.parent_dirs_of(out_path);
  vq::save_checkpoint(tracker.file(out_path), result.model);
  run.output(out_path);

  std::ostringstream extra;
  if (!test_set.empty()) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "test_loss=%.6f\n",
                  vq::evaluate(result.model, test_set, cfg.vqvae.batch_test));
    extra << buf;
  }
  char split_line[128];
  std::snprintf(split_line, sizeof(split_line),
                "split_sizes=%zu/%zu/%zu\n", train_set.size(), val_set.size(),
                test_set.size());
  extra << split_line;
  std::cout << extra.str();
  write_text_file(tracker.file(out_path + ".log"), log.str() + extra.str());
  std::cout << vq::format_report_summary(result.report);
  run.write(tracker.file(out_path + ".run"));
  tracker.commit();
  return 0;
}

int run_eval(const PipelineConfig& cfg, const std::string& ref_path,
             const std::string& hyp_path, const std::string& out_path) {
  const std::vector<std::string> refs = read_lines(ref_path);
  const std::vector<std::string> hyps = read_lines(hyp_path);
  if (refs.size() != hyps.size()) {
    throw DataError("line count mismatch: " + ref_path + " has " +
                    std::to_string(refs.size()) + " lines, " + hyp_path +
                    " has " + std::to_string(hyps.size()));
  }
  std::vector<std::pair<std::string, std::string>> pairs;
  pairs.reserve(refs.size());
  for (std::size_t i = 0; i < refs.size(); ++i) {
    pairs.emplace_back(refs[i], hyps[i]);
  }
  eval::ScoreOptions opts;
  opts.cer_count_spaces = cfg.cer_count_spaces;
  opts.lowercase = cfg.eval_lowercase;
  opts.strip_punctuation = cfg.eval_strip_punctuation;
  const eval::EvalReport report = eval::evaluate_corpus(pairs, opts);

  std::ostringstream body;
  body << "# pair\twer\tcer\tword_del\tword_ins\tword_sub\tref_words\t"
          "char_del\tchar_ins\tchar_sub\tref_chars\n";
  char line[256];
  for (std::size_t i = 0; i < report.pairs.size(); ++i) {
    const auto& p = report.pairs[i];
    std::snprintf(line, sizeof(line),
                  "%zu\t%.6f\t%.6f\t%lld\t%lld\t%lld\t%lld\t%lld\t%lld\t%lld\t%lld\n",
                  i + 1, p.word.rate(), p.character.rate(),
                  static_cast<long long>(p.word.deletions),
                  static_cast<long long>(p.word.insertions),
                  static_cast<long long>(p.word.substitutions),
                  static_cast<long long>(p.word.reference_length),
                  static_cast<long long>(p.character.deletions),
                  static_cast<long long>(p.character.insertions),
                  static_cast<long long>(p.character.substitutions),
                  static_cast<long long>(p.character.reference_length));
    body << line;
  }
  const std::string summary = eval::format_report(report);

  if (out_path.empty()) {
    std::cout << body.str() << summary;
    return 0;
  }
  OutputTracker tracker;
  RunWriter run("eval", cfg);
  run.input(ref_path);
  run.input(hyp_path);
  tracker.parent_dirs_of(out_path);
  write_text_file(tracker.file(out_path), body.str() + summary);
  run.output(out_path);
  run.write(tracker.file(out_path + ".run"));
  tracker.commit();
  std::cout << summary;
  return 0;
}

int run_stats(const PipelineConfig& cfg, const std::string& in_path,
              const std::string& out_path) {
  const auto sentences = corpus::load_tagged_sentences(in_path);
  const auto stats = corpus::compute_stats(sentences);
  const std::string text =
      corpus::format_stats_table(stats) + "\n" + corpus::format_stats_kv(stats);
  if (out_path.empty()) {
    std::cout << text;
    return 0;
  }
  OutputTracker tracker;
  RunWriter run("stats", cfg);
  run.input(in_path);
  tracker.parent_dirs_of(out_path);
  write_text_file(tracker.file(out_path), text);
  run.output(out_path);
  run.write(tracker.file(out_path + ".run"));
  tracker.commit();
  std::cout << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    PipelineConfig cfg = prescan_config(argc, argv);

    CLI::App app{
        "tundra: text cleanup, language filtering, audio segmentation and "
        "augmentation, cepstral features, a vector-quantized autoencoder, "
        "and transcript scoring"};
    app.require_subcommand(1);

    std::string config_path;
    int exit_code = 0;
    auto add_common = [&](CLI::App* sub) {
      sub->add_option("--config", config_path,
                      "INI config file; flags given here override its values")
          ->check(CLI::ExistingFile);
      sub->add_option("--seed", cfg.seed, "root seed for all stage randomness")
          ->capture_default_str();
    };

    // normalize
    auto* norm = app.add_subcommand(
        "normalize", "Clean text: web artifacts, apostrophes, digraphs");
    std::string norm_in, norm_out;
    norm->add_option("--in", norm_in, "input text file (default: stdin)")
        ->check(CLI::ExistingFile);
    norm->add_option("--out", norm_out, "output file (default: stdout)");
    add_common(norm);
    norm->callback([&] { exit_code = run_normalize(cfg, norm_in, norm_out); });

    // langid
    auto* lang = app.add_subcommand(
        "langid", "Label sentences Chukchi or Russian (one per line)");
    std::string lang_in, lang_out;
    std::string lang_method = "freq", lang_combine = "union";
    lang->add_option("--in", lang_in, "sentence file, one sentence per line")
        ->required()
        ->check(CLI::ExistingFile);
    lang->add_option("--out", lang_out,
                     "output TSV: sentence, chukchi_hits, russian_hits, label")
        ->required();
    lang->add_option("--chukchi-lexicon", cfg.chukchi_lexicon,
                     "frequent Chukchi words, one per line")
        ->capture_default_str();
    lang->add_option("--russian-lexicon", cfg.russian_lexicon,
                     "frequent Russian words, one per line")
        ->capture_default_str();
    lang->add_option("--method", lang_method,
                     "freq: lexicon hit counts; cluster: k-means over trigram "
                     "scores; both: combine")
        ->check(CLI::IsMember({"freq", "cluster", "both"}))
        ->capture_default_str();
    lang->add_option("--combine", lang_combine,
                     "how 'both' merges the Chukchi decisions")
        ->check(CLI::IsMember({"union", "intersect"}))
        ->capture_default_str();
    add_common(lang);
    lang->callback([&] {
      exit_code = run_langid(cfg, lang_in, lang_out, lang_method, lang_combine);
    });

    // segment
    auto* seg = app.add_subcommand(
        "segment", "Split a WAV by pauses or into fixed chunks");
    std::string seg_in, seg_out;
    std::string seg_mode = "pause";
    seg->add_option("--in", seg_in, "input WAV (PCM 16-bit)")
        ->required()
        ->check(CLI::ExistingFile);
    seg->add_option("--out", seg_out, "output directory")->required();
    seg->add_option("--mode", seg_mode, "pause or fixed")
        ->check(CLI::IsMember({"pause", "fixed"}))
        ->capture_default_str();
    seg->add_option("--frame-ms", cfg.segment.frame_ms, "energy frame length")
        ->capture_default_str();
    seg->add_option("--hop-ms", cfg.segment.hop_ms, "energy frame hop")
        ->capture_default_str();
    seg->add_option("--silence-threshold-db", cfg.segment.silence_threshold_db,
                    "silence level relative to the median frame energy")
        ->capture_default_str();
    seg->add_option("--absolute-floor-db", cfg.segment.absolute_floor_db,
                    "frames below this absolute level are always silent")
        ->capture_default_str();
    seg->add_option("--min-silence-ms", cfg.segment.min_silence_ms,
                    "minimum pause length that causes a cut")
        ->capture_default_str();
    seg->add_option("--max-segment-s", cfg.segment.max_segment_s,
                    "segments longer than this are re-split")
        ->capture_default_str();
    seg->add_option("--chunk-s", cfg.segment.fallback_chunk_s,
                    "chunk length for --mode fixed")
        ->capture_default_str();
    add_common(seg);
    seg->callback([&] { exit_code = run_segment(cfg, seg_in, seg_out, seg_mode); });

    // augment
    auto* aug = app.add_subcommand(
        "augment", "Write effect copies of every manifest entry");
    std::string aug_manifest, aug_out;
    std::vector<std::string> aug_effects;
    aug->add_option("--manifest", aug_manifest, "input manifest TSV")
        ->required()
        ->check(CLI::ExistingFile);
    aug->add_option("--out", aug_out, "output directory")->required();
    aug->add_option("--effect", aug_effects,
                    "effect spec, repeatable: lowpass:<hz>, speed:<factor>, "
                    "reverb");
    add_common(aug);
    aug->callback(
        [&] { exit_code = run_augment(cfg, aug_manifest, aug_out, aug_effects); });

    // features
    auto* fea = app.add_subcommand(
        "features", "Extract cepstral features for every manifest entry");
    std::string fea_manifest, fea_out, fea_dump;
    fea->add_option("--manifest", fea_manifest, "input manifest TSV")
        ->check(CLI::ExistingFile);
    fea->add_option("--out", fea_out, "output directory for .feat files");
    fea->add_option("--dump", fea_dump, "print one .feat file as text and exit")
        ->check(CLI::ExistingFile);
    fea->add_option("--frame-ms", cfg.mfcc.frame_ms, "analysis frame length")
        ->capture_default_str();
    fea->add_option("--hop-ms", cfg.mfcc.hop_ms, "analysis frame hop")
        ->capture_default_str();
    fea->add_option("--pre-emphasis", cfg.mfcc.pre_emphasis,
                    "pre-emphasis coefficient")
        ->capture_default_str();
    fea->add_option("--n-mels", cfg.mfcc.n_mels, "mel filter count")
        ->capture_default_str();
    fea->add_option("--n-ceps", cfg.mfcc.n_ceps, "cepstral coefficients kept")
        ->capture_default_str();
    fea->add_option("--fft-size", cfg.mfcc.fft_size,
                    "FFT size; 0 picks the next power of two")
        ->capture_default_str();
    fea->add_flag("--deltas,!--no-deltas", cfg.mfcc.deltas,
                  "append delta and delta-delta columns")
        ->capture_default_str();
    fea->add_option("--delta-window", cfg.mfcc.delta_window,
                    "regression window for deltas")
        ->capture_default_str();
    fea->add_flag("--mean-normalize,!--no-mean-normalize",
                  cfg.mfcc.mean_normalize,
                  "subtract the per-utterance mean of the static coefficients")
        ->capture_default_str();
    add_common(fea);
    fea->callback(
        [&] { exit_code = run_features(cfg, fea_manifest, fea_out, fea_dump); });

    // train-vqvae
    auto* trn = app.add_subcommand(
        "train-vqvae", "Train the quantized autoencoder on a feature directory");
    std::string trn_features, trn_out;
    trn->add_option("--features", trn_features, "directory of .feat files")
        ->required()
        ->check(CLI::ExistingDirectory);
    trn->add_option("--out", trn_out, "checkpoint output path")->required();
    trn->add_option("--input-dim", cfg.vqvae.input_dim, "feature dimension")
        ->capture_default_str();
    trn->add_option("--hid-dim", cfg.vqvae.hid_dim, "hidden layer width")
        ->capture_default_str();
    trn->add_option("--enc-dim", cfg.vqvae.enc_dim, "bottleneck dimension")
        ->capture_default_str();
    trn->add_option("--codebook-size", cfg.vqvae.codebook_size,
                    "number of codebook vectors")
        ->capture_default_str();
    trn->add_option("--beta", cfg.vqvae.beta, "commitment cost")
        ->capture_default_str();
    trn->add_option("--epochs", cfg.vqvae.epochs, "training epochs")
        ->capture_default_str();
    trn->add_option("--lr", cfg.vqvae.lr, "Adam learning rate")
        ->capture_default_str();
    trn->add_option("--batch-train", cfg.vqvae.batch_train,
                    "training batch size")
        ->capture_default_str();
    trn->add_option("--batch-val", cfg.vqvae.batch_val, "validation batch size")
        ->capture_default_str();
    trn->add_option("--batch-test", cfg.vqvae.batch_test, "test batch size")
        ->capture_default_str();
    trn->add_option("--train-ratio", cfg.split_ratios[0],
                    "fraction of utterances for training")
        ->capture_default_str();
    trn->add_option("--val-ratio", cfg.split_ratios[1],
                    "fraction for validation")
        ->capture_default_str();
    trn->add_option("--test-ratio", cfg.split_ratios[2], "fraction for test")
        ->capture_default_str();
    add_common(trn);
    trn->callback([&] { exit_code = run_train(cfg, trn_features, trn_out); });

    // eval
    auto* evl = app.add_subcommand(
        "eval", "Score line-aligned hypothesis against reference transcripts");
    std::string evl_ref, evl_hyp, evl_out;
    evl->add_option("--ref", evl_ref, "reference transcripts, one per line")
        ->required()
        ->check(CLI::ExistingFile);
    evl->add_option("--hyp", evl_hyp, "hypothesis transcripts, line-aligned")
        ->required()
        ->check(CLI::ExistingFile);
    evl->add_option("--out", evl_out, "write the per-pair TSV and summary here");
    evl->add_flag("--cer-count-spaces,!--no-cer-count-spaces",
                  cfg.cer_count_spaces,
                  "count spaces as characters in the character error rate")
        ->capture_default_str();
    evl->add_flag("--lowercase", cfg.eval_lowercase,
                  "lowercase both sides before scoring")
        ->capture_default_str();
    evl->add_flag("--strip-punctuation", cfg.eval_strip_punctuation,
                  "drop punctuation before scoring")
        ->capture_default_str();
    add_common(evl);
    evl->callback([&] { exit_code = run_eval(cfg, evl_ref, evl_hyp, evl_out); });

    // stats
    auto* sta = app.add_subcommand(
        "stats", "Subcorpus table from tagged sentences "
                 "(TSV: subcorpus, doc id, sentence)");
    std::string sta_in, sta_out;
    sta->add_option("--in", sta_in, "tagged sentence TSV")
        ->required()
        ->check(CLI::ExistingFile);
    sta->add_option("--out", sta_out, "also write the report to this file");
    add_common(sta);
    sta->callback([&] { exit_code = run_stats(cfg, sta_in, sta_out); });

    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
    return exit_code;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
