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

#include "tundra/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "tundra/error.hpp"
#include "tundra/evalmetrics.hpp"
#include "tundra/rng.hpp"

namespace tundra::corpus {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

std::string chomp(std::string line) {
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) {
    line.pop_back();
  }
  return line;
}

}  // namespace

Manifest load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open manifest: " + path);

  Manifest manifest;
  std::unordered_map<std::string, int> first_line_of_id;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = chomp(raw);
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 4) {
      throw DataError("manifest " + path + " line " + std::to_string(line_no) +
                      ": expected 4 tab-separated fields (id, audio, "
                      "transcript, subcorpus), got " +
                      std::to_string(fields.size()));
    }
    if (fields[0].empty() || fields[1].empty()) {
      throw DataError("manifest " + path + " line " + std::to_string(line_no) +
                      ": id and audio path are mandatory");
    }
    const auto [it, inserted] = first_line_of_id.emplace(fields[0], line_no);
    if (!inserted) {
      throw DataError("manifest " + path + ": duplicate id '" + fields[0] +
                      "' on lines " + std::to_string(it->second) + " and " +
                      std::to_string(line_no));
    }
    manifest.entries.push_back(
        ManifestEntry{fields[0], fields[1], fields[2], fields[3]});
  }
  return manifest;
}

void save_manifest(const Manifest& manifest, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write manifest: " + path);
  for (const auto& e : manifest.entries) {
    out << e.id << '\t' << e.audio_path << '\t' << e.transcript_path << '\t'
        << e.subcorpus << '\n';
  }
  if (!out) throw DataError("write failed: " + path);
}

std::vector<std::string> missing_files(const Manifest& manifest) {
  std::vector<std::string> missing;
  for (const auto& e : manifest.entries) {
    if (!std::filesystem::exists(e.audio_path)) {
      missing.push_back(e.id + ": " + e.audio_path);
    }
    if (!e.transcript_path.empty() &&
        !std::filesystem::exists(e.transcript_path)) {
      missing.push_back(e.id + ": " + e.transcript_path);
    }
  }
  return missing;
}

std::array<Manifest, 3> split_dataset(const Manifest& manifest,
                                      const std::array<double, 3>& ratios,
                                      std::uint64_t seed) {
  for (double r : ratios) {
    if (!(r > 0.0)) throw DataError("split ratios must be positive");
  }
  const double sum = ratios[0] + ratios[1] + ratios[2];
  if (std::abs(sum - 1.0) > 1e-9) {
    throw DataError("split ratios must sum to 1, got " + std::to_string(sum));
  }
  const std::size_t n = manifest.size();
  if (n < 3) {
    throw DataError("manifest has " + std::to_string(n) +
                    " entries; need at least 3 to split");
  }

  Rng rng(derive_seed(seed, "split"));
  const std::vector<std::size_t> perm = rng.permutation(n);

  const std::size_t n_train = static_cast<std::size_t>(
      std::floor(ratios[0] * static_cast<double>(n)));
  const std::size_t n_val = static_cast<std::size_t>(
      std::floor(ratios[1] * static_cast<double>(n)));

  std::vector<int> part(n, 2);
  for (std::size_t i = 0; i < n_train; ++i) part[perm[i]] = 0;
  for (std::size_t i = n_train; i < n_train + n_val; ++i) part[perm[i]] = 1;

  std::array<Manifest, 3> out;
  for (std::size_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(part[i])].entries.push_back(
        manifest.entries[i]);
  }
  return out;
}

std::vector<TaggedSentence> load_tagged_sentences(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open sentence file: " + path);
  std::vector<TaggedSentence> out;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = chomp(raw);
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 3) {
      throw DataError("sentence file " + path + " line " +
                      std::to_string(line_no) +
                      ": expected 3 tab-separated fields (subcorpus, doc id, "
                      "sentence)");
    }
    if (fields[0].empty()) {
      throw DataError("sentence file " + path + " line " +
                      std::to_string(line_no) + ": missing subcorpus tag");
    }
    out.push_back(TaggedSentence{fields[0], fields[1], fields[2]});
  }
  return out;
}

CorpusStats compute_stats(const std::vector<TaggedSentence>& sentences) {
  struct Acc {
    std::set<std::string> docs;
    std::int64_t sentence_count = 0;
    std::int64_t word_count = 0;
  };
  std::map<std::string, Acc> by_subcorpus;
  for (const auto& s : sentences) {
    Acc& acc = by_subcorpus[s.subcorpus];
    acc.docs.insert(s.doc_id);
    acc.sentence_count += 1;
    acc.word_count +=
        static_cast<std::int64_t>(eval::tokenize_words(s.text).size());
  }

  CorpusStats stats;
  stats.totals.subcorpus = "all";
  for (const auto& [name, acc] : by_subcorpus) {
    SubcorpusRow row;
    row.subcorpus = name;
    row.text_count = static_cast<std::int64_t>(acc.docs.size());
    row.sentence_count = acc.sentence_count;
    row.word_count = acc.word_count;
    stats.rows.push_back(row);
    stats.totals.text_count += row.text_count;
    stats.totals.sentence_count += row.sentence_count;
    stats.totals.word_count += row.word_count;
  }
  if (stats.totals.word_count > 0) {
    for (auto& row : stats.rows) {
      row.percent_of_words = 100.0 * static_cast<double>(row.word_count) /
                             static_cast<double>(stats.totals.word_count);
      stats.totals.percent_of_words += row.percent_of_words;
    }
  }
  return stats;
}

std::string format_stats_table(const CorpusStats& stats) {
  std::size_t name_width = std::string("subcorpus").size();
  for (const auto& row : stats.rows) {
    name_width = std::max(name_width, row.subcorpus.size());
  }
  name_width = std::max(name_width, stats.totals.subcorpus.size());

  std::ostringstream os;
  char buf[160];
  auto emit = [&](const SubcorpusRow& row) {
    std::snprintf(buf, sizeof(buf), "%-*s %10lld %12lld %12lld %10.2f%%\n",
                  static_cast<int>(name_width), row.subcorpus.c_str(),
                  static_cast<long long>(row.text_count),
                  static_cast<long long>(row.sentence_count),
                  static_cast<long long>(row.word_count),
                  row.percent_of_words);
    os << buf;
  };
  std::snprintf(buf, sizeof(buf), "%-*s %10s %12s %12s %11s\n",
                static_cast<int>(name_width), "subcorpus", "texts",
                "sentences", "words", "% words");
  os << buf;
  for (const auto& row : stats.rows) emit(row);
  emit(stats.totals);
  return os.str();
}

std::string format_stats_kv(const CorpusStats& stats) {
  std::ostringstream os;
  char buf[64];
  auto emit = [&](const SubcorpusRow& row) {
    std::snprintf(buf, sizeof(buf), "%.2f", row.percent_of_words);
    os << row.subcorpus << "\ttexts=" << row.text_count
       << "\tsentences=" << row.sentence_count << "\twords=" << row.word_count
       << "\tpercent_words=" << buf << '\n';
  };
  for (const auto& row : stats.rows) emit(row);
  emit(stats.totals);
  return os.str();
}

}  // namespace tundra::corpus
