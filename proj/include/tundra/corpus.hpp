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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tundra/types.hpp"

namespace tundra::corpus {

/// One audio segment with optional reference transcript.
struct Utterance {
  std::string id;
  VecXd samples;  // mono PCM in [-1, 1]
  int sample_rate_hz = 0;
  std::optional<std::string> transcript;
  std::string subcorpus;
};

/// One manifest row. Paths are kept verbatim; an empty transcript path means
/// the utterance is unannotated.
struct ManifestEntry {
  std::string id;
  std::string audio_path;
  std::string transcript_path;
  std::string subcorpus;
};

/// Ordered utterance inventory. TSV on disk: id, audio path, transcript path
/// (may be empty), subcorpus; one row per line, UTF-8.
struct Manifest {
  std::vector<ManifestEntry> entries;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
};

Manifest load_manifest(const std::string& path);
void save_manifest(const Manifest& manifest, const std::string& path);

/// Paths referenced by the manifest that do not resolve to a readable file,
/// formatted "id: path".
std::vector<std::string> missing_files(const Manifest& manifest);

/// Seeded exact partition. Train and validation sizes round down; test takes
/// the remainder, so no entry is lost or duplicated. Entries keep their
/// original manifest order inside each part.
std::array<Manifest, 3> split_dataset(const Manifest& manifest,
                                      const std::array<double, 3>& ratios,
                                      std::uint64_t seed);

/// One sentence with its subcorpus and source-document tags, the unit the
/// stats reporter consumes. TSV on disk: subcorpus, doc id, sentence.
struct TaggedSentence {
  std::string subcorpus;
  std::string doc_id;
  std::string text;
};

std::vector<TaggedSentence> load_tagged_sentences(const std::string& path);

struct SubcorpusRow {
  std::string subcorpus;
  std::int64_t text_count = 0;      // distinct doc ids
  std::int64_t sentence_count = 0;  // records
  std::int64_t word_count = 0;      // whitespace tokens
  double percent_of_words = 0.0;
};

struct CorpusStats {
  std::vector<SubcorpusRow> rows;  // sorted by subcorpus name
  SubcorpusRow totals;
};

CorpusStats compute_stats(const std::vector<TaggedSentence>& sentences);

/// Aligned text table (subcorpus rows plus a totals row).
std::string format_stats_table(const CorpusStats& stats);

/// Machine-readable key/value lines, one metric per line.
std::string format_stats_kv(const CorpusStats& stats);

}  // namespace tundra::corpus
