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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tundra::eval {

/// Minimal edit-operation counts turning a hypothesis into a reference.
struct EditOps {
  std::int64_t deletions = 0;      // reference tokens missing from hypothesis
  std::int64_t insertions = 0;     // extra hypothesis tokens
  std::int64_t substitutions = 0;  // mismatched tokens
  std::int64_t reference_length = 0;

  std::int64_t total() const { return deletions + insertions + substitutions; }
  double rate() const {
    return reference_length == 0
               ? 0.0
               : static_cast<double>(total()) / static_cast<double>(reference_length);
  }
};

/// Levenshtein DP with unit costs. Ties between moves of equal cost resolve
/// substitution, then insertion, then deletion, so the op breakdown is
/// reproducible; the total is tie-invariant.
template <class T>
EditOps edit_ops(const std::vector<T>& reference, const std::vector<T>& hypothesis);

extern template EditOps edit_ops(const std::vector<std::string>&,
                                 const std::vector<std::string>&);
extern template EditOps edit_ops(const std::vector<char32_t>&,
                                 const std::vector<char32_t>&);
extern template EditOps edit_ops(const std::vector<int>&, const std::vector<int>&);

/// Whitespace tokenization (maximal non-whitespace runs).
std::vector<std::string> tokenize_words(std::string_view text);

struct ScoreOptions {
  bool cer_count_spaces = true;  // spaces are scored characters unless disabled
  bool lowercase = false;
  bool strip_punctuation = false;
};

EditOps word_edit_ops(std::string_view reference, std::string_view hypothesis,
                      const ScoreOptions& opts = {});
EditOps char_edit_ops(std::string_view reference, std::string_view hypothesis,
                      const ScoreOptions& opts = {});

/// (Deletions + Insertions + Substitutions) / N over whitespace words.
double wer(std::string_view reference, std::string_view hypothesis,
           const ScoreOptions& opts = {});

/// Same formula over Unicode scalar values.
double cer(std::string_view reference, std::string_view hypothesis,
           const ScoreOptions& opts = {});

struct PairResult {
  EditOps word;
  EditOps character;
};

struct EvalReport {
  std::vector<PairResult> pairs;
  // Corpus rates pool operation counts over pooled reference lengths, so long
  // utterances weigh proportionally.
  double corpus_wer = 0.0;
  double corpus_cer = 0.0;
  // Unweighted per-pair means, reported alongside.
  double mean_wer = 0.0;
  double mean_cer = 0.0;
};

EvalReport evaluate_corpus(
    const std::vector<std::pair<std::string, std::string>>& pairs,
    const ScoreOptions& opts = {});

/// Summary block with WER/CER printed to 6 decimals.
std::string format_report(const EvalReport& report);

}  // namespace tundra::eval
