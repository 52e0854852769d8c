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

#include "tundra/evalmetrics.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "tundra/error.hpp"
#include "tundra/unicode.hpp"

namespace tundra::eval {

template <class T>
EditOps edit_ops(const std::vector<T>& reference, const std::vector<T>& hypothesis) {
  if (reference.empty()) {
    throw DataError("edit_ops: empty reference");
  }
  const std::size_t n = reference.size();
  const std::size_t m = hypothesis.size();

  // d[i][j] = distance between reference[0,i) and hypothesis[0,j).
  std::vector<std::vector<std::int32_t>> d(n + 1,
                                           std::vector<std::int32_t>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = static_cast<std::int32_t>(i);
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = static_cast<std::int32_t>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::int32_t sub_cost =
          reference[i - 1] == hypothesis[j - 1] ? 0 : 1;
      d[i][j] = std::min({d[i - 1][j - 1] + sub_cost, d[i][j - 1] + 1,
                          d[i - 1][j] + 1});
    }
  }

  EditOps ops;
  ops.reference_length = static_cast<std::int64_t>(n);
  // Backtrace, resolving ties substitution > insertion > deletion.
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && reference[i - 1] == hypothesis[j - 1] &&
        d[i][j] == d[i - 1][j - 1]) {
      --i;
      --j;
    } else if (i > 0 && j > 0 && d[i][j] == d[i - 1][j - 1] + 1) {
      ++ops.substitutions;
      --i;
      --j;
    } else if (j > 0 && d[i][j] == d[i][j - 1] + 1) {
      ++ops.insertions;
      --j;
    } else {
      ++ops.deletions;
      --i;
    }
  }
  return ops;
}

template EditOps edit_ops(const std::vector<std::string>&,
                          const std::vector<std::string>&);
template EditOps edit_ops(const std::vector<char32_t>&,
                          const std::vector<char32_t>&);
template EditOps edit_ops(const std::vector<int>&, const std::vector<int>&);

std::vector<std::string> tokenize_words(std::string_view text) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
    std::size_t start = i;
    while (i < text.size() &&
           !std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
    if (i > start) words.emplace_back(text.substr(start, i - start));
  }
  return words;
}

namespace {

char32_t to_lower_cp(char32_t c) {
  if (c >= U'A' && c <= U'Z') return c + 0x20;
  if (c >= 0x0410 && c <= 0x042F) return c + 0x20;  // А..Я
  if (c >= 0x0400 && c <= 0x040F) return c + 0x50;  // Ѐ..Џ
  if (c == 0x04C0) return 0x04CF;                   // palochka
  if (c >= 0x04C1 && c <= 0x04CE) return (c % 2 == 1) ? c + 1 : c;  // Ӂӂ ӃӄӇӈ...
  if ((c >= 0x0460 && c <= 0x0481) || (c >= 0x048A && c <= 0x04BF) ||
      (c >= 0x04D0 && c <= 0x052F)) {
    return (c % 2 == 0) ? c + 1 : c;
  }
  return c;
}

bool is_punct_cp(char32_t c) {
  if (c < 0x80) {
    return std::ispunct(static_cast<int>(c)) != 0;
  }
  switch (c) {
    case 0x00AB: case 0x00BB: case 0x2018: case 0x2019: case 0x201C:
    case 0x201D: case 0x201E: case 0x2013: case 0x2014: case 0x2026:
      return true;
    default:
      return false;
  }
}

std::u32string preprocess(std::string_view text, const ScoreOptions& opts,
                          bool drop_spaces) {
  std::u32string cps = decode_utf8(text);
  std::u32string out;
  out.reserve(cps.size());
  for (char32_t c : cps) {
    if (opts.strip_punctuation && is_punct_cp(c)) continue;
    if (drop_spaces && is_space(c)) continue;
    out.push_back(opts.lowercase ? to_lower_cp(c) : c);
  }
  return out;
}

std::vector<std::string> preprocess_words(std::string_view text,
                                          const ScoreOptions& opts) {
  std::vector<std::string> words = tokenize_words(text);
  if (opts.lowercase || opts.strip_punctuation) {
    std::vector<std::string> cleaned;
    cleaned.reserve(words.size());
    for (const auto& w : words) {
      std::string p = encode_utf8(preprocess(w, opts, /*drop_spaces=*/false));
      if (!p.empty()) cleaned.push_back(std::move(p));
    }
    return cleaned;
  }
  return words;
}

std::vector<char32_t> scored_chars(std::string_view text,
                                   const ScoreOptions& opts) {
  // No silent normalization here: code points are scored as given, spaces
  // included unless cer_count_spaces is off.
  std::u32string kept =
      preprocess(text, opts, /*drop_spaces=*/!opts.cer_count_spaces);
  return {kept.begin(), kept.end()};
}

}  // namespace

EditOps word_edit_ops(std::string_view reference, std::string_view hypothesis,
                      const ScoreOptions& opts) {
  return edit_ops(preprocess_words(reference, opts),
                  preprocess_words(hypothesis, opts));
}

EditOps char_edit_ops(std::string_view reference, std::string_view hypothesis,
                      const ScoreOptions& opts) {
  return edit_ops(scored_chars(reference, opts), scored_chars(hypothesis, opts));
}

double wer(std::string_view reference, std::string_view hypothesis,
           const ScoreOptions& opts) {
  return word_edit_ops(reference, hypothesis, opts).rate();
}

double cer(std::string_view reference, std::string_view hypothesis,
           const ScoreOptions& opts) {
  return char_edit_ops(reference, hypothesis, opts).rate();
}

EvalReport evaluate_corpus(
    const std::vector<std::pair<std::string, std::string>>& pairs,
    const ScoreOptions& opts) {
  if (pairs.empty()) throw DataError("evaluate_corpus: no pairs");
  EvalReport report;
  report.pairs.reserve(pairs.size());
  std::int64_t word_ops = 0, word_len = 0, char_ops = 0, char_len = 0;
  double wer_sum = 0.0, cer_sum = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [ref, hyp] = pairs[i];
    if (preprocess_words(ref, opts).empty()) {
      throw DataError("evaluate_corpus: empty reference in pair " +
                      std::to_string(i + 1));
    }
    PairResult pr;
    pr.word = word_edit_ops(ref, hyp, opts);
    pr.character = char_edit_ops(ref, hyp, opts);
    word_ops += pr.word.total();
    word_len += pr.word.reference_length;
    char_ops += pr.character.total();
    char_len += pr.character.reference_length;
    wer_sum += pr.word.rate();
    cer_sum += pr.character.rate();
    report.pairs.push_back(pr);
  }
  const double n = static_cast<double>(pairs.size());
  report.corpus_wer = static_cast<double>(word_ops) / static_cast<double>(word_len);
  report.corpus_cer = static_cast<double>(char_ops) / static_cast<double>(char_len);
  report.mean_wer = wer_sum / n;
  report.mean_cer = cer_sum / n;
  return report;
}

std::string format_report(const EvalReport& report) {
  char buf[256];
  std::ostringstream os;
  std::int64_t del = 0, ins = 0, sub = 0;
  for (const auto& p : report.pairs) {
    del += p.word.deletions;
    ins += p.word.insertions;
    sub += p.word.substitutions;
  }
  os << "pairs\t" << report.pairs.size() << "\n";
  os << "word_deletions\t" << del << "\nword_insertions\t" << ins
     << "\nword_substitutions\t" << sub << "\n";
  std::snprintf(buf, sizeof(buf), "WER\t%.6f\nCER\t%.6f\n", report.corpus_wer,
                report.corpus_cer);
  os << buf;
  std::snprintf(buf, sizeof(buf), "mean_WER\t%.6f\nmean_CER\t%.6f\n",
                report.mean_wer, report.mean_cer);
  os << buf;
  return os.str();
}

}  // namespace tundra::eval
