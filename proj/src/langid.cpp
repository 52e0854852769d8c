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

#include "tundra/langid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "tundra/error.hpp"
#include "tundra/evalmetrics.hpp"
#include "tundra/rng.hpp"
#include "tundra/unicode.hpp"

namespace tundra::langid {

namespace {

std::unordered_set<std::string> load_wordlist(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open lexicon: " + path);
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) {
      line.pop_back();
    }
    if (line.empty() || line[0] == '#') continue;
    words.insert(line);
  }
  return words;
}

}  // namespace

FrequencyLexicon FrequencyLexicon::load(const std::string& chukchi_path,
                                        const std::string& russian_path) {
  FrequencyLexicon lex;
  lex.chukchi_words = load_wordlist(chukchi_path);
  lex.russian_words = load_wordlist(russian_path);
  if (lex.chukchi_words.empty() || lex.russian_words.empty()) {
    throw DataError("lexicon files must contain at least one word each");
  }
  return lex;
}

SentenceRecord classify_sentence(std::string_view text,
                                 const FrequencyLexicon& lexicon) {
  if (lexicon.chukchi_words.empty() || lexicon.russian_words.empty()) {
    throw DataError("classify_sentence: lexicon is empty");
  }
  SentenceRecord rec;
  rec.text = std::string(text);
  for (const auto& token : eval::tokenize_words(text)) {
    const std::string key = lexicon.normalizer ? lexicon.normalizer(token) : token;
    if (lexicon.chukchi_words.count(key)) ++rec.chukchi_hits;
    if (lexicon.russian_words.count(key)) ++rec.russian_hits;
  }
  rec.label =
      rec.russian_hits > rec.chukchi_hits ? Lang::Russian : Lang::Chukchi;
  return rec;
}

KmeansResult kmeans(const MatXd& points, int k, std::uint64_t seed,
                    int max_iter, double tol) {
  const Index n = points.rows();
  const Index dim = points.cols();
  if (n == 0) throw DataError("kmeans: no points");
  if (k < 1) throw DataError("kmeans: k must be >= 1");

  // Distinct rows, sorted lexicographically. Sorting makes initialization a
  // function of the point set rather than the input order.
  std::vector<Index> distinct;
  distinct.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) distinct.push_back(i);
  auto row_less = [&](Index a, Index b) {
    for (Index d = 0; d < dim; ++d) {
      if (points(a, d) != points(b, d)) return points(a, d) < points(b, d);
    }
    return false;
  };
  auto row_eq = [&](Index a, Index b) {
    for (Index d = 0; d < dim; ++d) {
      if (points(a, d) != points(b, d)) return false;
    }
    return true;
  };
  std::sort(distinct.begin(), distinct.end(), row_less);
  distinct.erase(std::unique(distinct.begin(), distinct.end(), row_eq),
                 distinct.end());
  if (static_cast<std::size_t>(k) > distinct.size()) {
    throw DataError("kmeans: k=" + std::to_string(k) + " exceeds " +
                    std::to_string(distinct.size()) + " distinct points");
  }

  Rng rng(derive_seed(seed, "kmeans"));
  rng.shuffle(distinct);
  MatXd centroids(k, dim);
  for (int c = 0; c < k; ++c) {
    centroids.row(c) = points.row(distinct[static_cast<std::size_t>(c)]);
  }

  KmeansResult result;
  result.assignments = VecXi::Zero(n);

  auto assign_pass = [&]() {
    double inertia = 0.0;
    for (Index i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      int best_c = 0;
      for (int c = 0; c < k; ++c) {
        const double d2 = (points.row(i) - centroids.row(c)).squaredNorm();
        if (d2 < best) {
          best = d2;
          best_c = c;
        }
      }
      result.assignments(i) = best_c;
      inertia += best;
    }
    return inertia;
  };

  result.inertia = assign_pass();
  result.inertia_history.push_back(result.inertia);

  for (int iter = 0; iter < max_iter; ++iter) {
    // Means of the current assignment.
    MatXd sums = MatXd::Zero(k, dim);
    VecXi counts = VecXi::Zero(k);
    for (Index i = 0; i < n; ++i) {
      sums.row(result.assignments(i)) += points.row(i);
      counts(result.assignments(i)) += 1;
    }
    MatXd next = centroids;
    for (int c = 0; c < k; ++c) {
      if (counts(c) > 0) {
        next.row(c) = sums.row(c) / static_cast<double>(counts(c));
      } else {
        // Empty cluster: grab the point farthest from its assigned centroid.
        double worst = -1.0;
        Index worst_i = 0;
        for (Index i = 0; i < n; ++i) {
          const double d2 =
              (points.row(i) - next.row(result.assignments(i))).squaredNorm();
          if (d2 > worst) {
            worst = d2;
            worst_i = i;
          }
        }
        next.row(c) = points.row(worst_i);
      }
    }

    const double shift = (next - centroids).rowwise().norm().maxCoeff();
    centroids = next;
    result.inertia = assign_pass();
    result.inertia_history.push_back(result.inertia);
    result.iterations = iter + 1;
    if (shift < tol) break;
  }

  result.centroids = std::move(centroids);
  return result;
}

std::vector<SentenceRecord> cluster_filter(
    const std::vector<std::string>& texts, const MatXd& prob_vectors,
    std::uint64_t seed, Index chukchi_dim) {
  if (static_cast<Index>(texts.size()) != prob_vectors.rows()) {
    throw DataError("cluster_filter: texts and vectors disagree in length");
  }
  if (chukchi_dim < 0 || chukchi_dim >= prob_vectors.cols()) {
    throw DataError("cluster_filter: chukchi_dim out of range");
  }

  const KmeansResult km = kmeans(prob_vectors, 2, seed);
  const Lang label_of[2] = {
      km.centroids(0, chukchi_dim) >= km.centroids(1, chukchi_dim)
          ? Lang::Chukchi
          : Lang::Russian,
      km.centroids(0, chukchi_dim) >= km.centroids(1, chukchi_dim)
          ? Lang::Russian
          : Lang::Chukchi};

  std::vector<SentenceRecord> out;
  out.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    SentenceRecord rec;
    rec.text = texts[i];
    rec.label = label_of[km.assignments(static_cast<Index>(i))];
    out.push_back(std::move(rec));
  }
  return out;
}

double f1_score(const std::vector<Lang>& predicted,
                const std::vector<Lang>& gold, Lang positive) {
  if (predicted.size() != gold.size()) {
    throw DataError("f1_score: length mismatch");
  }
  if (predicted.empty()) throw DataError("f1_score: empty input");
  std::int64_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool p = predicted[i] == positive;
    const bool g = gold[i] == positive;
    tp += p && g;
    fp += p && !g;
    fn += !p && g;
  }
  if (tp == 0) return 0.0;
  const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  const double recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  return 2.0 * precision * recall / (precision + recall);
}

TrigramScorer::Profile TrigramScorer::profile_of_one(std::string_view text) {
  Profile p;
  const std::u32string cps = decode_utf8(text);
  std::u32string run;
  run.reserve(cps.size());
  for (char32_t c : cps) run.push_back(is_space(c) ? U' ' : c);
  for (std::size_t i = 0; i + 2 < run.size(); ++i) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t k = 0; k < 3; ++k) {
      h ^= static_cast<std::uint64_t>(run[i + k]);
      h *= 0x100000001b3ULL;
    }
    p[h] += 1.0;
  }
  return p;
}

TrigramScorer::Profile TrigramScorer::profile_of(
    const std::vector<std::string>& texts) {
  Profile total;
  for (const auto& t : texts) {
    for (const auto& [key, count] : profile_of_one(t)) total[key] += count;
  }
  double norm = 0.0;
  for (const auto& [key, count] : total) norm += count * count;
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (auto& [key, count] : total) count /= norm;
  }
  return total;
}

double TrigramScorer::cosine(const Profile& a, const Profile& b) {
  const Profile& small = a.size() <= b.size() ? a : b;
  const Profile& large = a.size() <= b.size() ? b : a;
  double dot = 0.0;
  for (const auto& [key, count] : small) {
    const auto it = large.find(key);
    if (it != large.end()) dot += count * it->second;
  }
  return dot;
}

TrigramScorer TrigramScorer::train(const std::vector<std::string>& chukchi_texts,
                                   const std::vector<std::string>& russian_texts) {
  if (chukchi_texts.empty() || russian_texts.empty()) {
    throw DataError("TrigramScorer: need sample text for both languages");
  }
  TrigramScorer s;
  s.chukchi_ = profile_of(chukchi_texts);
  s.russian_ = profile_of(russian_texts);
  return s;
}

Eigen::Vector2d TrigramScorer::score(std::string_view text) const {
  Profile p = profile_of_one(text);
  double norm = 0.0;
  for (const auto& [key, count] : p) norm += count * count;
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (auto& [key, count] : p) count /= norm;
  }
  const double c = std::clamp(cosine(p, chukchi_), 0.0, 1.0);
  const double r = std::clamp(cosine(p, russian_), 0.0, 1.0);
  return {c, r};
}

}  // namespace tundra::langid
