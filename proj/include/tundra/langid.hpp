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
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tundra/types.hpp"

namespace tundra::langid {

enum class Lang { Chukchi, Russian };

inline const char* to_string(Lang l) {
  return l == Lang::Chukchi ? "Chukchi" : "Russian";
}

/// Most-frequent-word lists for the two languages. Lookup happens on
/// normalizer(token); the default normalizer is the identity, and a stemming
/// table can be plugged in where a morphological analyzer would have been.
struct FrequencyLexicon {
  std::unordered_set<std::string> chukchi_words;
  std::unordered_set<std::string> russian_words;
  std::function<std::string(const std::string&)> normalizer;

  /// One token per line, UTF-8. Blank lines and lines starting with '#' are
  /// skipped.
  static FrequencyLexicon load(const std::string& chukchi_path,
                               const std::string& russian_path);
};

struct SentenceRecord {
  std::string text;
  int chukchi_hits = 0;
  int russian_hits = 0;
  Lang label = Lang::Chukchi;
};

/// Count lexicon hits per language; Russian wins only on a strict majority of
/// hits, ties go to Chukchi.
SentenceRecord classify_sentence(std::string_view text,
                                 const FrequencyLexicon& lexicon);

struct KmeansResult {
  VecXi assignments;                    // one cluster index per point
  MatXd centroids;                      // k x dim
  double inertia = 0.0;                 // sum of squared distances
  int iterations = 0;
  std::vector<double> inertia_history;  // one entry per assignment pass
};

/// Lloyd's algorithm on row-vector points. Deterministic for a fixed seed:
/// initial centroids are a seeded sample of the lexicographically sorted
/// distinct rows, so the result does not depend on input order. An empty
/// cluster is repaired by moving its centroid onto the point farthest from
/// its current centroid.
KmeansResult kmeans(const MatXd& points, int k, std::uint64_t seed,
                    int max_iter = 300, double tol = 1e-6);

/// Run k=2 over per-sentence language-probability vectors and label the
/// cluster whose centroid scores higher on the Chukchi component as Chukchi.
std::vector<SentenceRecord> cluster_filter(
    const std::vector<std::string>& texts, const MatXd& prob_vectors,
    std::uint64_t seed, Index chukchi_dim = 0);

double f1_score(const std::vector<Lang>& predicted,
                const std::vector<Lang>& gold, Lang positive);

/// Character-trigram fallback scorer. Stands in for an external language-ID
/// model: profiles are trained from sample text per language and a sentence
/// scores cosine similarity in [0,1] against each profile.
class TrigramScorer {
 public:
  static TrigramScorer train(const std::vector<std::string>& chukchi_texts,
                             const std::vector<std::string>& russian_texts);

  /// Returns [chukchi_score, russian_score].
  Eigen::Vector2d score(std::string_view text) const;

 private:
  using Profile = std::unordered_map<std::uint64_t, double>;
  static Profile profile_of(const std::vector<std::string>& texts);
  static Profile profile_of_one(std::string_view text);
  static double cosine(const Profile& a, const Profile& b);

  Profile chukchi_;
  Profile russian_;
};

}  // namespace tundra::langid
