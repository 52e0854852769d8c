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
#include <string>
#include <string_view>

namespace tundra::textnorm {

// Chukchi orthography normalization. Web sources write the apostrophe-like
// modifier letter in half a dozen ways and keep pre-reform digraph spellings
// (к’ for ӄ etc.); everything funnels to one canonical form here.

struct NormalizationRules {
  static constexpr char32_t kCanonicalApostrophe = U'’';  // ’

  // ‘ ’ ` “ ” '
  static constexpr std::array<char32_t, 6> kApostropheVariants = {
      U'‘', U'’', U'`', U'“', U'”', U'\''};

  struct Digraph {
    char32_t letter;       // letter preceding the canonical apostrophe
    char32_t replacement;  // single-letter form
  };

  // к’→ӄ  К’→Ӄ  н’→ӈ  Н’→Ӈ
  static constexpr std::array<Digraph, 4> kDigraphs = {
      Digraph{U'к', U'ӄ'}, Digraph{U'К', U'Ӄ'},
      Digraph{U'н', U'ӈ'}, Digraph{U'Н', U'Ӈ'}};
};

/// Replace every apostrophe variant that touches a letter on either side with
/// U+2019. Variants in non-letter context (paired quotes around punctuation,
/// stray backticks) are left alone.
std::string normalize_apostrophes(std::string_view text);

/// Single left-to-right pass replacing letter+’ digraphs with the hooked
/// Cyrillic letters. Expects apostrophes already normalized.
std::string substitute_digraphs(std::string_view text);

/// Drop URL and email tokens, map control characters (except newline) to
/// spaces, collapse space runs and trim each line.
std::string strip_web_artifacts(std::string_view text);

/// strip_web_artifacts, then normalize_apostrophes + substitute_digraphs
/// repeated to a fixed point (substitution can expose a variant to a letter).
std::string normalize(std::string_view text);

}  // namespace tundra::textnorm
