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

#include "tundra/textnorm.hpp"

#include <algorithm>
#include <vector>

#include "tundra/unicode.hpp"

namespace tundra::textnorm {

namespace {

bool is_apostrophe_variant(char32_t c) {
  const auto& v = NormalizationRules::kApostropheVariants;
  return std::find(v.begin(), v.end(), c) != v.end();
}

bool is_control(char32_t c) {
  return (c < 0x20 && c != U'\n') || c == 0x7F || (c >= 0x80 && c <= 0x9F);
}

bool looks_like_url(std::u32string_view token) {
  if (token.size() >= 4) {
    char32_t w = token[0] | 0x20;
    char32_t w1 = token[1] | 0x20;
    char32_t w2 = token[2] | 0x20;
    if (w == U'w' && w1 == U'w' && w2 == U'w' && token[3] == U'.') return true;
  }
  // scheme "://" anywhere marks a hyperlink token
  for (std::size_t i = 0; i + 2 < token.size(); ++i) {
    if (token[i] == U':' && token[i + 1] == U'/' && token[i + 2] == U'/') {
      return i > 0;
    }
  }
  return false;
}

bool looks_like_email(std::u32string_view token) {
  const auto at = token.find(U'@');
  if (at == std::u32string_view::npos || at == 0) return false;
  if (token.find(U'@', at + 1) != std::u32string_view::npos) return false;
  const auto domain = token.substr(at + 1);
  if (domain.size() < 3) return false;
  const auto dot = domain.find(U'.');
  return dot != std::u32string_view::npos && dot != 0 &&
         dot != domain.size() - 1;
}

}  // namespace

std::string normalize_apostrophes(std::string_view text) {
  std::u32string cps = decode_utf8(text);
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (!is_apostrophe_variant(cps[i])) continue;
    const bool letter_before = i > 0 && is_letter(cps[i - 1]);
    const bool letter_after = i + 1 < cps.size() && is_letter(cps[i + 1]);
    if (letter_before || letter_after) {
      cps[i] = NormalizationRules::kCanonicalApostrophe;
    }
  }
  return encode_utf8(cps);
}

std::string substitute_digraphs(std::string_view text) {
  const std::u32string cps = decode_utf8(text);
  std::u32string out;
  out.reserve(cps.size());
  std::size_t i = 0;
  while (i < cps.size()) {
    if (i + 1 < cps.size() &&
        cps[i + 1] == NormalizationRules::kCanonicalApostrophe) {
      const auto& map = NormalizationRules::kDigraphs;
      const auto it = std::find_if(map.begin(), map.end(), [&](auto d) {
        return d.letter == cps[i];
      });
      if (it != map.end()) {
        out.push_back(it->replacement);
        i += 2;
        continue;
      }
    }
    out.push_back(cps[i]);
    ++i;
  }
  return encode_utf8(out);
}

std::string strip_web_artifacts(std::string_view text) {
  const std::u32string cps = decode_utf8(text);
  std::u32string out;
  out.reserve(cps.size());

  std::u32string token;
  std::u32string line;
  auto flush_token = [&] {
    if (token.empty()) return;
    if (!looks_like_url(token) && !looks_like_email(token)) {
      if (!line.empty()) line.push_back(U' ');
      line += token;
    }
    token.clear();
  };
  auto flush_line = [&] {
    flush_token();
    out += line;
    line.clear();
  };

  for (char32_t c : cps) {
    if (c == U'\n') {
      flush_line();
      out.push_back(U'\n');
    } else if (c == U' ' || is_control(c) || is_space(c)) {
      flush_token();
    } else {
      token.push_back(c);
    }
  }
  flush_line();
  return encode_utf8(out);
}

std::string normalize(std::string_view text) {
  // Digraph collapse can pull a previously isolated apostrophe variant next
  // to a letter ("к``" -> "ӄ`"), so the letter-sensitive stages repeat until
  // stable. Each round either shrinks the text or converts a variant, so the
  // loop terminates.
  std::string cur = strip_web_artifacts(text);
  for (;;) {
    std::string next = substitute_digraphs(normalize_apostrophes(cur));
    if (next == cur) return cur;
    cur = std::move(next);
  }
}

}  // namespace tundra::textnorm
