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

#include <string>
#include <string_view>

namespace tundra {

/// Decode UTF-8 into code points. Invalid byte sequences decode to U+FFFD,
/// one replacement per offending byte.
std::u32string decode_utf8(std::string_view s);

std::string encode_utf8(std::u32string_view s);
std::string encode_utf8(char32_t c);

/// Letters of the alphabets this pipeline deals with: basic Latin plus the
/// Cyrillic and Cyrillic Supplement blocks (which cover the hooked Chukchi
/// letters).
inline bool is_letter(char32_t c) {
  if ((c >= U'A' && c <= U'Z') || (c >= U'a' && c <= U'z')) return true;
  return c >= 0x0400 && c <= 0x052F;
}

inline bool is_space(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\r' || c == U'\n' || c == 0x00A0;
}

}  // namespace tundra
