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

#include "tundra/unicode.hpp"

#include <string>

#include "doctest.h"

using namespace tundra;

TEST_CASE("ascii roundtrip") {
  const std::string s = "hello, world 123";
  CHECK(encode_utf8(decode_utf8(s)) == s);
}

TEST_CASE("cyrillic roundtrip") {
  const std::string s = "ӈутингивик ӄораӈы";
  const auto cp = decode_utf8(s);
  CHECK(cp.size() == 17);
  CHECK(encode_utf8(cp) == s);
}

TEST_CASE("four byte code points roundtrip") {
  const std::string s = "a\xF0\x9F\x8E\xB5z";  // U+1F3B5 between ascii
  const auto cp = decode_utf8(s);
  REQUIRE(cp.size() == 3);
  CHECK(cp[1] == char32_t{0x1F3B5});
  CHECK(encode_utf8(cp) == s);
}

TEST_CASE("invalid bytes become replacement characters") {
  const std::string s = "a\xFFz";
  const auto cp = decode_utf8(s);
  REQUIRE(cp.size() == 3);
  CHECK(cp[1] == char32_t{0xFFFD});
}

TEST_CASE("overlong encodings are rejected") {
  // 0xC0 0xAF is an overlong '/'.
  const auto cp = decode_utf8(std::string("\xC0\xAF"));
  for (const char32_t c : cp) CHECK(c == char32_t{0xFFFD});
}

TEST_CASE("surrogate range is rejected") {
  // 0xED 0xA0 0x80 encodes U+D800.
  const auto cp = decode_utf8(std::string("\xED\xA0\x80"));
  REQUIRE(!cp.empty());
  for (const char32_t c : cp) CHECK(c == char32_t{0xFFFD});
}

TEST_CASE("letter and space classification") {
  CHECK(is_letter(U'a'));
  CHECK(is_letter(U'Z'));
  CHECK(is_letter(U'ӄ'));
  CHECK(is_letter(U'Н'));
  CHECK(!is_letter(U'1'));
  CHECK(!is_letter(U' '));
  CHECK(is_space(U' '));
  CHECK(is_space(U'\t'));
  CHECK(is_space(char32_t{0x00A0}));
  CHECK(!is_space(U'x'));
}
