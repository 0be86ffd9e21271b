// Copyright 2026 The dekit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DEKIT_UTF8_H_
#define DEKIT_UTF8_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace dekit::utf8 {

inline constexpr char32_t kReplacementChar = 0xFFFD;

// Decodes the code point starting at byte `pos`. Malformed sequences decode
// as kReplacementChar with *length == 1, so every byte belongs to exactly
// one character and byte-level reconstruction is always possible.
char32_t DecodeAt(std::string_view text, std::size_t pos, std::size_t* length);

// Byte offsets of every character boundary, including 0 and text.size().
// The result has CharCount(text) + 1 elements.
std::vector<std::size_t> CharBoundaries(std::string_view text);

std::size_t CharCount(std::string_view text);

// True if `text` is well-formed UTF-8.
bool IsValid(std::string_view text);

std::vector<char32_t> Decode(std::string_view text);

void Append(char32_t cp, std::string* out);

std::string Encode(const std::vector<char32_t>& cps);

// Returns the substring covering characters [start, end).
std::string_view CharSubstr(std::string_view text,
                            const std::vector<std::size_t>& boundaries,
                            std::size_t start, std::size_t end);

bool IsAsciiLetter(char32_t cp);
bool IsDigit(char32_t cp);  // ASCII and full-width digits.
bool IsWhitespace(char32_t cp);
bool IsPunctuation(char32_t cp);  // ASCII punctuation plus common CJK forms.

}  // namespace dekit::utf8

#endif  // DEKIT_UTF8_H_
