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

#ifndef DEKIT_SEGMENTER_H_
#define DEKIT_SEGMENTER_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "dekit/lexicon.h"

namespace dekit {

// Half-open character (code point) interval.
struct CharSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  bool operator==(const CharSpan&) const = default;
};

struct Token {
  std::string surface;
  std::string pos;  // Empty until tagged.
  CharSpan span;

  bool operator==(const Token&) const = default;
};

// Tokens tile [0, CharCount(text)) contiguously and their surfaces
// concatenate to `text`.
struct SegmentedSentence {
  std::string text;
  std::vector<Token> tokens;

  bool tagged() const;
  std::vector<std::string> surfaces() const;
};

// Smoothed unigram log-probability log(freq+1) - log(total+V) used to score
// segmentation paths. Words absent from the lexicon count as freq 0.
double TokenLogProb(const Lexicon& lexicon, std::string_view word);

// Sum of TokenLogProb over the tokens, left to right.
double PathScore(const Lexicon& lexicon, const std::vector<Token>& tokens);

// Maximum-score segmentation over the DAG of dictionary words. Every
// character is also reachable as a single-character edge; multi-character
// edges must be lexicon words. Runs of ASCII letters and runs of digits are
// kept whole and do not take part in the DAG. Among equal scores (within
// 1e-9) the path with fewer tokens wins, then the one whose successive
// tokens start longest.
SegmentedSentence Segment(std::string_view text, const Lexicon& lexicon);

// Assigns each token the first tag of its lexicon entry, or the tagset's
// unknown tag for out-of-vocabulary tokens. Idempotent.
SegmentedSentence Tag(SegmentedSentence sentence, const Lexicon& lexicon);

// Segment followed by Tag.
SegmentedSentence SegmentAndTag(std::string_view text, const Lexicon& lexicon);

// "学生/n 问题/n" style rendering.
std::string FormatTagged(const SegmentedSentence& sentence);

}  // namespace dekit

#endif  // DEKIT_SEGMENTER_H_
