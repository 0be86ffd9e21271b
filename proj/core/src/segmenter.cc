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

#include "dekit/segmenter.h"

#include <cmath>

#include "dekit/utf8.h"

namespace dekit {
namespace {

constexpr double kTieEpsilon = 1e-9;

enum class CharClass { kLetter, kDigit, kOther };

CharClass Classify(char32_t cp) {
  if (utf8::IsAsciiLetter(cp)) return CharClass::kLetter;
  if (utf8::IsDigit(cp)) return CharClass::kDigit;
  return CharClass::kOther;
}

struct Route {
  double score = 0.0;
  std::size_t tokens = 0;
  std::size_t next = 0;  // End of the first token on the best path.
};

// True when taking an edge of length `len` with the resulting totals beats
// the current best at this position.
bool Better(double score, std::size_t tokens, std::size_t len,
            const Route& best, std::size_t best_len) {
  if (score > best.score + kTieEpsilon) return true;
  if (score < best.score - kTieEpsilon) return false;
  if (tokens != best.tokens) return tokens < best.tokens;
  return len > best_len;
}

void SegmentBlock(std::string_view text,
                  const std::vector<std::size_t>& bounds, std::size_t begin,
                  std::size_t end, const Lexicon& lexicon,
                  std::vector<Token>* out) {
  const std::size_t max_len = std::max<std::size_t>(1, lexicon.max_word_len());
  std::vector<Route> route(end - begin + 1);
  for (std::size_t i = end; i-- > begin;) {
    Route best;
    std::size_t best_len = 0;
    bool have = false;
    const std::size_t limit = std::min(end, i + max_len);
    for (std::size_t j = i + 1; j <= limit; ++j) {
      const std::string_view word = utf8::CharSubstr(text, bounds, i, j);
      if (j > i + 1 && !lexicon.Contains(word)) continue;
      const Route& rest = route[j - begin];
      const double score = TokenLogProb(lexicon, word) + rest.score;
      const std::size_t tokens = rest.tokens + 1;
      if (!have || Better(score, tokens, j - i, best, best_len)) {
        best = Route{score, tokens, j};
        best_len = j - i;
        have = true;
      }
    }
    route[i - begin] = best;
  }
  for (std::size_t i = begin; i < end;) {
    const std::size_t j = route[i - begin].next;
    out->push_back(
        Token{std::string(utf8::CharSubstr(text, bounds, i, j)), "", {i, j}});
    i = j;
  }
}

}  // namespace

bool SegmentedSentence::tagged() const {
  for (const auto& token : tokens) {
    if (token.pos.empty()) return false;
  }
  return true;
}

std::vector<std::string> SegmentedSentence::surfaces() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& token : tokens) out.push_back(token.surface);
  return out;
}

double TokenLogProb(const Lexicon& lexicon, std::string_view word) {
  const LexiconEntry* entry = lexicon.Lookup(word);
  const double freq = entry ? static_cast<double>(entry->frequency) : 0.0;
  const double denom = static_cast<double>(lexicon.total_frequency()) +
                       static_cast<double>(lexicon.size());
  return std::log(freq + 1.0) - std::log(denom);
}

double PathScore(const Lexicon& lexicon, const std::vector<Token>& tokens) {
  double score = 0.0;
  for (const auto& token : tokens) score += TokenLogProb(lexicon, token.surface);
  return score;
}

SegmentedSentence Segment(std::string_view text, const Lexicon& lexicon) {
  SegmentedSentence result;
  result.text = std::string(text);
  const std::vector<std::size_t> bounds = utf8::CharBoundaries(text);
  const std::size_t n = bounds.size() - 1;

  std::vector<CharClass> classes(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t len;
    classes[i] = Classify(utf8::DecodeAt(text, bounds[i], &len));
  }

  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && classes[j] == classes[i]) ++j;
    if (classes[i] == CharClass::kOther) {
      SegmentBlock(text, bounds, i, j, lexicon, &result.tokens);
    } else {
      result.tokens.push_back(
          Token{std::string(utf8::CharSubstr(text, bounds, i, j)), "", {i, j}});
    }
    i = j;
  }
  return result;
}

SegmentedSentence Tag(SegmentedSentence sentence, const Lexicon& lexicon) {
  for (auto& token : sentence.tokens) {
    const LexiconEntry* entry = lexicon.Lookup(token.surface);
    token.pos = entry ? entry->pos_tags.front() : lexicon.tagset().unknown_tag;
  }
  return sentence;
}

SegmentedSentence SegmentAndTag(std::string_view text, const Lexicon& lexicon) {
  return Tag(Segment(text, lexicon), lexicon);
}

std::string FormatTagged(const SegmentedSentence& sentence) {
  std::string out;
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    if (i > 0) out += ' ';
    out += sentence.tokens[i].surface;
    if (!sentence.tokens[i].pos.empty()) {
      out += '/';
      out += sentence.tokens[i].pos;
    }
  }
  return out;
}

}  // namespace dekit
