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


#ifndef DEKIT_TESTS_ORACLES_SEGMENT_ORACLE_H_
#define DEKIT_TESTS_ORACLES_SEGMENT_ORACLE_H_

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "dekit/lexicon.h"
#include "dekit/utf8.h"

namespace dekit::oracle {

// Exhaustive segmentation: enumerates all 2^(n-1) cut sets, keeps those
// whose multi-character pieces are lexicon words, and picks the best by
// score (1e-9 tolerance), then fewest tokens, then longest successive
// tokens. For texts without ASCII letters or digits.
inline std::vector<std::string> ExhaustiveSegment(const std::string& text,
                                                  const Lexicon& lexicon) {
  const auto bounds = utf8::CharBoundaries(text);
  const std::size_t n = bounds.size() - 1;
  if (n == 0) return {};
  const double log_norm = std::log(
      static_cast<double>(lexicon.total_frequency() + lexicon.size()));

  // Score of every substring [i, j); NaN marks a multi-character piece that
  // is not a lexicon word.
  std::vector<std::vector<double>> piece(n, std::vector<double>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j <= n; ++j) {
      const LexiconEntry* e = lexicon.Lookup(
          std::string_view(text).substr(bounds[i], bounds[j] - bounds[i]));
      if (e == nullptr && j - i > 1) {
        piece[i][j] = NAN;
        continue;
      }
      const double freq =
          e == nullptr ? 0.0 : static_cast<double>(e->frequency);
      piece[i][j] = std::log(freq + 1.0) - log_norm;
    }
  }

  // Scores the path for `mask` into `lengths`; false if any piece is not a
  // word.
  auto evaluate = [&](unsigned long mask, std::vector<std::size_t>* lengths,
                      double* score) {
    lengths->clear();
    *score = 0.0;
    std::size_t start = 0;
    for (std::size_t i = 1; i <= n; ++i) {
      if (i < n && !((mask >> (i - 1)) & 1UL)) continue;
      const double sc = piece[start][i];
      if (std::isnan(sc)) return false;
      *score += sc;
      lengths->push_back(i - start);
      start = i;
    }
    return true;
  };

  const unsigned long masks = 1UL << (n - 1);
  std::vector<std::size_t> lengths;
  double score = 0.0;
  double best = -INFINITY;
  for (unsigned long mask = 0; mask < masks; ++mask) {
    if (evaluate(mask, &lengths, &score)) best = std::max(best, score);
  }
  std::vector<std::size_t> winner;
  bool found = false;
  for (unsigned long mask = 0; mask < masks; ++mask) {
    if (!evaluate(mask, &lengths, &score) || score < best - 1e-9) continue;
    if (!found || lengths.size() < winner.size() ||
        (lengths.size() == winner.size() && lengths > winner)) {
      winner = lengths;
      found = true;
    }
  }
  std::vector<std::string> tokens;
  std::size_t at = 0;
  for (std::size_t len : winner) {
    tokens.push_back(text.substr(bounds[at], bounds[at + len] - bounds[at]));
    at += len;
  }
  return tokens;
}

// Ten single-character stand-ins and a 15-entry lexicon over them. The
// frequencies make some paths tie exactly on score: 庚辛 ties with 庚+辛,
// and 丁戊+己 ties with 丁+戊己, so both tie-breaking rules are exercised.
inline const char* const kOracleAlphabet[] = {"甲", "乙", "丙", "丁", "戊",
                                              "己", "庚", "辛", "壬", "癸"};

inline Lexicon OracleLexicon() {
  const std::vector<std::pair<std::string, std::uint64_t>> words = {
      {"甲", 99}, {"乙", 99}, {"丙", 49}, {"丁", 9},    {"戊", 7},
      {"己", 4},  {"庚", 99}, {"辛", 49}, {"甲乙", 19}, {"乙丙", 9},
      {"丁戊", 19}, {"戊己", 9}, {"庚辛", 9}, {"甲乙丙", 3}, {"丙甲", 2},
  };
  std::vector<LexiconEntry> entries;
  for (const auto& [w, f] : words) entries.push_back({w, f, {"n"}});
  return Lexicon(std::move(entries), PosTagset::Default());
}

}  // namespace dekit::oracle

#endif  // DEKIT_TESTS_ORACLES_SEGMENT_ORACLE_H_
