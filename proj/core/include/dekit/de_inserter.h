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

#ifndef DEKIT_DE_INSERTER_H_
#define DEKIT_DE_INSERTER_H_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dekit/lexicon.h"
#include "dekit/segmenter.h"

namespace dekit {

// Where the particle may be inserted. Loaded from a policy file:
//
//   # comment
//   particle=的
//   min_confidence=1.0
//   noun_tags=n,nr,ns,nt,nz,ng
//   [whitelist]
//   北京大学
//   [left_blacklist]
//   本
//
// Key/value lines must precede the first section; inside a section every
// non-blank, non-comment line is one list item.
struct InsertionPolicy {
  std::set<std::string, std::less<>> noun_tags;
  // Lexicalized compounds (left + right surface) that are never split.
  std::set<std::string, std::less<>> compound_whitelist;
  // Surfaces never treated as modifiers.
  std::set<std::string, std::less<>> left_blacklist;
  double min_confidence = 1.0;
  std::string particle = "的";

  // Noun tags from `tagset` plus the starter whitelist of institution
  // names and fixed country + noun forms.
  static InsertionPolicy Default(const PosTagset& tagset);
  static InsertionPolicy Load(const std::filesystem::path& path,
                              const PosTagset& tagset);
  static InsertionPolicy Parse(std::istream& in, const PosTagset& tagset,
                               std::string_view source_name = "<input>");

  void Validate() const;
};

enum class CandidateStatus { kProposed, kAccepted, kRejected, kAutoApplied };

std::string_view StatusName(CandidateStatus status);
std::optional<CandidateStatus> ParseStatus(std::string_view name);

struct InsertionCandidate {
  std::string sentence_id;
  std::size_t char_offset = 0;  // == left.span.end == right.span.start
  Token left;
  Token right;
  double confidence = 0.0;
  CandidateStatus status = CandidateStatus::kProposed;

  // "<sentence_id>:<char_offset>", unique within a session.
  std::string key() const;

  bool operator==(const InsertionCandidate&) const = default;
};

std::string CandidateKey(std::string_view sentence_id, std::size_t offset);

// 1.0 when both surfaces have a single noun tag in the lexicon, 0.6 when
// either is multi-tagged with a noun first, 0.0 when either is missing.
double PairConfidence(const Lexicon& lexicon, const InsertionPolicy& policy,
                      const Token& left, const Token& right);

// One proposed candidate per adjacent noun/noun pair passing the policy
// filters, ordered by offset. Throws dekit::Error on an untagged sentence.
std::vector<InsertionCandidate> FindCandidates(
    const SegmentedSentence& sentence, const InsertionPolicy& policy,
    const Lexicon& lexicon, std::string_view sentence_id = "");

// Inserts `particle` at every candidate offset. Candidates must be accepted
// or auto-applied, strictly increasing in offset and within the text.
std::string ApplyInsertions(std::string_view text,
                            std::span<const InsertionCandidate> candidates,
                            std::string_view particle);

struct AutoInsertResult {
  std::string text;
  // Every candidate found; those at or above min_confidence are
  // kAutoApplied, the rest stay kProposed.
  std::vector<InsertionCandidate> candidates;

  std::size_t applied() const;
};

AutoInsertResult AutoInsert(std::string_view text, const Lexicon& lexicon,
                            const InsertionPolicy& policy,
                            std::string_view sentence_id = "");

// One JSON object per line. `sentence` carries the original text so that a
// candidates file is self-describing.
std::string CandidateToJson(const InsertionCandidate& candidate,
                            std::string_view sentence);
InsertionCandidate CandidateFromJson(std::string_view line,
                                     std::string* sentence = nullptr);

}  // namespace dekit

#endif  // DEKIT_DE_INSERTER_H_
