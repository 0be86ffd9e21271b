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

#ifndef DEKIT_LEXICON_H_
#define DEKIT_LEXICON_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace dekit {

// ICTCLAS-style part-of-speech tag inventory. Noun and particle tags drive
// attributive-noun detection; everything the lexicon mentions must be in
// all_tags.
struct PosTagset {
  std::set<std::string, std::less<>> noun_tags;
  std::set<std::string, std::less<>> particle_tags;
  std::set<std::string, std::less<>> all_tags;
  std::string unknown_tag = "x";

  // n/nr/ns/nt/nz/ng nouns, u-family particles, v a d p c m q r, a few
  // auxiliary classes (t f s b i l j y e o z k h g w), and "x" for unknown.
  static PosTagset Default();

  bool Contains(std::string_view tag) const { return all_tags.contains(tag); }
  bool IsNoun(std::string_view tag) const { return noun_tags.contains(tag); }
  bool IsParticle(std::string_view tag) const {
    return particle_tags.contains(tag);
  }

  // Throws dekit::Error when noun/particle/unknown tags are not all
  // members of all_tags.
  void Validate() const;
};

struct LexiconEntry {
  std::string surface;
  std::uint64_t frequency = 0;
  std::vector<std::string> pos_tags;  // Most frequent first.

  bool operator==(const LexiconEntry&) const = default;
};

// Immutable word/frequency/POS dictionary. Safe for concurrent reads.
class Lexicon {
 public:
  // Builds a lexicon from raw entries. Duplicate surfaces are merged by
  // summing frequencies and appending unseen tags in order of appearance.
  // Throws dekit::Error if any entry violates the entry invariants or the
  // result is empty.
  Lexicon(std::vector<LexiconEntry> entries, PosTagset tagset);

  // Reads `surface<TAB>frequency<TAB>tag[,tag...]` lines. `#` comments and
  // blank lines are skipped.
  static Lexicon Load(const std::filesystem::path& path,
                      PosTagset tagset = PosTagset::Default());
  static Lexicon Parse(std::istream& in, PosTagset tagset,
                       std::string_view source_name = "<input>");

  // Exact surface match; nullptr when absent.
  const LexiconEntry* Lookup(std::string_view surface) const;
  bool Contains(std::string_view surface) const {
    return Lookup(surface) != nullptr;
  }

  std::uint64_t total_frequency() const { return total_frequency_; }
  std::size_t max_word_len() const { return max_word_len_; }
  std::size_t size() const { return entries_.size(); }
  const PosTagset& tagset() const { return tagset_; }

  // Entries in first-appearance order.
  const std::vector<LexiconEntry>& entries() const { return entries_; }

 private:
  PosTagset tagset_;
  std::vector<LexiconEntry> entries_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::uint64_t total_frequency_ = 0;
  std::size_t max_word_len_ = 0;
};

// Directory holding the bundled lexicon, wordlist, policy and demo sets.
// Resolution order: $DEKIT_DATA_DIR, the source tree, the install prefix.
std::filesystem::path DefaultDataDir();
std::filesystem::path DefaultLexiconPath();

}  // namespace dekit

#endif  // DEKIT_LEXICON_H_
