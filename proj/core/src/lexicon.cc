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

#include "dekit/lexicon.h"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dekit/error.h"
#include "dekit/utf8.h"

namespace dekit {
namespace {

std::vector<std::string_view> SplitOn(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

bool HasWhitespace(std::string_view s) {
  for (char32_t cp : utf8::Decode(s)) {
    if (utf8::IsWhitespace(cp)) return true;
  }
  return false;
}

}  // namespace

PosTagset PosTagset::Default() {
  PosTagset t;
  t.noun_tags = {"n", "nr", "ns", "nt", "nz", "ng"};
  t.particle_tags = {"u", "ud", "ug", "uj", "ul", "uv", "uz"};
  t.all_tags = {"v", "a", "d", "p", "c", "m", "q", "r", "x",
                "t", "f", "s", "b", "i", "l", "j", "y", "e",
                "o", "z", "k", "h", "g", "w"};
  t.all_tags.insert(t.noun_tags.begin(), t.noun_tags.end());
  t.all_tags.insert(t.particle_tags.begin(), t.particle_tags.end());
  t.unknown_tag = "x";
  return t;
}

void PosTagset::Validate() const {
  for (const auto& tag : noun_tags) {
    if (!all_tags.contains(tag)) throw Error("noun tag " + tag + " not in tagset");
  }
  for (const auto& tag : particle_tags) {
    if (!all_tags.contains(tag)) {
      throw Error("particle tag " + tag + " not in tagset");
    }
  }
  if (!all_tags.contains(unknown_tag)) {
    throw Error("unknown tag " + unknown_tag + " not in tagset");
  }
}

Lexicon::Lexicon(std::vector<LexiconEntry> entries, PosTagset tagset)
    : tagset_(std::move(tagset)) {
  tagset_.Validate();
  for (auto& entry : entries) {
    if (entry.surface.empty()) throw Error("lexicon entry has empty surface");
    if (HasWhitespace(entry.surface)) {
      throw Error("lexicon surface contains whitespace: " + entry.surface);
    }
    if (entry.pos_tags.empty()) {
      throw Error("lexicon entry " + entry.surface + " has no tags");
    }
    for (const auto& tag : entry.pos_tags) {
      if (!tagset_.Contains(tag)) throw Error("unknown tag " + tag);
    }
    auto [it, inserted] = index_.try_emplace(entry.surface, entries_.size());
    if (inserted) {
      max_word_len_ = std::max(max_word_len_, utf8::CharCount(entry.surface));
      entries_.push_back(std::move(entry));
      continue;
    }
    LexiconEntry& merged = entries_[it->second];
    merged.frequency += entry.frequency;
    for (auto& tag : entry.pos_tags) {
      if (std::find(merged.pos_tags.begin(), merged.pos_tags.end(), tag) ==
          merged.pos_tags.end()) {
        merged.pos_tags.push_back(std::move(tag));
      }
    }
  }
  if (entries_.empty()) throw Error("lexicon is empty");
  for (const auto& entry : entries_) total_frequency_ += entry.frequency;
  if (total_frequency_ == 0) throw Error("lexicon total frequency is zero");
}

Lexicon Lexicon::Load(const std::filesystem::path& path, PosTagset tagset) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open lexicon " + path.string());
  return Parse(in, std::move(tagset), path.string());
}

Lexicon Lexicon::Parse(std::istream& in, PosTagset tagset,
                       std::string_view source_name) {
  std::vector<LexiconEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  const auto fail = [&](const std::string& what) {
    std::ostringstream msg;
    msg << what << " at line " << line_no;
    if (source_name != "<input>") msg << " of " << source_name;
    throw Error(msg.str());
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto fields = SplitOn(line, '\t');
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty() ||
        fields[2].empty()) {
      fail("malformed lexicon line");
    }
    LexiconEntry entry;
    entry.surface = std::string(fields[0]);
    if (HasWhitespace(entry.surface)) fail("whitespace in surface");
    const char* first = fields[1].data();
    const char* last = first + fields[1].size();
    auto [ptr, ec] = std::from_chars(first, last, entry.frequency);
    if (ec != std::errc() || ptr != last) fail("bad frequency");
    for (std::string_view tag : SplitOn(fields[2], ',')) {
      if (tag.empty()) fail("empty tag");
      if (!tagset.Contains(tag)) fail("unknown tag " + std::string(tag));
      entry.pos_tags.emplace_back(tag);
    }
    entries.push_back(std::move(entry));
  }
  if (entries.empty()) {
    throw Error("lexicon " + std::string(source_name) + " has no entries");
  }
  return Lexicon(std::move(entries), std::move(tagset));
}

const LexiconEntry* Lexicon::Lookup(std::string_view surface) const {
  auto it = index_.find(surface);
  return it == index_.end() ? nullptr : &entries_[it->second];
}

std::filesystem::path DefaultDataDir() {
  if (const char* env = std::getenv("DEKIT_DATA_DIR"); env && *env) {
    return env;
  }
#ifdef DEKIT_SOURCE_DATA_DIR
  if (std::filesystem::exists(DEKIT_SOURCE_DATA_DIR)) {
    return DEKIT_SOURCE_DATA_DIR;
  }
#endif
#ifdef DEKIT_INSTALL_DATA_DIR
  return DEKIT_INSTALL_DATA_DIR;
#else
  return "data";
#endif
}

std::filesystem::path DefaultLexiconPath() {
  return DefaultDataDir() / "lexicon.tsv";
}

}  // namespace dekit
