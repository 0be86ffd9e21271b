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

#ifndef DEKIT_CORPUS_IO_H_
#define DEKIT_CORPUS_IO_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dekit {

enum class Provenance { kOriginal, kDeModified, kTranslated };

std::string_view ProvenanceName(Provenance p);
std::optional<Provenance> ParseProvenance(std::string_view name);

struct ParallelPair {
  std::string id;
  std::string source;
  std::string target;
  Provenance provenance = Provenance::kOriginal;
  std::map<std::string, std::string> meta;

  bool operator==(const ParallelPair&) const = default;
};

struct Corpus {
  std::vector<ParallelPair> pairs;
  // Ordered `#key=value` header lines (created_by, policy_hash, ...).
  std::vector<std::pair<std::string, std::string>> header;

  std::optional<std::string> GetHeader(std::string_view key) const;
  void SetHeader(std::string key, std::string value);

  // Throws on duplicate ids, empty sources or unwritable header keys.
  void Validate() const;

  std::vector<std::string> sources() const;
  std::vector<std::string> targets() const;

  bool operator==(const Corpus&) const = default;
};

// Field escaping used by every TSV this library writes: backslash, tab,
// newline and carriage return become \\ \t \n \r. A leading '#' is written
// as \# so records cannot be mistaken for header lines.
std::string EscapeField(std::string_view field);
std::string UnescapeField(std::string_view field);

// Canonical corpus format, UTF-8 with LF endings:
//
//   #key=value                         (header, before the first record)
//   id<TAB>source<TAB>target<TAB>provenance[<TAB>meta-json]
//
// The optional fifth column is written only for pairs with metadata.
// Writing then reading reproduces the corpus exactly, and re-writing
// reproduces the bytes.
std::string FormatTsv(const Corpus& corpus);
Corpus ParseTsv(std::istream& in, std::string_view source_name = "<input>");
Corpus ReadTsv(const std::filesystem::path& path);
void WriteTsv(const Corpus& corpus, const std::filesystem::path& path);

// Third-party `source<TAB>target` import. Ids are 1-based line numbers.
Corpus ReadPlainParallel(const std::filesystem::path& path);

// One sentence per line (trailing '\r' stripped, blank lines skipped).
std::vector<std::string> ReadLines(const std::filesystem::path& path);
void WriteLines(std::span<const std::string> lines,
                const std::filesystem::path& path);

void WriteFile(const std::filesystem::path& path, std::string_view content);
std::string ReadFile(const std::filesystem::path& path);

// Deterministic partition: a seeded shuffle, then consecutive slices of the
// requested sizes, then the residual. Returns sizes.size() + 1 corpora;
// each records split_seed/split_part in its header.
std::vector<Corpus> Split(const Corpus& corpus,
                          std::span<const std::size_t> sizes,
                          std::uint64_t seed);

}  // namespace dekit

#endif  // DEKIT_CORPUS_IO_H_
