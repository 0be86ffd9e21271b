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

#include "dekit/corpus_io.h"

#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

#include "dekit/error.h"
#include "dekit/utf8.h"

namespace dekit {
namespace {

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::string MetaToJson(const std::map<std::string, std::string>& meta) {
  nlohmann::json j = meta;
  return j.dump();
}

std::map<std::string, std::string> MetaFromJson(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  return j.get<std::map<std::string, std::string>>();
}

// Uniform draw in [0, bound) without modulo bias; fully specified so that
// splits are reproducible across standard libraries.
std::uint64_t UniformBelow(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  while (true) {
    const std::uint64_t x = rng();
    if (x < limit) return x % bound;
  }
}

bool ValidHeaderKey(std::string_view key) {
  if (key.empty()) return false;
  for (char c : key) {
    if (c == '=' || c == '\t' || c == '\n' || c == '\r' || c == '\\') {
      return false;
    }
  }
  return true;
}

}  // namespace

std::string_view ProvenanceName(Provenance p) {
  switch (p) {
    case Provenance::kOriginal: return "original";
    case Provenance::kDeModified: return "de_modified";
    case Provenance::kTranslated: return "translated";
  }
  return "original";
}

std::optional<Provenance> ParseProvenance(std::string_view name) {
  if (name == "original") return Provenance::kOriginal;
  if (name == "de_modified") return Provenance::kDeModified;
  if (name == "translated") return Provenance::kTranslated;
  return std::nullopt;
}

std::optional<std::string> Corpus::GetHeader(std::string_view key) const {
  for (const auto& [k, v] : header) {
    if (k == key) return v;
  }
  return std::nullopt;
}

void Corpus::SetHeader(std::string key, std::string value) {
  for (auto& [k, v] : header) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  header.emplace_back(std::move(key), std::move(value));
}

void Corpus::Validate() const {
  std::set<std::string_view> ids;
  for (const auto& pair : pairs) {
    if (!ids.insert(pair.id).second) throw Error("duplicate id " + pair.id);
    if (pair.source.empty()) throw Error("empty source for id " + pair.id);
    for (const auto& [k, v] : pair.meta) {
      if (!utf8::IsValid(k) || !utf8::IsValid(v)) {
        throw Error("meta for id " + pair.id + " is not valid UTF-8");
      }
    }
  }
  std::set<std::string_view> keys;
  for (const auto& [k, v] : header) {
    if (!ValidHeaderKey(k)) throw Error("invalid header key '" + k + "'");
    if (!keys.insert(k).second) throw Error("duplicate header key " + k);
  }
}

std::vector<std::string> Corpus::sources() const {
  std::vector<std::string> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(p.source);
  return out;
}

std::vector<std::string> Corpus::targets() const {
  std::vector<std::string> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(p.target);
  return out;
}

std::string EscapeField(std::string_view field) {
  std::string out;
  out.reserve(field.size());
  if (!field.empty() && field.front() == '#') {
    out += "\\#";
    field.remove_prefix(1);
  }
  for (char c : field) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string UnescapeField(std::string_view field) {
  std::string out;
  out.reserve(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field[i] != '\\') {
      out += field[i];
      continue;
    }
    if (i + 1 == field.size()) throw Error("dangling escape");
    switch (field[++i]) {
      case '\\': out += '\\'; break;
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      case '#': out += '#'; break;
      default:
        throw Error(std::string("unknown escape \\") + field[i]);
    }
  }
  return out;
}

std::string FormatTsv(const Corpus& corpus) {
  corpus.Validate();
  std::string out;
  for (const auto& [k, v] : corpus.header) {
    out += '#';
    out += k;
    out += '=';
    out += EscapeField(v);
    out += '\n';
  }
  for (const auto& p : corpus.pairs) {
    out += EscapeField(p.id);
    out += '\t';
    out += EscapeField(p.source);
    out += '\t';
    out += EscapeField(p.target);
    out += '\t';
    out += ProvenanceName(p.provenance);
    if (!p.meta.empty()) {
      out += '\t';
      out += EscapeField(MetaToJson(p.meta));
    }
    out += '\n';
  }
  return out;
}

Corpus ParseTsv(std::istream& in, std::string_view source_name) {
  Corpus corpus;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  bool in_header = true;
  const auto fail = [&](const std::string& what) {
    std::ostringstream msg;
    msg << what << " at line " << line_no << " of " << source_name;
    throw Error(msg.str());
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (!in_header) fail("header line after first record");
      const std::size_t eq = line.find('=');
      if (eq == std::string::npos || eq == 1) fail("malformed header line");
      try {
        corpus.header.emplace_back(line.substr(1, eq - 1),
                                   UnescapeField(line.substr(eq + 1)));
      } catch (const Error& e) {
        fail(e.what());
      }
      continue;
    }
    in_header = false;
    const auto fields = SplitTabs(line);
    if (fields.size() != 4 && fields.size() != 5) {
      fail("expected 4 or 5 columns, got " + std::to_string(fields.size()));
    }
    ParallelPair pair;
    try {
      pair.id = UnescapeField(fields[0]);
      pair.source = UnescapeField(fields[1]);
      pair.target = UnescapeField(fields[2]);
      if (fields.size() == 5) pair.meta = MetaFromJson(UnescapeField(fields[4]));
    } catch (const Error& e) {
      fail(e.what());
    } catch (const nlohmann::json::exception& e) {
      fail(std::string("bad meta column: ") + e.what());
    }
    const auto provenance = ParseProvenance(fields[3]);
    if (!provenance) fail("unknown provenance '" + std::string(fields[3]) + "'");
    pair.provenance = *provenance;
    if (pair.source.empty()) fail("empty source");
    if (!ids.insert(pair.id).second) fail("duplicate id " + pair.id);
    corpus.pairs.push_back(std::move(pair));
  }
  return corpus;
}

Corpus ReadTsv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus " + path.string());
  return ParseTsv(in, path.string());
}

void WriteTsv(const Corpus& corpus, const std::filesystem::path& path) {
  WriteFile(path, FormatTsv(corpus));
}

Corpus ReadPlainParallel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = SplitTabs(line);
    if (fields.size() != 2 || fields[0].empty()) {
      throw Error("expected source<TAB>target at line " +
                  std::to_string(line_no) + " of " + path.string());
    }
    corpus.pairs.push_back(ParallelPair{std::to_string(line_no),
                                        std::string(fields[0]),
                                        std::string(fields[1]),
                                        Provenance::kOriginal,
                                        {}});
  }
  return corpus;
}

std::vector<std::string> ReadLines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

void WriteLines(std::span<const std::string> lines,
                const std::filesystem::path& path) {
  std::string content;
  for (const auto& l : lines) {
    content += l;
    content += '\n';
  }
  WriteFile(path, content);
}

void WriteFile(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("write failed for " + path.string());
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Corpus> Split(const Corpus& corpus,
                          std::span<const std::size_t> sizes,
                          std::uint64_t seed) {
  const std::size_t requested =
      std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
  if (requested > corpus.pairs.size()) {
    throw Error("split sizes sum to " + std::to_string(requested) +
                " but corpus has " + std::to_string(corpus.pairs.size()) +
                " pairs");
  }
  std::vector<std::size_t> order(corpus.pairs.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[UniformBelow(rng, i)]);
  }

  std::vector<Corpus> parts(sizes.size() + 1);
  std::size_t cursor = 0;
  for (std::size_t part = 0; part < parts.size(); ++part) {
    const std::size_t n =
        part < sizes.size() ? sizes[part] : order.size() - cursor;
    Corpus& out = parts[part];
    out.header = corpus.header;
    out.SetHeader("split_seed", std::to_string(seed));
    out.SetHeader("split_part", part < sizes.size() ? std::to_string(part)
                                                    : std::string("residual"));
    for (std::size_t k = 0; k < n; ++k) {
      out.pairs.push_back(corpus.pairs[order[cursor + k]]);
    }
    cursor += n;
  }
  return parts;
}

}  // namespace dekit
