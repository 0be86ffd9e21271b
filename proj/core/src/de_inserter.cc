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

#include "dekit/de_inserter.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "dekit/error.h"
#include "dekit/utf8.h"

namespace dekit {
namespace {

using json = nlohmann::ordered_json;

constexpr double kAmbiguousConfidence = 0.6;

std::string_view Trim(std::string_view s) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r';
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Starter exceptions: institution names and fixed country + noun forms that
// read as one name rather than a possessive.
constexpr const char* kStarterWhitelist[] = {
    "北京大学", "清华大学", "复旦大学", "南京大学", "中国人民", "中国政府",
    "中国银行", "人民银行", "人民政府", "人民法院", "人民日报", "世界银行",
    "中央银行", "中央政府", "地方政府", "国际组织", "外交部长", "美国政府",
    "日本政府", "中国共产党",
};

double TokenConfidence(const Lexicon& lexicon, const InsertionPolicy& policy,
                       const Token& token) {
  const LexiconEntry* entry = lexicon.Lookup(token.surface);
  if (entry == nullptr) return 0.0;
  if (!policy.noun_tags.contains(entry->pos_tags.front())) return 0.0;
  return entry->pos_tags.size() == 1 ? 1.0 : kAmbiguousConfidence;
}

json TokenJson(const Token& token) {
  return json{{"surface", token.surface},
              {"pos", token.pos},
              {"start", token.span.start},
              {"end", token.span.end}};
}

Token TokenFromJson(const json& j) {
  Token token;
  token.surface = j.at("surface").get<std::string>();
  token.pos = j.at("pos").get<std::string>();
  token.span.start = j.at("start").get<std::size_t>();
  token.span.end = j.at("end").get<std::size_t>();
  return token;
}

}  // namespace

InsertionPolicy InsertionPolicy::Default(const PosTagset& tagset) {
  InsertionPolicy policy;
  policy.noun_tags = tagset.noun_tags;
  for (const char* word : kStarterWhitelist) {
    policy.compound_whitelist.insert(word);
  }
  return policy;
}

InsertionPolicy InsertionPolicy::Load(const std::filesystem::path& path,
                                      const PosTagset& tagset) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open policy " + path.string());
  return Parse(in, tagset, path.string());
}

InsertionPolicy InsertionPolicy::Parse(std::istream& in,
                                       const PosTagset& tagset,
                                       std::string_view source_name) {
  InsertionPolicy policy;
  policy.noun_tags = tagset.noun_tags;
  enum class Section { kTop, kWhitelist, kBlacklist } section = Section::kTop;
  std::string raw;
  std::size_t line_no = 0;
  const auto fail = [&](const std::string& what) {
    std::ostringstream msg;
    msg << what << " at line " << line_no << " of " << source_name;
    throw Error(msg.str());
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = Trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line == "[whitelist]") {
        section = Section::kWhitelist;
      } else if (line == "[left_blacklist]") {
        section = Section::kBlacklist;
      } else {
        fail("unknown section " + std::string(line));
      }
      continue;
    }
    if (section == Section::kWhitelist) {
      policy.compound_whitelist.emplace(line);
      continue;
    }
    if (section == Section::kBlacklist) {
      policy.left_blacklist.emplace(line);
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) fail("expected key=value");
    const std::string_view key = Trim(line.substr(0, eq));
    const std::string_view value = Trim(line.substr(eq + 1));
    if (key == "particle") {
      policy.particle = std::string(value);
    } else if (key == "min_confidence") {
      double v = 0.0;
      const auto [ptr, ec] =
          std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc() || ptr != value.data() + value.size()) {
        fail("bad min_confidence");
      }
      policy.min_confidence = v;
    } else if (key == "noun_tags") {
      policy.noun_tags.clear();
      std::size_t start = 0;
      while (start <= value.size()) {
        std::size_t comma = value.find(',', start);
        if (comma == std::string_view::npos) comma = value.size();
        const std::string_view tag = Trim(value.substr(start, comma - start));
        if (!tagset.Contains(tag)) fail("unknown tag " + std::string(tag));
        policy.noun_tags.emplace(tag);
        start = comma + 1;
      }
    } else {
      fail("unknown key " + std::string(key));
    }
  }
  try {
    policy.Validate();
  } catch (const Error& e) {
    throw Error(std::string(e.what()) + " in " + std::string(source_name));
  }
  return policy;
}

void InsertionPolicy::Validate() const {
  if (particle.empty()) throw Error("policy particle is empty");
  if (!(min_confidence >= 0.0 && min_confidence <= 1.0)) {
    throw Error("min_confidence must be in [0, 1]");
  }
  if (noun_tags.empty()) throw Error("policy has no noun tags");
}

std::string_view StatusName(CandidateStatus status) {
  switch (status) {
    case CandidateStatus::kProposed: return "proposed";
    case CandidateStatus::kAccepted: return "accepted";
    case CandidateStatus::kRejected: return "rejected";
    case CandidateStatus::kAutoApplied: return "auto_applied";
  }
  return "proposed";
}

std::optional<CandidateStatus> ParseStatus(std::string_view name) {
  if (name == "proposed") return CandidateStatus::kProposed;
  if (name == "accepted") return CandidateStatus::kAccepted;
  if (name == "rejected") return CandidateStatus::kRejected;
  if (name == "auto_applied") return CandidateStatus::kAutoApplied;
  return std::nullopt;
}

std::string CandidateKey(std::string_view sentence_id, std::size_t offset) {
  return std::string(sentence_id) + ":" + std::to_string(offset);
}

std::string InsertionCandidate::key() const {
  return CandidateKey(sentence_id, char_offset);
}

double PairConfidence(const Lexicon& lexicon, const InsertionPolicy& policy,
                      const Token& left, const Token& right) {
  return std::min(TokenConfidence(lexicon, policy, left),
                  TokenConfidence(lexicon, policy, right));
}

std::vector<InsertionCandidate> FindCandidates(
    const SegmentedSentence& sentence, const InsertionPolicy& policy,
    const Lexicon& lexicon, std::string_view sentence_id) {
  if (!sentence.tagged()) {
    throw Error("FindCandidates requires a tagged sentence");
  }
  std::vector<InsertionCandidate> out;
  const auto& tokens = sentence.tokens;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    const Token& left = tokens[i];
    const Token& right = tokens[i + 1];
    if (!policy.noun_tags.contains(left.pos) ||
        !policy.noun_tags.contains(right.pos)) {
      continue;
    }
    if (right.surface == policy.particle) continue;
    if (policy.left_blacklist.contains(left.surface)) continue;
    if (policy.compound_whitelist.contains(left.surface + right.surface)) {
      continue;
    }
    InsertionCandidate candidate;
    candidate.sentence_id = std::string(sentence_id);
    candidate.char_offset = left.span.end;
    candidate.left = left;
    candidate.right = right;
    candidate.confidence = PairConfidence(lexicon, policy, left, right);
    candidate.status = CandidateStatus::kProposed;
    out.push_back(std::move(candidate));
  }
  return out;
}

std::string ApplyInsertions(std::string_view text,
                            std::span<const InsertionCandidate> candidates,
                            std::string_view particle) {
  if (candidates.empty()) return std::string(text);
  const std::vector<std::size_t> bounds = utf8::CharBoundaries(text);
  const std::size_t n = bounds.size() - 1;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    if (c.status != CandidateStatus::kAccepted &&
        c.status != CandidateStatus::kAutoApplied) {
      throw Error("candidate " + c.key() + " is " +
                  std::string(StatusName(c.status)) + ", not applicable");
    }
    if (c.char_offset > n) {
      throw Error("insertion offset " + std::to_string(c.char_offset) +
                  " out of range for text of " + std::to_string(n) +
                  " characters");
    }
    if (i > 0 && c.char_offset <= candidates[i - 1].char_offset) {
      throw Error("insertion offsets must be strictly increasing (offset " +
                  std::to_string(c.char_offset) + ")");
    }
  }
  std::string out(text);
  // Right to left so earlier byte positions stay valid.
  for (std::size_t i = candidates.size(); i-- > 0;) {
    out.insert(bounds[candidates[i].char_offset], particle);
  }
  return out;
}

std::size_t AutoInsertResult::applied() const {
  return static_cast<std::size_t>(
      std::count_if(candidates.begin(), candidates.end(), [](const auto& c) {
        return c.status == CandidateStatus::kAutoApplied;
      }));
}

AutoInsertResult AutoInsert(std::string_view text, const Lexicon& lexicon,
                            const InsertionPolicy& policy,
                            std::string_view sentence_id) {
  AutoInsertResult result;
  result.candidates =
      FindCandidates(SegmentAndTag(text, lexicon), policy, lexicon, sentence_id);
  std::vector<InsertionCandidate> applied;
  for (auto& c : result.candidates) {
    if (c.confidence >= policy.min_confidence) {
      c.status = CandidateStatus::kAutoApplied;
      applied.push_back(c);
    }
  }
  result.text = ApplyInsertions(text, applied, policy.particle);
  return result;
}

std::string CandidateToJson(const InsertionCandidate& candidate,
                            std::string_view sentence) {
  json j;
  j["key"] = candidate.key();
  j["sentence_id"] = candidate.sentence_id;
  j["char_offset"] = candidate.char_offset;
  j["sentence"] = std::string(sentence);
  j["left"] = TokenJson(candidate.left);
  j["right"] = TokenJson(candidate.right);
  j["confidence"] = candidate.confidence;
  j["status"] = std::string(StatusName(candidate.status));
  return j.dump();
}

InsertionCandidate CandidateFromJson(std::string_view line,
                                     std::string* sentence) {
  try {
    const json j = json::parse(line);
    InsertionCandidate c;
    c.sentence_id = j.at("sentence_id").get<std::string>();
    c.char_offset = j.at("char_offset").get<std::size_t>();
    c.left = TokenFromJson(j.at("left"));
    c.right = TokenFromJson(j.at("right"));
    c.confidence = j.at("confidence").get<double>();
    const auto status = ParseStatus(j.at("status").get<std::string>());
    if (!status) throw Error("bad candidate status");
    c.status = *status;
    if (sentence != nullptr) *sentence = j.value("sentence", std::string());
    return c;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed candidate: ") + e.what());
  }
}

}  // namespace dekit
