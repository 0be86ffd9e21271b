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

#include "dekit/ablation.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "dekit/error.h"
#include "dekit/lexicon.h"

namespace dekit {
namespace {

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  // Avoid printing "-0.000000".
  if (std::string_view(buf) == "-0.000000") return "0.000000";
  return buf;
}

std::vector<std::string> TranslateOrThrow(TranslationBackend& backend,
                                          std::span<const std::string> texts,
                                          std::string_view label) {
  try {
    return backend.Translate(texts);
  } catch (const std::exception& e) {
    throw Error("translation failed for " + std::string(label) + ": " +
                e.what());
  }
}

}  // namespace

std::string_view CategoryName(WordCategory c) {
  switch (c) {
    case WordCategory::kPreposition: return "preposition";
    case WordCategory::kConjunction: return "conjunction";
    case WordCategory::kParticle: return "particle";
    case WordCategory::kModal: return "modal";
  }
  return "particle";
}

std::optional<WordCategory> ParseCategory(std::string_view name) {
  if (name == "preposition") return WordCategory::kPreposition;
  if (name == "conjunction") return WordCategory::kConjunction;
  if (name == "particle") return WordCategory::kParticle;
  if (name == "modal") return WordCategory::kModal;
  return std::nullopt;
}

std::vector<FunctionWordSpec> LoadWordlist(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open wordlist " + path.string());
  return ParseWordlist(in, path.string());
}

std::vector<FunctionWordSpec> ParseWordlist(std::istream& in,
                                            std::string_view source_name) {
  std::vector<FunctionWordSpec> out;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  const auto fail = [&](const std::string& what) {
    std::ostringstream msg;
    msg << what << " at line " << line_no << " of " << source_name;
    throw Error(msg.str());
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 ||
        line.find('\t', tab + 1) != std::string::npos) {
      fail("expected surface<TAB>category");
    }
    const std::string surface = line.substr(0, tab);
    const std::string category = line.substr(tab + 1);
    const auto parsed = ParseCategory(category);
    if (!parsed) fail("unknown category '" + category + "'");
    if (!seen.insert(surface).second) fail("duplicate surface " + surface);
    out.push_back(FunctionWordSpec{surface, *parsed});
  }
  return out;
}

std::filesystem::path DefaultWordlistPath() {
  return DefaultDataDir() / "function_words.tsv";
}

std::size_t AblationVariant::sentences_changed() const {
  return static_cast<std::size_t>(std::count_if(
      removal_counts.begin(), removal_counts.end(),
      [](std::size_t c) { return c > 0; }));
}

AblationVariant Ablate(std::span<const std::string> corpus,
                       const FunctionWordSpec& word) {
  AblationVariant variant;
  variant.word = word;
  variant.sentences.reserve(corpus.size());
  variant.removal_counts.reserve(corpus.size());
  const std::string& needle = word.surface;
  for (const auto& sentence : corpus) {
    std::size_t count = 0;
    if (needle.empty() || sentence.find(needle) == std::string::npos) {
      variant.sentences.push_back(sentence);
      variant.removal_counts.push_back(0);
      continue;
    }
    std::string out;
    out.reserve(sentence.size());
    std::size_t pos = 0;
    while (true) {
      const std::size_t hit = sentence.find(needle, pos);
      if (hit == std::string::npos) break;
      out.append(sentence, pos, hit - pos);
      pos = hit + needle.size();
      ++count;
    }
    out.append(sentence, pos, std::string::npos);
    variant.sentences.push_back(std::move(out));
    variant.removal_counts.push_back(count);
  }
  return variant;
}

AblationReport RunAblation(std::span<const std::string> corpus,
                           std::span<const FunctionWordSpec> wordlist,
                           TranslationBackend& backend,
                           const AblationOptions& options) {
  if (corpus.empty()) throw Error("ablation corpus is empty");
  if (options.mode == ReferenceMode::kGold &&
      options.gold_references.size() != corpus.size()) {
    throw Error("gold mode needs one reference per corpus sentence");
  }

  AblationReport report;
  report.variants.reserve(wordlist.size());
  for (const auto& word : wordlist) {
    report.variants.push_back(Ablate(corpus, word));
  }

  const std::vector<std::string> baseline =
      TranslateOrThrow(backend, corpus, "baseline");
  const std::vector<std::string>& refs =
      options.mode == ReferenceMode::kGold ? options.gold_references : baseline;
  report.baseline = Evaluate(baseline, refs, options.bleu, options.chrf);

  for (const auto& variant : report.variants) {
    const auto translations = TranslateOrThrow(
        backend, variant.sentences, "variant '" + variant.word.surface + "'");
    const MetricReport scored =
        Evaluate(translations, refs, options.bleu, options.chrf);
    AblationRow row;
    row.word = variant.word;
    row.sentences_changed = variant.sentences_changed();
    row.bleu = scored.bleu;
    row.chrf = scored.chrf;
    row.bleu_delta = scored.bleu - report.baseline.bleu;
    row.chrf_delta = scored.chrf - report.baseline.chrf;
    report.rows.push_back(std::move(row));
  }
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const AblationRow& a, const AblationRow& b) {
                     return std::abs(a.bleu_delta) > std::abs(b.bleu_delta);
                   });
  return report;
}

std::string AblationReport::ToTsv() const {
  std::string out = "surface\tcategory\tsentences_changed\tbleu_delta\tchrf_delta\n";
  for (const auto& row : rows) {
    out += row.word.surface;
    out += '\t';
    out += CategoryName(row.word.category);
    out += '\t';
    out += std::to_string(row.sentences_changed);
    out += '\t';
    out += FormatDouble(row.bleu_delta);
    out += '\t';
    out += FormatDouble(row.chrf_delta);
    out += '\n';
  }
  return out;
}

std::string AblationReport::ToJson() const {
  nlohmann::ordered_json j;
  j["baseline"] = nlohmann::ordered_json::parse(baseline.ToJson());
  j["words"] = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    j["words"].push_back({{"surface", row.word.surface},
                          {"category", std::string(CategoryName(row.word.category))},
                          {"sentences_changed", row.sentences_changed},
                          {"bleu", row.bleu},
                          {"chrf", row.chrf},
                          {"bleu_delta", row.bleu_delta},
                          {"chrf_delta", row.chrf_delta}});
  }
  return j.dump(2);
}

}  // namespace dekit
