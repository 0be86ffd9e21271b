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

#ifndef DEKIT_ABLATION_H_
#define DEKIT_ABLATION_H_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dekit/metrics.h"
#include "dekit/mt_client.h"

namespace dekit {

enum class WordCategory { kPreposition, kConjunction, kParticle, kModal };

std::string_view CategoryName(WordCategory c);
std::optional<WordCategory> ParseCategory(std::string_view name);

struct FunctionWordSpec {
  std::string surface;
  WordCategory category = WordCategory::kParticle;

  bool operator==(const FunctionWordSpec&) const = default;
};

// `surface<TAB>category` per line, file order preserved. `#` comments and
// blank lines are skipped. Rejects unknown categories and duplicates.
std::vector<FunctionWordSpec> LoadWordlist(const std::filesystem::path& path);
std::vector<FunctionWordSpec> ParseWordlist(
    std::istream& in, std::string_view source_name = "<input>");

std::filesystem::path DefaultWordlistPath();

struct AblationVariant {
  FunctionWordSpec word;
  std::vector<std::string> sentences;
  std::vector<std::size_t> removal_counts;

  std::size_t sentences_changed() const;
};

// Deletes every occurrence of word.surface from each sentence (raw
// substring match, left to right, non-overlapping). Sentences without the
// word are returned untouched.
AblationVariant Ablate(std::span<const std::string> corpus,
                       const FunctionWordSpec& word);

enum class ReferenceMode {
  // Variant translations are scored against the baseline translations.
  kBaseline,
  // Baseline and variant translations are both scored against gold
  // references; deltas are variant minus baseline.
  kGold,
};

struct AblationOptions {
  ReferenceMode mode = ReferenceMode::kBaseline;
  std::vector<std::string> gold_references;  // Required in kGold mode.
  BleuConfig bleu;
  ChrfConfig chrf;
};

struct AblationRow {
  FunctionWordSpec word;
  std::size_t sentences_changed = 0;
  double bleu = 0.0;
  double chrf = 0.0;
  double bleu_delta = 0.0;  // Variant score minus baseline score.
  double chrf_delta = 0.0;
};

struct AblationReport {
  MetricReport baseline;
  // Sorted by |bleu_delta| descending; ties keep wordlist order.
  std::vector<AblationRow> rows;
  // One per wordlist entry, in wordlist order.
  std::vector<AblationVariant> variants;

  // Header line then one row per word:
  // surface category sentences_changed bleu_delta chrf_delta
  std::string ToTsv() const;
  std::string ToJson() const;
};

// Translates the corpus once and every variant once, then scores each
// variant. Any backend failure aborts the whole run with an error naming
// the variant (or "baseline").
AblationReport RunAblation(std::span<const std::string> corpus,
                           std::span<const FunctionWordSpec> wordlist,
                           TranslationBackend& backend,
                           const AblationOptions& options = {});

}  // namespace dekit

#endif  // DEKIT_ABLATION_H_
