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

#ifndef DEKIT_PIPELINE_H_
#define DEKIT_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "dekit/corpus_io.h"
#include "dekit/lexicon.h"
#include "dekit/mt_client.h"

namespace dekit {

// Files written to an experiment output directory. The directory doubles
// as a review session for the annotation service.
namespace session_files {
inline constexpr std::string_view kSource = "source.tsv";
inline constexpr std::string_view kBaselineTranslations =
    "baseline_translations.tsv";
inline constexpr std::string_view kCandidates = "candidates.jsonl";
inline constexpr std::string_view kModifiedSource = "modified_source.tsv";
inline constexpr std::string_view kModifiedTranslations =
    "modified_translations.tsv";
inline constexpr std::string_view kComparison = "comparison.tsv";
inline constexpr std::string_view kTuningCorpus = "tuning_corpus.tsv";
inline constexpr std::string_view kTuningTrain = "tuning_train.tsv";
inline constexpr std::string_view kTuningDev = "tuning_dev.tsv";
inline constexpr std::string_view kStats = "stats.json";
inline constexpr std::string_view kSession = "session.json";
inline constexpr std::string_view kDecisions = "decisions.jsonl";
inline constexpr std::string_view kPartialSuffix = ".partial";
}  // namespace session_files

struct ExperimentStats {
  std::size_t total_titles = 0;
  std::size_t titles_with_candidates = 0;
  std::size_t titles_improved = 0;
  std::size_t titles_regressed = 0;
  std::size_t titles_unchanged = 0;
  double mean_bleu_delta = 0.0;
  double mean_chrf_delta = 0.0;

  // Fixed key order: total_titles, titles_with_candidates, titles_improved,
  // titles_regressed, titles_unchanged, mean_bleu_delta, mean_chrf_delta.
  std::string ToJson() const;
};

struct ExperimentOptions {
  std::filesystem::path titles_path;
  // Defaults to the built-in policy.
  std::optional<std::filesystem::path> policy_path;
  // When set, only candidates whose live decision is "accept" are applied;
  // otherwise the policy's automatic insertion applies.
  std::optional<std::filesystem::path> annotations_path;
  std::filesystem::path out_dir;
  std::uint64_t seed = 1;
  // When > 0, the tuning corpus is additionally split into dev/train.
  std::size_t dev_size = 0;
  // Sentence chrF delta (points) beyond which a title counts as improved
  // or regressed.
  double verdict_threshold = 1.0;
};

// One title per line, optionally `title<TAB>reference`. Ids are 1-based
// line numbers among non-blank lines.
Corpus LoadTitles(const std::filesystem::path& path);

// Baseline translation, particle insertion, modified translation, scoring
// and export. Every output is first written as <name>.partial and renamed
// once the whole run succeeds; a failing stage aborts with its name.
ExperimentStats RunExperiment(const ExperimentOptions& options,
                              const Lexicon& lexicon,
                              TranslationBackend& backend);

}  // namespace dekit

#endif  // DEKIT_PIPELINE_H_
