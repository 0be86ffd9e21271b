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

#include "dekit/pipeline.h"

#include <cstdio>
#include <functional>
#include <set>

#include "json.hpp"

#include "dekit/annotations.h"
#include "dekit/de_inserter.h"
#include "dekit/error.h"
#include "dekit/metrics.h"
#include "dekit/segmenter.h"

namespace dekit {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr std::string_view kCreatedBy = "dekit run-experiment";

std::string Fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  if (std::string_view(buf) == "-0.000000") return "0.000000";
  return buf;
}

std::string Fnv1aHex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

// Writes <name>.partial files and renames them all on Commit().
class OutputTree {
 public:
  explicit OutputTree(fs::path dir) : dir_(std::move(dir)) {
    fs::create_directories(dir_);
  }

  // Clears final and partial outputs left by earlier runs.
  void Clear(std::initializer_list<std::string_view> names) {
    for (std::string_view name : names) {
      fs::remove(dir_ / name);
      fs::remove(Partial(name));
    }
  }

  void Write(std::string_view name, std::string_view content) {
    WriteFile(Partial(name), content);
    written_.emplace_back(name);
  }

  void Commit() {
    for (const auto& name : written_) fs::rename(Partial(name), dir_ / name);
    written_.clear();
  }

 private:
  fs::path Partial(std::string_view name) const {
    return dir_ / (std::string(name) + std::string(session_files::kPartialSuffix));
  }

  fs::path dir_;
  std::vector<std::string> written_;
};

template <typename F>
auto RunStage(std::string_view stage, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const std::exception& e) {
    throw Error("stage " + std::string(stage) + " failed: " + e.what());
  }
}

struct TitleResult {
  std::string modified;
  std::vector<InsertionCandidate> candidates;
  std::size_t applied = 0;
  std::string baseline_translation;
  std::string modified_translation;
  double bleu_delta = 0.0;
  double chrf_delta = 0.0;
  std::string verdict = "unchanged";
};

}  // namespace

std::string ExperimentStats::ToJson() const {
  json j;
  j["total_titles"] = total_titles;
  j["titles_with_candidates"] = titles_with_candidates;
  j["titles_improved"] = titles_improved;
  j["titles_regressed"] = titles_regressed;
  j["titles_unchanged"] = titles_unchanged;
  j["mean_bleu_delta"] = mean_bleu_delta;
  j["mean_chrf_delta"] = mean_chrf_delta;
  return j.dump(2) + "\n";
}

Corpus LoadTitles(const fs::path& path) {
  Corpus corpus;
  std::size_t id = 0;
  for (const auto& line : ReadLines(path)) {
    ParallelPair pair;
    pair.id = std::to_string(++id);
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      pair.source = line;
    } else {
      if (line.find('\t', tab + 1) != std::string::npos) {
        throw Error("expected title[<TAB>reference] on title " + pair.id +
                    " of " + path.string());
      }
      pair.source = line.substr(0, tab);
      pair.target = line.substr(tab + 1);
    }
    if (pair.source.empty()) {
      throw Error("empty title " + pair.id + " in " + path.string());
    }
    corpus.pairs.push_back(std::move(pair));
  }
  if (corpus.pairs.empty()) throw Error("no titles in " + path.string());
  return corpus;
}

ExperimentStats RunExperiment(const ExperimentOptions& options,
                              const Lexicon& lexicon,
                              TranslationBackend& backend) {
  namespace sf = session_files;
  OutputTree out(options.out_dir);
  out.Clear({sf::kSource, sf::kBaselineTranslations, sf::kCandidates,
             sf::kModifiedSource, sf::kModifiedTranslations, sf::kComparison,
             sf::kTuningCorpus, sf::kTuningTrain, sf::kTuningDev, sf::kStats,
             sf::kSession});

  // load
  Corpus titles;
  InsertionPolicy policy;
  std::string policy_hash = "builtin";
  std::optional<std::map<std::string, Decision>> live;
  RunStage("load", [&] {
    titles = LoadTitles(options.titles_path);
    if (options.policy_path) {
      policy = InsertionPolicy::Load(*options.policy_path, lexicon.tagset());
      policy_hash = Fnv1aHex(ReadFile(*options.policy_path));
    } else {
      policy = InsertionPolicy::Default(lexicon.tagset());
    }
    if (options.annotations_path) {
      if (!fs::exists(*options.annotations_path)) {
        throw Error("annotations file " + options.annotations_path->string() +
                    " not found");
      }
      live = LiveDecisions(LoadDecisions(*options.annotations_path));
    }
    titles.SetHeader("created_by", std::string(kCreatedBy));
    titles.SetHeader("policy_hash", policy_hash);
    titles.SetHeader("backend_id", backend.id());
    out.Write(sf::kSource, FormatTsv(titles));
    json session;
    session["particle"] = policy.particle;
    session["policy_hash"] = policy_hash;
    session["backend_id"] = backend.id();
    session["seed"] = options.seed;
    out.Write(sf::kSession, session.dump(2) + "\n");
  });
  const auto header = titles.header;
  const std::vector<std::string> sources = titles.sources();
  std::vector<TitleResult> results(titles.pairs.size());

  RunStage("baseline-translate", [&] {
    const auto translations = backend.Translate(sources);
    Corpus c;
    c.header = header;
    for (std::size_t i = 0; i < titles.pairs.size(); ++i) {
      results[i].baseline_translation = translations[i];
      c.pairs.push_back({titles.pairs[i].id, sources[i], translations[i],
                         Provenance::kTranslated, {}});
    }
    out.Write(sf::kBaselineTranslations, FormatTsv(c));
  });

  RunStage("insert", [&] {
    std::set<std::string> known_keys;
    std::string candidates_jsonl;
    Corpus modified;
    modified.header = header;
    for (std::size_t i = 0; i < titles.pairs.size(); ++i) {
      const auto& pair = titles.pairs[i];
      TitleResult& r = results[i];
      if (live) {
        r.candidates = FindCandidates(SegmentAndTag(pair.source, lexicon),
                                      policy, lexicon, pair.id);
        std::vector<InsertionCandidate> accepted;
        for (auto& c : r.candidates) {
          known_keys.insert(c.key());
          auto it = live->find(c.key());
          if (it == live->end()) continue;
          c.status = it->second == Decision::kAccept
                         ? CandidateStatus::kAccepted
                         : CandidateStatus::kRejected;
          if (c.status == CandidateStatus::kAccepted) accepted.push_back(c);
        }
        r.applied = accepted.size();
        r.modified = ApplyInsertions(pair.source, accepted, policy.particle);
      } else {
        AutoInsertResult auto_result =
            AutoInsert(pair.source, lexicon, policy, pair.id);
        r.applied = auto_result.applied();
        r.modified = std::move(auto_result.text);
        r.candidates = std::move(auto_result.candidates);
      }
      for (const auto& c : r.candidates) {
        candidates_jsonl += CandidateToJson(c, pair.source);
        candidates_jsonl += '\n';
      }
      modified.pairs.push_back({pair.id, r.modified, pair.target,
                                r.applied > 0 ? Provenance::kDeModified
                                              : Provenance::kOriginal,
                                {}});
    }
    if (live) {
      for (const auto& [key, decision] : *live) {
        if (!known_keys.contains(key)) {
          throw Error("annotation references unknown candidate " + key);
        }
      }
    }
    out.Write(sf::kCandidates, candidates_jsonl);
    out.Write(sf::kModifiedSource, FormatTsv(modified));
  });

  RunStage("modified-translate", [&] {
    std::vector<std::string> changed;
    std::vector<std::size_t> changed_index;
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (results[i].applied > 0) {
        changed.push_back(results[i].modified);
        changed_index.push_back(i);
      } else {
        // Unmodified titles reuse the baseline translation verbatim.
        results[i].modified_translation = results[i].baseline_translation;
      }
    }
    if (!changed.empty()) {
      const auto translations = backend.Translate(changed);
      for (std::size_t k = 0; k < changed.size(); ++k) {
        results[changed_index[k]].modified_translation = translations[k];
      }
    }
    Corpus c;
    c.header = header;
    for (std::size_t i = 0; i < results.size(); ++i) {
      c.pairs.push_back({titles.pairs[i].id, results[i].modified,
                         results[i].modified_translation,
                         Provenance::kTranslated, {}});
    }
    out.Write(sf::kModifiedTranslations, FormatTsv(c));
  });

  ExperimentStats stats;
  RunStage("score", [&] {
    stats.total_titles = results.size();
    double bleu_sum = 0.0;
    double chrf_sum = 0.0;
    std::string comparison =
        "id\tsource\tmodified_source\tinsertions\tbaseline_translation\t"
        "modified_translation\tbleu_delta\tchrf_delta\tverdict\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
      TitleResult& r = results[i];
      const auto& pair = titles.pairs[i];
      if (!r.candidates.empty()) ++stats.titles_with_candidates;
      if (!pair.target.empty()) {
        r.bleu_delta = SentenceBleu(r.modified_translation, pair.target) -
                       SentenceBleu(r.baseline_translation, pair.target);
        r.chrf_delta = SentenceChrf(r.modified_translation, pair.target) -
                       SentenceChrf(r.baseline_translation, pair.target);
      }
      if (r.chrf_delta > options.verdict_threshold) {
        r.verdict = "improved";
        ++stats.titles_improved;
      } else if (r.chrf_delta < -options.verdict_threshold) {
        r.verdict = "regressed";
        ++stats.titles_regressed;
      } else {
        ++stats.titles_unchanged;
      }
      bleu_sum += r.bleu_delta;
      chrf_sum += r.chrf_delta;
      comparison += EscapeField(pair.id) + '\t' + EscapeField(pair.source) +
                    '\t' + EscapeField(r.modified) + '\t' +
                    std::to_string(r.applied) + '\t' +
                    EscapeField(r.baseline_translation) + '\t' +
                    EscapeField(r.modified_translation) + '\t' +
                    Fixed(r.bleu_delta) + '\t' + Fixed(r.chrf_delta) + '\t' +
                    r.verdict + '\n';
    }
    stats.mean_bleu_delta = bleu_sum / static_cast<double>(results.size());
    stats.mean_chrf_delta = chrf_sum / static_cast<double>(results.size());
    out.Write(sf::kComparison, comparison);
  });

  RunStage("export", [&] {
    Corpus tuning;
    tuning.header = header;
    tuning.SetHeader("seed", std::to_string(options.seed));
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (results[i].applied == 0) continue;
      const auto& pair = titles.pairs[i];
      tuning.pairs.push_back({pair.id,
                              pair.source,
                              results[i].modified_translation,
                              Provenance::kDeModified,
                              {{"modified_source", results[i].modified}}});
    }
    out.Write(sf::kTuningCorpus, FormatTsv(tuning));
    if (options.dev_size > 0) {
      const std::size_t sizes[] = {
          std::min(options.dev_size, tuning.pairs.size())};
      const auto parts = Split(tuning, sizes, options.seed);
      out.Write(sf::kTuningDev, FormatTsv(parts[0]));
      out.Write(sf::kTuningTrain, FormatTsv(parts[1]));
    }
    out.Write(sf::kStats, stats.ToJson());
    out.Commit();
  });
  return stats;
}

}  // namespace dekit
