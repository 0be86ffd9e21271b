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

#include "dekit/metrics.h"

#include <cmath>
#include <map>
#include <numeric>

#include "json.hpp"

#include "dekit/error.h"
#include "dekit/utf8.h"

namespace dekit {
namespace {

struct BleuStats {
  std::vector<std::size_t> matches;
  std::vector<std::size_t> totals;
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;

  explicit BleuStats(int order) : matches(order, 0), totals(order, 0) {}

  void Add(const BleuStats& other) {
    for (std::size_t n = 0; n < matches.size(); ++n) {
      matches[n] += other.matches[n];
      totals[n] += other.totals[n];
    }
    hyp_len += other.hyp_len;
    ref_len += other.ref_len;
  }
};

template <typename T>
std::map<std::vector<T>, std::size_t> CountNgrams(const std::vector<T>& seq,
                                                  std::size_t n) {
  std::map<std::vector<T>, std::size_t> counts;
  if (seq.size() < n) return counts;
  for (std::size_t i = 0; i + n <= seq.size(); ++i) {
    ++counts[std::vector<T>(seq.begin() + i, seq.begin() + i + n)];
  }
  return counts;
}

// Clipped matches of hyp n-grams against ref n-grams.
template <typename T>
std::size_t ClippedMatches(const std::map<std::vector<T>, std::size_t>& hyp,
                           const std::map<std::vector<T>, std::size_t>& ref) {
  std::size_t matches = 0;
  for (const auto& [gram, count] : hyp) {
    auto it = ref.find(gram);
    if (it != ref.end()) matches += std::min(count, it->second);
  }
  return matches;
}

BleuStats SentenceBleuStats(std::string_view hyp, std::string_view ref,
                            const BleuConfig& config) {
  const auto hyp_tokens = TokenizeTarget(hyp, config.case_fold);
  const auto ref_tokens = TokenizeTarget(ref, config.case_fold);
  BleuStats stats(config.max_order);
  stats.hyp_len = hyp_tokens.size();
  stats.ref_len = ref_tokens.size();
  for (int n = 1; n <= config.max_order; ++n) {
    const auto h = CountNgrams(hyp_tokens, n);
    const auto r = CountNgrams(ref_tokens, n);
    stats.matches[n - 1] = ClippedMatches(h, r);
    stats.totals[n - 1] =
        hyp_tokens.size() >= static_cast<std::size_t>(n)
            ? hyp_tokens.size() - n + 1
            : 0;
  }
  return stats;
}

double BrevityPenalty(std::size_t hyp_len, std::size_t ref_len) {
  if (hyp_len > ref_len) return 1.0;
  // An empty hypothesis against an empty reference is not penalized; an
  // empty hypothesis against a non-empty one scores zero regardless.
  if (hyp_len == 0) return ref_len == 0 ? 1.0 : 0.0;
  return std::exp(1.0 - static_cast<double>(ref_len) /
                            static_cast<double>(hyp_len));
}

// Fills precisions/bp/bleu from pooled statistics.
void FinishBleu(const BleuStats& stats, const BleuConfig& config,
                MetricReport* report) {
  const auto weights = config.EffectiveWeights();
  report->precisions.assign(config.max_order, 0.0);
  double log_sum = 0.0;
  bool zero = false;
  for (int n = 0; n < config.max_order; ++n) {
    double num = static_cast<double>(stats.matches[n]);
    double den = static_cast<double>(stats.totals[n]);
    if (stats.matches[n] == 0 &&
        config.smoothing == BleuSmoothing::kAddOneOnZero) {
      num += 1.0;
      den += 1.0;
    }
    const double p = den > 0.0 ? num / den : 0.0;
    report->precisions[n] = p;
    if (weights[n] == 0.0) continue;
    if (p <= 0.0) {
      zero = true;
    } else {
      log_sum += weights[n] * std::log(p);
    }
  }
  report->hyp_len = stats.hyp_len;
  report->ref_len = stats.ref_len;
  report->brevity_penalty = BrevityPenalty(stats.hyp_len, stats.ref_len);
  report->bleu =
      zero ? 0.0 : 100.0 * report->brevity_penalty * std::exp(log_sum);
  report->bleu = std::clamp(report->bleu, 0.0, 100.0);
}

std::vector<char32_t> ChrfChars(std::string_view text,
                                const ChrfConfig& config) {
  std::vector<char32_t> chars = utf8::Decode(text);
  if (config.strip_whitespace) {
    std::erase_if(chars, [](char32_t cp) { return utf8::IsWhitespace(cp); });
  }
  return chars;
}

struct ChrfStats {
  std::vector<std::size_t> matches;
  std::vector<std::size_t> hyp_totals;
  std::vector<std::size_t> ref_totals;

  explicit ChrfStats(int order)
      : matches(order, 0), hyp_totals(order, 0), ref_totals(order, 0) {}

  void Add(const ChrfStats& other) {
    for (std::size_t n = 0; n < matches.size(); ++n) {
      matches[n] += other.matches[n];
      hyp_totals[n] += other.hyp_totals[n];
      ref_totals[n] += other.ref_totals[n];
    }
  }
};

ChrfStats SentenceChrfStats(std::string_view hyp, std::string_view ref,
                            const ChrfConfig& config) {
  const auto h = ChrfChars(hyp, config);
  const auto r = ChrfChars(ref, config);
  ChrfStats stats(config.max_order);
  for (int n = 1; n <= config.max_order; ++n) {
    const auto hc = CountNgrams(h, n);
    const auto rc = CountNgrams(r, n);
    stats.matches[n - 1] = ClippedMatches(hc, rc);
    stats.hyp_totals[n - 1] = h.size() >= static_cast<std::size_t>(n)
                                  ? h.size() - n + 1
                                  : 0;
    stats.ref_totals[n - 1] = r.size() >= static_cast<std::size_t>(n)
                                  ? r.size() - n + 1
                                  : 0;
  }
  return stats;
}

double ChrfFromStats(const ChrfStats& stats, const ChrfConfig& config) {
  double precision = 0.0;
  double recall = 0.0;
  int orders = 0;
  for (std::size_t n = 0; n < stats.matches.size(); ++n) {
    const auto h = stats.hyp_totals[n];
    const auto r = stats.ref_totals[n];
    if (h == 0 && r == 0) continue;
    ++orders;
    const double m = static_cast<double>(stats.matches[n]);
    if (h > 0) precision += m / static_cast<double>(h);
    if (r > 0) recall += m / static_cast<double>(r);
  }
  if (orders == 0) return 0.0;
  precision /= orders;
  recall /= orders;
  const double beta2 = config.beta * config.beta;
  const double denom = beta2 * precision + recall;
  if (denom <= 0.0) return 0.0;
  return std::clamp(100.0 * (1.0 + beta2) * precision * recall / denom, 0.0,
                    100.0);
}

void CheckInputs(std::span<const std::string> hyps,
                 std::span<const std::string> refs) {
  if (hyps.size() != refs.size()) {
    throw Error("hypothesis/reference count mismatch: " +
                std::to_string(hyps.size()) + " vs " +
                std::to_string(refs.size()));
  }
  if (hyps.empty()) throw Error("cannot score an empty corpus");
}

}  // namespace

std::vector<double> BleuConfig::EffectiveWeights() const {
  if (!weights.empty()) return weights;
  return std::vector<double>(max_order, 1.0 / max_order);
}

void BleuConfig::Validate() const {
  if (max_order < 1) throw Error("BLEU max_order must be >= 1");
  const auto w = EffectiveWeights();
  if (w.size() != static_cast<std::size_t>(max_order)) {
    throw Error("BLEU weights must have max_order entries");
  }
  double sum = 0.0;
  for (double x : w) {
    if (x < 0.0) throw Error("BLEU weights must be non-negative");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw Error("BLEU weights must sum to 1");
}

void ChrfConfig::Validate() const {
  if (max_order < 1) throw Error("chrF max_order must be >= 1");
  if (!(beta > 0.0)) throw Error("chrF beta must be positive");
}

std::vector<std::string> TokenizeTarget(std::string_view text,
                                        bool case_fold) {
  std::vector<std::string> tokens;
  std::string current;
  const auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t len;
    char32_t cp = utf8::DecodeAt(text, pos, &len);
    if (utf8::IsWhitespace(cp)) {
      flush();
    } else if (utf8::IsPunctuation(cp)) {
      flush();
      tokens.emplace_back(text.substr(pos, len));
    } else {
      if (case_fold && cp >= 'A' && cp <= 'Z') {
        current.push_back(static_cast<char>(cp - 'A' + 'a'));
      } else {
        current.append(text.substr(pos, len));
      }
    }
    pos += len;
  }
  flush();
  return tokens;
}

MetricReport CorpusBleu(std::span<const std::string> hyps,
                        std::span<const std::string> refs,
                        const BleuConfig& config) {
  CheckInputs(hyps, refs);
  config.Validate();
  MetricReport report;
  BleuStats total(config.max_order);
  report.sentences.resize(hyps.size());
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    const BleuStats s = SentenceBleuStats(hyps[i], refs[i], config);
    MetricReport sentence;
    FinishBleu(s, config, &sentence);
    report.sentences[i].bleu = sentence.bleu;
    total.Add(s);
  }
  FinishBleu(total, config, &report);
  return report;
}

MetricReport CorpusChrf(std::span<const std::string> hyps,
                        std::span<const std::string> refs,
                        const ChrfConfig& config) {
  CheckInputs(hyps, refs);
  config.Validate();
  MetricReport report;
  ChrfStats total(config.max_order);
  report.sentences.resize(hyps.size());
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    const ChrfStats s = SentenceChrfStats(hyps[i], refs[i], config);
    report.sentences[i].chrf = ChrfFromStats(s, config);
    total.Add(s);
  }
  report.chrf = ChrfFromStats(total, config);
  return report;
}

MetricReport Evaluate(std::span<const std::string> hyps,
                      std::span<const std::string> refs,
                      const BleuConfig& bleu, const ChrfConfig& chrf) {
  MetricReport report = CorpusBleu(hyps, refs, bleu);
  const MetricReport c = CorpusChrf(hyps, refs, chrf);
  report.chrf = c.chrf;
  for (std::size_t i = 0; i < report.sentences.size(); ++i) {
    report.sentences[i].chrf = c.sentences[i].chrf;
  }
  return report;
}

double SentenceBleu(std::string_view hyp, std::string_view ref,
                    const BleuConfig& config) {
  config.Validate();
  MetricReport report;
  FinishBleu(SentenceBleuStats(hyp, ref, config), config, &report);
  return report.bleu;
}

double SentenceChrf(std::string_view hyp, std::string_view ref,
                    const ChrfConfig& config) {
  config.Validate();
  return ChrfFromStats(SentenceChrfStats(hyp, ref, config), config);
}

std::string MetricReport::ToJson() const {
  nlohmann::ordered_json j;
  j["bleu"] = bleu;
  j["chrf"] = chrf;
  j["bp"] = brevity_penalty;
  j["precisions"] = precisions;
  j["hyp_len"] = hyp_len;
  j["ref_len"] = ref_len;
  j["sentences"] = nlohmann::ordered_json::array();
  for (const auto& s : sentences) {
    j["sentences"].push_back({{"bleu", s.bleu}, {"chrf", s.chrf}});
  }
  return j.dump();
}

}  // namespace dekit
