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

#ifndef DEKIT_METRICS_H_
#define DEKIT_METRICS_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dekit {

enum class BleuSmoothing {
  kNone,
  // An order with zero matches uses (0 + 1) / (total + 1).
  kAddOneOnZero,
};

struct BleuConfig {
  int max_order = 4;
  std::vector<double> weights;  // Empty means uniform 1/max_order.
  BleuSmoothing smoothing = BleuSmoothing::kAddOneOnZero;
  bool case_fold = true;

  std::vector<double> EffectiveWeights() const;
  void Validate() const;
};

struct ChrfConfig {
  int max_order = 6;
  double beta = 2.0;
  bool strip_whitespace = true;

  void Validate() const;
};

struct SentenceScore {
  double bleu = 0.0;
  double chrf = 0.0;
};

// Scores are on a 0-100 scale.
struct MetricReport {
  double bleu = 0.0;
  double chrf = 0.0;
  std::vector<double> precisions;  // Per n-gram order, after smoothing.
  double brevity_penalty = 1.0;
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;
  std::vector<SentenceScore> sentences;

  // {bleu, chrf, bp, precisions, hyp_len, ref_len, sentences:[{bleu, chrf}]}
  std::string ToJson() const;
};

// Lowercases ASCII when `case_fold`, splits on whitespace and emits every
// punctuation character as its own token.
std::vector<std::string> TokenizeTarget(std::string_view text, bool case_fold);

// Corpus BLEU with counts pooled over sentences and one reference per
// hypothesis. Fills bleu, precisions, brevity_penalty, lengths and the
// per-sentence bleu values. Throws on empty input or a length mismatch.
MetricReport CorpusBleu(std::span<const std::string> hyps,
                        std::span<const std::string> refs,
                        const BleuConfig& config = {});

// Corpus chrF over pooled character n-gram statistics. Fills chrf and the
// per-sentence chrf values.
MetricReport CorpusChrf(std::span<const std::string> hyps,
                        std::span<const std::string> refs,
                        const ChrfConfig& config = {});

// Both metrics in one report.
MetricReport Evaluate(std::span<const std::string> hyps,
                      std::span<const std::string> refs,
                      const BleuConfig& bleu = {}, const ChrfConfig& chrf = {});

double SentenceBleu(std::string_view hyp, std::string_view ref,
                    const BleuConfig& config = {});
double SentenceChrf(std::string_view hyp, std::string_view ref,
                    const ChrfConfig& config = {});

}  // namespace dekit

#endif  // DEKIT_METRICS_H_
