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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include "json.hpp"

#include "dekit/error.h"
#include "oracles/metrics_oracle.h"
#include "test_util.h"

namespace dekit {
namespace {

using Strings = std::vector<std::string>;

// Values frozen from tests/oracles/metrics_golden.py.
constexpr double kGoldenBleu = 52.773414324640;
constexpr double kGoldenBleuCased = 33.613005617635;
constexpr double kGoldenChrf = 72.330168294422;
constexpr double kGoldenChrfBeta1 = 71.097955609967;
constexpr double kGoldenSentence[10][2] = {
    {42.044820762686, 64.577942062529}, {86.687789975018, 88.963414657617},
    {75.983568565159, 81.185768258861}, {23.450008106204, 66.577743220273},
    {77.880078307140, 85.075908374013}, {61.478815295126, 67.690454839501},
    {45.914976933229, 64.854908549563}, {1.831563888873, 19.157892951684},
    {26.591479484725, 70.604809091985}, {36.720562698936, 84.129443684946},
};

void LoadGolden(Strings* hyps, Strings* refs) {
  std::ifstream in(testing::TestsDir() / "data" / "metrics_golden.tsv");
  std::string line;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    hyps->push_back(line.substr(0, tab));
    refs->push_back(line.substr(tab + 1));
  }
}

TEST(MetricsTest, Tokenize) {
  EXPECT_EQ(TokenizeTarget("Students' questions.", true),
            (Strings{"students", "'", "questions", "."}));
  EXPECT_TRUE(TokenizeTarget("", true).empty());
  EXPECT_EQ(TokenizeTarget("A  B", true), (Strings{"a", "b"}));
  EXPECT_EQ(TokenizeTarget("A  B", false), (Strings{"A", "B"}));
  EXPECT_EQ(TokenizeTarget("x,y", true), (Strings{"x", ",", "y"}));
}

TEST(MetricsTest, CatOnTheMat) {
  const Strings hyps = {"the cat sat on the mat"};
  const Strings refs = {"the cat is on the mat"};
  const auto r = CorpusBleu(hyps, refs);
  ASSERT_EQ(r.precisions.size(), 4u);
  EXPECT_DOUBLE_EQ(r.precisions[0], 5.0 / 6.0);
  EXPECT_DOUBLE_EQ(r.precisions[1], 3.0 / 5.0);
  EXPECT_DOUBLE_EQ(r.precisions[2], 1.0 / 4.0);
  EXPECT_DOUBLE_EQ(r.precisions[3], 1.0 / 4.0);
  EXPECT_EQ(r.brevity_penalty, 1.0);
  EXPECT_NEAR(r.bleu, 100.0 * std::pow(5.0 / 6 * 3.0 / 5 * 0.25 * 0.25, 0.25),
              1e-9);
}

TEST(MetricsTest, ChrfHandCount) {
  ChrfConfig config;
  config.max_order = 2;
  const Strings hyps = {"abcd"};
  const Strings refs = {"abce"};
  EXPECT_NEAR(CorpusChrf(hyps, refs, config).chrf, 100.0 * 17.0 / 24.0, 1e-9);
}

TEST(MetricsTest, IdentityIsExactlyHundred) {
  const Strings text = {"a b c d e", "Students' questions.", "x"};
  const auto r = Evaluate(text, text);
  EXPECT_EQ(r.bleu, 100.0);
  EXPECT_EQ(r.chrf, 100.0);
  for (const auto& s : r.sentences) {
    EXPECT_EQ(s.bleu, 100.0);
    EXPECT_EQ(s.chrf, 100.0);
  }
}

TEST(MetricsTest, DisjointIsZero) {
  BleuConfig unsmoothed;
  unsmoothed.smoothing = BleuSmoothing::kNone;
  const Strings hyps = {"aaa bbb"};
  const Strings refs = {"xyz"};
  EXPECT_EQ(CorpusBleu(hyps, refs, unsmoothed).bleu, 0.0);
  EXPECT_EQ(CorpusChrf(hyps, refs).chrf, 0.0);
}

TEST(MetricsTest, BrevityPenalty) {
  const Strings hyps = {"the cat"};
  const Strings refs = {"the cat sat down"};
  const auto r = CorpusBleu(hyps, refs);
  EXPECT_EQ(r.hyp_len, 2u);
  EXPECT_EQ(r.ref_len, 4u);
  EXPECT_DOUBLE_EQ(r.brevity_penalty, std::exp(1.0 - 4.0 / 2.0));
  const Strings empty = {""};
  EXPECT_EQ(CorpusBleu(empty, refs).bleu, 0.0);
}

TEST(MetricsTest, LongerReferenceNeverRaisesBp) {
  const Strings hyps = {"one two three"};
  double last = 2.0;
  std::string ref = "one two";
  for (int i = 0; i < 6; ++i) {
    const Strings refs = {ref};
    const double bp = CorpusBleu(hyps, refs).brevity_penalty;
    EXPECT_LE(bp, last);
    last = bp;
    ref += " pad";
  }
}

TEST(MetricsTest, Errors) {
  const Strings one = {"a"};
  const Strings two = {"a", "b"};
  const Strings none;
  EXPECT_THROW(CorpusBleu(one, two), Error);
  EXPECT_THROW(CorpusChrf(one, two), Error);
  EXPECT_THROW(CorpusBleu(none, none), Error);
  BleuConfig bad;
  bad.weights = {0.5, 0.6, 0.0, 0.0};
  EXPECT_THROW(CorpusBleu(one, one, bad), Error);
  ChrfConfig bad_chrf;
  bad_chrf.beta = 0.0;
  EXPECT_THROW(CorpusChrf(one, one, bad_chrf), Error);
}

TEST(MetricsTest, GoldenCorpusMatchesFrozenOracle) {
  Strings hyps, refs;
  LoadGolden(&hyps, &refs);
  ASSERT_EQ(hyps.size(), 10u);
  const auto r = Evaluate(hyps, refs);
  EXPECT_NEAR(r.bleu, kGoldenBleu, 1e-6);
  EXPECT_NEAR(r.chrf, kGoldenChrf, 1e-6);
  BleuConfig cased;
  cased.case_fold = false;
  EXPECT_NEAR(CorpusBleu(hyps, refs, cased).bleu, kGoldenBleuCased, 1e-6);
  ChrfConfig beta1;
  beta1.beta = 1.0;
  EXPECT_NEAR(CorpusChrf(hyps, refs, beta1).chrf, kGoldenChrfBeta1, 1e-6);
  ASSERT_EQ(r.sentences.size(), 10u);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_NEAR(r.sentences[i].bleu, kGoldenSentence[i][0], 1e-6) << i;
    EXPECT_NEAR(r.sentences[i].chrf, kGoldenSentence[i][1], 1e-6) << i;
  }
}

TEST(MetricsTest, GoldenCorpusMatchesBruteForce) {
  Strings hyps, refs;
  LoadGolden(&hyps, &refs);
  EXPECT_NEAR(CorpusBleu(hyps, refs).bleu, oracle::BruteBleu(hyps, refs),
              1e-6);
  EXPECT_NEAR(CorpusChrf(hyps, refs).chrf, oracle::BruteChrf(hyps, refs),
              1e-6);
  BleuConfig unsmoothed;
  unsmoothed.smoothing = BleuSmoothing::kNone;
  EXPECT_NEAR(CorpusBleu(hyps, refs, unsmoothed).bleu,
              oracle::BruteBleu(hyps, refs, 4, false), 1e-6);
}

TEST(MetricsTest, RandomCorporaMatchBruteForce) {
  std::mt19937 rng(5);
  const char* vocab[] = {"a", "b", "c", "the", "cat", ",", "."};
  auto sentence = [&] {
    std::string s;
    const int n = static_cast<int>(rng() % 8);
    for (int i = 0; i < n; ++i) {
      if (i > 0) s += ' ';
      s += vocab[rng() % 7];
    }
    return s;
  };
  for (int trial = 0; trial < 200; ++trial) {
    Strings hyps, refs;
    const int n = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) {
      hyps.push_back(sentence());
      refs.push_back(sentence());
    }
    const auto r = Evaluate(hyps, refs);
    EXPECT_NEAR(r.bleu, oracle::BruteBleu(hyps, refs), 1e-6);
    EXPECT_NEAR(r.chrf, oracle::BruteChrf(hyps, refs), 1e-6);
    EXPECT_GE(r.bleu, 0.0);
    EXPECT_LE(r.bleu, 100.0);
    EXPECT_GE(r.chrf, 0.0);
    EXPECT_LE(r.chrf, 100.0);
  }
}

TEST(MetricsTest, PermutationStable) {
  Strings hyps, refs;
  LoadGolden(&hyps, &refs);
  const auto base = Evaluate(hyps, refs);
  std::vector<std::size_t> order(hyps.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937 rng(9);
  std::shuffle(order.begin(), order.end(), rng);
  Strings h2, r2;
  for (auto i : order) {
    h2.push_back(hyps[i]);
    r2.push_back(refs[i]);
  }
  const auto shuffled = Evaluate(h2, r2);
  EXPECT_NEAR(shuffled.bleu, base.bleu, 1e-9);
  EXPECT_NEAR(shuffled.chrf, base.chrf, 1e-9);
}

TEST(MetricsTest, ChrfIgnoresWhitespaceByDefault) {
  EXPECT_EQ(SentenceChrf("a b c", "abc"), 100.0);
  ChrfConfig keep;
  keep.strip_whitespace = false;
  EXPECT_LT(SentenceChrf("a b c", "abc", keep), 100.0);
}

TEST(MetricsTest, ReportJsonSchema) {
  const Strings text = {"a b"};
  const auto j = nlohmann::json::parse(Evaluate(text, text).ToJson());
  for (const char* key :
       {"bleu", "chrf", "bp", "precisions", "hyp_len", "ref_len", "sentences"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["sentences"][0]["bleu"], 100.0);
}

}  // namespace
}  // namespace dekit
