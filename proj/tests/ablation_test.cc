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

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include "json.hpp"

#include "dekit/corpus_io.h"
#include "dekit/error.h"
#include "test_util.h"

namespace dekit {
namespace {

using Strings = std::vector<std::string>;

// Frozen from tests/oracles/ablation_golden.py over the bundled demo corpus
// and mock dictionary.
constexpr double kDeBleuDelta = -8.974034326658;
constexpr double kZaiBleuDelta = -4.981199405667;
constexpr double kHeBleuDelta = -1.857553685098;
constexpr double kDeChrfDelta = -4.806394815269;
constexpr double kZaiChrfDelta = -2.010260411661;
constexpr double kHeChrfDelta = -1.128926040725;

FunctionWordSpec De() { return {"的", WordCategory::kParticle}; }

TEST(AblationTest, StudentQuestionInverse) {
  const Strings corpus = {"学生的问题"};
  const auto v = Ablate(corpus, De());
  EXPECT_EQ(v.sentences, Strings{"学生问题"});
  EXPECT_EQ(v.removal_counts, std::vector<std::size_t>{1});
  EXPECT_EQ(v.sentences_changed(), 1u);
}

TEST(AblationTest, AbsentWordIsIdentity) {
  const Strings corpus = {"天气很好"};
  const auto v = Ablate(corpus, De());
  EXPECT_EQ(v.sentences, corpus);
  EXPECT_EQ(v.removal_counts, std::vector<std::size_t>{0});
}

TEST(AblationTest, RawSubstringDeletion) {
  const Strings corpus = {"的的", "目的地", "abc"};
  const auto v = Ablate(corpus, De());
  EXPECT_EQ(v.sentences, (Strings{"", "目地", "abc"}));
  EXPECT_EQ(v.removal_counts, (std::vector<std::size_t>{2, 1, 0}));
}

TEST(AblationTest, Idempotent) {
  const Strings corpus = {"我的朋友的书", "他和她", "的"};
  const auto once = Ablate(corpus, De());
  const auto twice = Ablate(once.sentences, De());
  EXPECT_EQ(twice.sentences, once.sentences);
  EXPECT_EQ(twice.sentences_changed(), 0u);
}

TEST(AblationTest, WordlistParsing) {
  std::istringstream one("的\tparticle\n");
  const auto specs = ParseWordlist(one);
  ASSERT_EQ(specs.size(), 1u);
  EXPECT_EQ(specs[0], De());

  std::istringstream glue("和\tglue\n");
  try {
    ParseWordlist(glue);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("unknown category"),
              std::string::npos);
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
  }
  std::istringstream dup("的\tparticle\n和\tconjunction\n的\tparticle\n");
  EXPECT_THROW(ParseWordlist(dup), Error);
  std::istringstream malformed("的\n");
  EXPECT_THROW(ParseWordlist(malformed), Error);
}

TEST(AblationTest, BundledWordlist) {
  const auto words = LoadWordlist(testing::DataDir() / "function_words.tsv");
  ASSERT_EQ(words.size(), 82u);
  EXPECT_EQ(words[0], De());
  int per_category[4] = {0, 0, 0, 0};
  for (const auto& a : words) {
    ++per_category[static_cast<int>(a.category)];
    for (const auto& b : words) {
      if (&a != &b) {
        EXPECT_EQ(b.surface.find(a.surface), std::string::npos)
            << a.surface << " inside " << b.surface;
      }
    }
  }
  for (int n : per_category) EXPECT_GT(n, 0);
}

class DemoAblationTest : public ::testing::Test {
 protected:
  void SetUp() override {
    corpus_ = ReadLines(testing::DataDir() / "demo" / "ablation_corpus.txt");
    words_ = LoadWordlist(testing::DataDir() / "function_words.tsv");
    backend_ = MockBackend::Load(testing::DataDir() / "demo" /
                                 "ablation_mock.tsv");
  }

  const AblationRow& Row(const AblationReport& r, const std::string& w) {
    for (const auto& row : r.rows) {
      if (row.word.surface == w) return row;
    }
    throw Error("no row for " + w);
  }

  Strings corpus_;
  std::vector<FunctionWordSpec> words_;
  std::unique_ptr<MockBackend> backend_;
};

TEST_F(DemoAblationTest, CardinalityAndOrder) {
  ASSERT_EQ(corpus_.size(), 100u);
  const auto report = RunAblation(corpus_, words_, *backend_);
  ASSERT_EQ(report.variants.size(), 82u);
  ASSERT_EQ(report.rows.size(), 82u);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    EXPECT_EQ(report.variants[i].word, words_[i]);
    EXPECT_EQ(report.variants[i].sentences.size(), corpus_.size());
  }
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    EXPECT_GE(std::abs(report.rows[i - 1].bleu_delta),
              std::abs(report.rows[i].bleu_delta));
  }
}

TEST_F(DemoAblationTest, PinnedDeltas) {
  const auto report = RunAblation(corpus_, words_, *backend_);
  EXPECT_EQ(report.rows[0].word.surface, "的");
  EXPECT_EQ(report.baseline.bleu, 100.0);
  const auto& de = Row(report, "的");
  const auto& zai = Row(report, "在");
  const auto& he = Row(report, "和");
  EXPECT_NEAR(de.bleu_delta, kDeBleuDelta, 1e-6);
  EXPECT_NEAR(zai.bleu_delta, kZaiBleuDelta, 1e-6);
  EXPECT_NEAR(he.bleu_delta, kHeBleuDelta, 1e-6);
  EXPECT_NEAR(de.chrf_delta, kDeChrfDelta, 1e-6);
  EXPECT_NEAR(zai.chrf_delta, kZaiChrfDelta, 1e-6);
  EXPECT_NEAR(he.chrf_delta, kHeChrfDelta, 1e-6);
  EXPECT_EQ(de.sentences_changed, 31u);
  EXPECT_EQ(zai.sentences_changed, 14u);
  EXPECT_EQ(he.sentences_changed, 7u);
}

TEST_F(DemoAblationTest, AbsentWordsHaveZeroDelta) {
  const auto report = RunAblation(corpus_, words_, *backend_);
  std::size_t absent = 0;
  for (const auto& row : report.rows) {
    if (row.sentences_changed == 0) {
      ++absent;
      EXPECT_EQ(row.bleu_delta, 0.0) << row.word.surface;
      EXPECT_EQ(row.chrf_delta, 0.0) << row.word.surface;
    }
  }
  EXPECT_EQ(absent, 16u);
}

TEST_F(DemoAblationTest, GoldModeScoresAgainstReferences) {
  AblationOptions options;
  options.mode = ReferenceMode::kGold;
  options.gold_references = backend_->Translate(corpus_);
  const auto gold = RunAblation(corpus_, words_, *backend_, options);
  const auto base = RunAblation(corpus_, words_, *backend_);
  EXPECT_NEAR(Row(gold, "的").bleu_delta, Row(base, "的").bleu_delta, 1e-9);
  options.gold_references.pop_back();
  EXPECT_THROW(RunAblation(corpus_, words_, *backend_, options), Error);
}

TEST_F(DemoAblationTest, ReportFormats) {
  const auto report = RunAblation(corpus_, words_, *backend_);
  const std::string tsv = report.ToTsv();
  std::istringstream in(tsv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line,
            "surface\tcategory\tsentences_changed\tbleu_delta\tchrf_delta");
  std::getline(in, line);
  EXPECT_EQ(line.rfind("的\tparticle\t31\t-8.974034\t", 0), 0u) << line;
  std::size_t rows = 1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 82u);
  const auto j = nlohmann::json::parse(report.ToJson());
  EXPECT_EQ(j["words"].size(), 82u);
  EXPECT_TRUE(j.contains("baseline"));
}

TEST_F(DemoAblationTest, Reproducible) {
  const auto a = RunAblation(corpus_, words_, *backend_);
  const auto b = RunAblation(corpus_, words_, *backend_);
  EXPECT_EQ(a.ToTsv(), b.ToTsv());
}

class FailingBackend : public TranslationBackend {
 public:
  explicit FailingBackend(std::string poison) : poison_(std::move(poison)) {}
  std::string id() const override { return "failing"; }
  std::vector<TranslationResult> TranslateBatch(
      std::span<const std::string> texts) override {
    std::vector<TranslationResult> out;
    for (const auto& t : texts) {
      if (t == poison_) throw Error("backend down");
      out.push_back({t, t, id(), {}});
    }
    return out;
  }

 private:
  std::string poison_;
};

TEST(AblationFailureTest, ErrorNamesVariant) {
  const Strings corpus = {"学生的问题", "我和你"};
  const std::vector<FunctionWordSpec> words = {
      De(), {"和", WordCategory::kConjunction}};
  FailingBackend backend("我你");
  try {
    RunAblation(corpus, words, backend);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("variant '和'"), std::string::npos)
        << e.what();
  }
  FailingBackend baseline_down("学生的问题");
  try {
    RunAblation(corpus, words, baseline_down);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("baseline"), std::string::npos);
  }
}

}  // namespace
}  // namespace dekit
