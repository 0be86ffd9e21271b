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


// Runs each acceptance criterion and prints one PASS/FAIL line per criterion.
// Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "httplib.h"

#include "dekit/ablation.h"
#include "dekit/corpus_io.h"
#include "dekit/de_inserter.h"
#include "dekit/metrics.h"
#include "dekit/mt_client.h"
#include "dekit/pipeline.h"
#include "dekit/review_service.h"
#include "dekit/segmenter.h"
#include "dekit/utf8.h"
#include "oracles/metrics_oracle.h"
#include "oracles/segment_oracle.h"
#include "test_util.h"

namespace dekit {
namespace {

namespace sf = session_files;
using Strings = std::vector<std::string>;

// Frozen from tests/oracles/metrics_golden.py.
constexpr double kGoldenBleu = 52.773414324640;
constexpr double kGoldenChrf = 72.330168294422;
// Frozen from tests/oracles/ablation_golden.py.
constexpr double kDeBleuDelta = -8.974034326658;
constexpr double kDeChrfDelta = -4.806394815269;
// Frozen from tests/oracles/titles_golden.py.
constexpr double kDemoMeanBleuDelta = 24.572314338907;
constexpr double kDemoMeanChrfDelta = 26.408946398551;

struct Outcome {
  bool pass = true;
  std::string detail;

  void Require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

bool Near(double a, double b, double tol = 1e-6) {
  return std::fabs(a - b) <= tol;
}

std::string Fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, value);
  return buf;
}

Outcome MetricSuite() {
  Outcome o;
  Strings hyps, refs;
  std::ifstream in(testing::TestsDir() / "data" / "metrics_golden.tsv");
  std::string line;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    hyps.push_back(line.substr(0, tab));
    refs.push_back(line.substr(tab + 1));
  }
  o.Require(hyps.size() == 10, "golden corpus must have 10 pairs");
  const auto r = Evaluate(hyps, refs);
  o.Require(Near(r.bleu, oracle::BruteBleu(hyps, refs)), "bleu vs oracle");
  o.Require(Near(r.chrf, oracle::BruteChrf(hyps, refs)), "chrf vs oracle");
  o.Require(Near(r.bleu, kGoldenBleu), "bleu vs frozen value");
  o.Require(Near(r.chrf, kGoldenChrf), "chrf vs frozen value");
  BleuConfig unsmoothed;
  unsmoothed.smoothing = BleuSmoothing::kNone;
  o.Require(Near(CorpusBleu(hyps, refs, unsmoothed).bleu,
                 oracle::BruteBleu(hyps, refs, 4, false)),
            "unsmoothed bleu vs oracle");
  const auto id = Evaluate(refs, refs);
  o.Require(id.bleu == 100.0 && id.chrf == 100.0, "identity must be 100.0");
  const Strings dh = {"alpha beta gamma delta"};
  const Strings dr = {"one two three four"};
  o.Require(CorpusBleu(dh, dr, unsmoothed).bleu == 0.0,
            "disjoint bleu must be 0.0");
  o.Require(CorpusChrf(Strings{"abcd"}, Strings{"wxyz"}).chrf == 0.0,
            "disjoint chrf must be 0.0");
  return o;
}

Outcome SegmenterSuite() {
  Outcome o;
  const Lexicon lex = oracle::OracleLexicon();
  std::vector<std::string> frontier = {""};
  std::size_t checked = 0;
  for (int len = 1; len <= 6 && o.pass; ++len) {
    std::vector<std::string> next;
    next.reserve(frontier.size() * 10);
    for (const auto& prefix : frontier) {
      for (const char* c : oracle::kOracleAlphabet) {
        next.push_back(prefix + c);
        const std::string& text = next.back();
        if (Segment(text, lex).surfaces() !=
            oracle::ExhaustiveSegment(text, lex)) {
          o.Require(false, "mismatch on " + text);
        }
        ++checked;
      }
    }
    frontier = std::move(next);
  }
  o.Require(checked == 1111110, "expected 1111110 strings");
  o.detail = o.pass ? std::to_string(checked) + " strings" : o.detail;
  return o;
}

Outcome StudentQuestion() {
  Outcome o;
  const Lexicon& lex = testing::BundledLexicon();
  const auto policy = InsertionPolicy::Default(lex.tagset());
  const auto r = AutoInsert("学生问题", lex, policy);
  o.Require(r.text == "学生的问题", "got " + r.text);
  o.Require(r.candidates.size() == 1, "expected exactly one candidate");
  if (r.candidates.size() == 1) {
    o.Require(r.candidates[0].char_offset == 2, "offset must be 2");
    o.Require(r.candidates[0].status == CandidateStatus::kAutoApplied,
              "candidate must be applied");
  }
  return o;
}

Outcome InverseProperty() {
  Outcome o;
  const Lexicon& lex = testing::BundledLexicon();
  const auto policy = InsertionPolicy::Default(lex.tagset());
  const auto& entries = lex.entries();
  std::mt19937 rng(20260101);
  std::size_t applied_total = 0;
  for (int trial = 0; trial < 1000 && o.pass; ++trial) {
    std::string text;
    const int words = 1 + static_cast<int>(rng() % 6);
    for (int w = 0; w < words; ++w) {
      text += entries[rng() % entries.size()].surface;
    }
    const auto result = AutoInsert(text, lex, policy);
    std::vector<std::size_t> inserted;
    std::size_t shift = 0;
    for (const auto& c : result.candidates) {
      if (c.status != CandidateStatus::kAutoApplied) continue;
      inserted.push_back(c.char_offset + shift++);
    }
    applied_total += inserted.size();
    auto cps = utf8::Decode(result.text);
    for (auto it = inserted.rbegin(); it != inserted.rend(); ++it) {
      cps.erase(cps.begin() + static_cast<std::ptrdiff_t>(*it));
    }
    o.Require(utf8::Encode(cps) == text, "inverse failed on " + text);
    const auto again =
        FindCandidates(SegmentAndTag(result.text, lex), policy, lex);
    for (const auto& c : again) {
      for (std::size_t p : inserted) {
        o.Require(c.char_offset != p && c.char_offset != p + 1,
                  "candidate reappeared next to particle in " + result.text);
      }
    }
  }
  if (o.pass) {
    o.detail = "1000 sentences, " + std::to_string(applied_total) +
               " insertions";
  }
  return o;
}

Outcome AblationSuite() {
  Outcome o;
  const Strings corpus =
      ReadLines(testing::DataDir() / "demo" / "ablation_corpus.txt");
  const auto words = LoadWordlist(DefaultWordlistPath());
  auto backend =
      MockBackend::Load(testing::DataDir() / "demo" / "ablation_mock.tsv");
  const auto report = RunAblation(corpus, words, *backend);
  o.Require(words.size() == 82, "wordlist must have 82 entries");
  o.Require(report.variants.size() == 82, "expected 82 variants");
  o.Require(report.rows.size() == 82, "expected 82 rows");
  for (const auto& row : report.rows) {
    if (row.sentences_changed == 0) {
      o.Require(row.bleu_delta == 0.0 && row.chrf_delta == 0.0,
                "absent word " + row.word.surface + " has nonzero delta");
    }
  }
  if (!report.rows.empty()) {
    const auto& top = report.rows.front();
    o.Require(top.word.surface == "的", "top word is " + top.word.surface);
    o.Require(Near(top.bleu_delta, kDeBleuDelta), "的 bleu delta");
    o.Require(Near(top.chrf_delta, kDeChrfDelta), "的 chrf delta");
  }
  if (o.pass) o.detail = std::to_string(corpus.size()) + " sentences";
  return o;
}

Outcome PipelineSuite() {
  Outcome o;
  testing::TempDir dir;
  auto backend =
      MockBackend::Load(testing::DataDir() / "demo" / "titles_mock.tsv");
  ExperimentStats stats[2];
  for (int i = 0; i < 2; ++i) {
    ExperimentOptions opts;
    opts.titles_path = testing::DataDir() / "demo" / "titles.tsv";
    opts.out_dir = dir / ("run" + std::to_string(i));
    opts.seed = 1;
    stats[i] = RunExperiment(opts, testing::BundledLexicon(), *backend);
  }
  o.Require(testing::SnapshotTree(dir / "run0") ==
                testing::SnapshotTree(dir / "run1"),
            "output trees differ");
  const auto& s = stats[0];
  o.Require(s.titles_improved + s.titles_regressed + s.titles_unchanged ==
                s.total_titles,
            "verdicts do not sum to total");
  o.Require(s.titles_with_candidates <= s.total_titles,
            "more titles with candidates than titles");
  o.Require(s.total_titles == 20 && s.titles_with_candidates == 17 &&
                s.titles_improved == 14 && s.titles_regressed == 2 &&
                s.titles_unchanged == 4,
            "golden counts mismatch");
  o.Require(Near(s.mean_bleu_delta, kDemoMeanBleuDelta, 1e-9),
            "mean bleu delta " + Fmt("%.12f", s.mean_bleu_delta));
  o.Require(Near(s.mean_chrf_delta, kDemoMeanChrfDelta, 1e-9),
            "mean chrf delta " + Fmt("%.12f", s.mean_chrf_delta));
  return o;
}

// The last two pieces are malformed UTF-8 and are left out of meta values,
// which must be valid UTF-8.
std::string HostileString(std::mt19937_64& rng, bool allow_empty,
                          bool utf8_only = false) {
  static const Strings pieces = {
      "\t", "\n", "\r", "\r\n", "\\", "\\t", "\\n", "\\\\", "#", "#k=v", "=",
      " ", "  ", "学", "的", "😀", "é", std::string(1, '\0'), "\"", "{}",
      "\\#", "a", "Z", "9", "\x7F", "　", "\xFF", "\xE5\xAD"};
  const std::size_t usable = pieces.size() - (utf8_only ? 2 : 0);
  std::string s;
  const int n = static_cast<int>(rng() % 8) + (allow_empty ? 0 : 1);
  for (int i = 0; i < n; ++i) s += pieces[rng() % usable];
  return s;
}

Outcome CorpusIoSuite() {
  Outcome o;
  testing::TempDir dir;
  std::mt19937_64 rng(424242);
  std::size_t failures = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    Corpus c;
    if (rng() % 2) c.SetHeader("note", HostileString(rng, true));
    const int pairs = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < pairs; ++i) {
      ParallelPair p;
      p.id = std::to_string(i) + HostileString(rng, true);
      p.source = HostileString(rng, false);
      p.target = HostileString(rng, true);
      p.provenance = static_cast<Provenance>(rng() % 3);
      if (rng() % 2) p.meta["k"] = HostileString(rng, true, true);
      c.pairs.push_back(std::move(p));
    }
    const auto path = dir / "c.tsv";
    WriteTsv(c, path);
    const Corpus back = ReadTsv(path);
    if (!(back == c) || FormatTsv(back) != testing::Slurp(path)) ++failures;
  }
  o.Require(failures == 0, std::to_string(failures) + " failures");
  if (o.pass) o.detail = "10000 cases";
  return o;
}

Outcome ReviewSuite() {
  Outcome o;
  testing::TempDir dir;
  auto backend =
      MockBackend::Load(testing::DataDir() / "demo" / "titles_mock.tsv");
  ExperimentOptions opts;
  opts.titles_path = testing::DataDir() / "demo" / "titles.tsv";
  opts.out_dir = dir.path();
  RunExperiment(opts, testing::BundledLexicon(), *backend);
  const auto clock = [] { return std::string("2026-01-01T00:00:00.000Z"); };

  auto fetch_candidates = [&](ReviewSession& session) {
    ServerOptions so;
    so.port = 0;
    ReviewServer server(session, so);
    const int port = server.Start();
    httplib::Client client("127.0.0.1", port);
    auto res = client.Get("/candidates");
    server.Stop();
    return res && res->status == 200 ? res->body : std::string();
  };

  std::string first;
  {
    ReviewSession session(dir.path(), clock);
    session.Record("1:2", Decision::kAccept, "a");
    const auto final = session.Record("1:2", Decision::kReject, "a");
    o.Require(final.candidate.status == CandidateStatus::kRejected,
              "accept then reject must end rejected");
    o.Require(final.history.size() == 2, "history must have two entries");
    session.Record("2:2", Decision::kAccept, "b");
    first = fetch_candidates(session);
    o.Require(!first.empty(), "GET /candidates failed");
  }
  {
    ReviewSession session(dir.path(), clock);
    o.Require(fetch_candidates(session) == first,
              "replayed /candidates differs");
    for (const auto& sc : session.Candidates()) {
      session.Record(sc.candidate.key(), Decision::kReject, "c");
    }
    ExportAccepted(dir.path(), dir / "export.tsv");
    o.Require(testing::Slurp(dir / "export.tsv") ==
                  testing::Slurp(dir / std::string(sf::kSource)),
              "all-rejected export differs from input");
  }
  return o;
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
  double budget_seconds;  // 0 means no runtime bound.
};

}  // namespace
}  // namespace dekit

int main() {
  using dekit::Criterion;
  const std::vector<Criterion> criteria = {
      {"metric oracle suite", dekit::MetricSuite, 1.0},
      {"segmenter oracle suite", dekit::SegmenterSuite, 10.0},
      {"student question end-to-end", dekit::StudentQuestion, 0.0},
      {"insertion inverse property", dekit::InverseProperty, 0.0},
      {"ablation invariants", dekit::AblationSuite, 30.0},
      {"pipeline determinism", dekit::PipelineSuite, 0.0},
      {"corpus io round trip", dekit::CorpusIoSuite, 0.0},
      {"review service", dekit::ReviewSuite, 0.0},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    dekit::Outcome outcome;
    const auto start = std::chrono::steady_clock::now();
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    if (c.budget_seconds > 0 && seconds >= c.budget_seconds && outcome.pass) {
      outcome.pass = false;
      outcome.detail = "over the " + dekit::Fmt("%.0f", c.budget_seconds) +
                       " s budget";
    }
    if (!outcome.pass) ++failed;
    std::printf("%s %s (%.3f s)%s%s\n", outcome.pass ? "PASS" : "FAIL", c.name,
                seconds, outcome.detail.empty() ? "" : ": ",
                outcome.detail.c_str());
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
