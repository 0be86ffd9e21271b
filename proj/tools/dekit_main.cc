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

// dekit: command-line front end for segmentation, particle insertion,
// ablation, translation, scoring, corpus splitting, the end-to-end
// experiment and the review service.
//
// Exit codes: 0 success, 1 usage error, 2 runtime error.

#include <charconv>
#include <csignal>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dekit/ablation.h"
#include "dekit/corpus_io.h"
#include "dekit/de_inserter.h"
#include "dekit/error.h"
#include "dekit/lexicon.h"
#include "dekit/metrics.h"
#include "dekit/mt_client.h"
#include "dekit/pipeline.h"
#include "dekit/review_service.h"
#include "dekit/segmenter.h"

namespace {

namespace fs = std::filesystem;

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct BackendFlags {
  std::string spec;
  std::string src = "zh";
  std::string tgt = "en";
  std::size_t batch_size = 16;
  std::size_t max_parallel = 4;
  int timeout_ms = 30000;
  int retries = 2;
  std::string token;
  std::string cache_dir;

  void Register(CLI::App* cmd) {
    cmd->add_option("--backend", spec,
                    "Translation backend: mock:<dict.tsv> or http:<url>")
        ->required();
    cmd->add_option("--src", src, "Source language code")->capture_default_str();
    cmd->add_option("--tgt", tgt, "Target language code")->capture_default_str();
    cmd->add_option("--batch-size", batch_size, "Texts per HTTP request")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-parallel", max_parallel, "Requests in flight")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--timeout-ms", timeout_ms, "Per-request timeout")
        ->capture_default_str();
    cmd->add_option("--retries", retries, "Retries per failed batch")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--token", token, "Bearer token for the HTTP backend");
    cmd->add_option("--cache-dir", cache_dir,
                    "Enable the on-disk translation cache in this directory");
  }

  std::unique_ptr<dekit::TranslationBackend> Make() const {
    dekit::BackendConfig config;
    config.src_lang = src;
    config.tgt_lang = tgt;
    config.batch_size = batch_size;
    config.max_parallel = max_parallel;
    config.timeout = std::chrono::milliseconds(timeout_ms);
    config.max_retries = retries;
    config.bearer_token = token;
    if (!cache_dir.empty()) config.cache_dir = cache_dir;
    return dekit::MakeBackend(spec, config);
  }
};

dekit::Lexicon LoadLexicon(const std::string& path) {
  return dekit::Lexicon::Load(path.empty() ? dekit::DefaultLexiconPath()
                                           : fs::path(path));
}

dekit::InsertionPolicy LoadPolicy(const std::string& path,
                                  const dekit::PosTagset& tagset) {
  if (path.empty()) return dekit::InsertionPolicy::Default(tagset);
  return dekit::InsertionPolicy::Load(path, tagset);
}

// Writes to `path`, or stdout when empty.
void Emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
  } else {
    dekit::WriteFile(path, content);
  }
}

std::string FormatScore(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

std::vector<std::size_t> ParseSizes(const std::string& text) {
  std::vector<std::size_t> sizes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t v = 0;
    const auto [end, ec] =
        std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || end != item.data() + item.size()) {
      throw CLI::ValidationError("--sizes", "not a size: " + item);
    }
    sizes.push_back(v);
  }
  return sizes;
}

dekit::ReviewServer* g_server = nullptr;

void HandleSignal(int) {
  if (g_server != nullptr) g_server->Stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dekit: attributive-noun particle insertion and MT evaluation"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  // segment
  std::string seg_in, seg_out, seg_lexicon;
  bool seg_no_tags = false;
  auto* segment = app.add_subcommand("segment", "Segment and POS-tag text");
  segment->add_option("--in", seg_in, "Input, one sentence per line")->required();
  segment->add_option("--out", seg_out, "Output file (default stdout)");
  segment->add_option("--lexicon", seg_lexicon, "Lexicon TSV (default bundled)");
  segment->add_flag("--no-tags", seg_no_tags, "Print surfaces only");

  // insert-de
  std::string ins_in, ins_out, ins_candidates, ins_policy, ins_lexicon;
  auto* insert = app.add_subcommand(
      "insert-de", "Insert the particle between attributive noun pairs");
  insert->add_option("--in", ins_in, "Input titles, one per line")->required();
  insert->add_option("--out", ins_out, "Modified text output")->required();
  insert->add_option("--candidates", ins_candidates,
                     "Candidate JSONL output (all candidates, any status)");
  insert->add_option("--policy", ins_policy, "Policy file (default built-in)");
  insert->add_option("--lexicon", ins_lexicon, "Lexicon TSV (default bundled)");

  // ablate
  std::string abl_corpus, abl_words, abl_refs, abl_out, abl_json;
  BackendFlags abl_backend;
  auto* ablate = app.add_subcommand(
      "ablate", "Delete each function word in turn and score the effect");
  ablate->add_option("--corpus", abl_corpus, "Corpus, one sentence per line")
      ->required();
  ablate->add_option("--words", abl_words,
                     "Wordlist surface<TAB>category (default bundled 82 words)");
  ablate->add_option("--refs", abl_refs,
                     "Gold references (enables gold mode); otherwise baseline "
                     "translations are the reference");
  ablate->add_option("--out", abl_out, "TSV report (default stdout)");
  ablate->add_option("--json", abl_json, "Also write the JSON report here");
  abl_backend.Register(ablate);

  // translate
  std::string tr_in, tr_out;
  BackendFlags tr_backend;
  auto* translate = app.add_subcommand("translate", "Translate lines of text");
  translate->add_option("--in", tr_in, "Input, one sentence per line")->required();
  translate->add_option("--out", tr_out, "Output (default stdout)");
  tr_backend.Register(translate);

  // score
  std::string sc_hyp, sc_ref, sc_json;
  dekit::BleuConfig bleu_config;
  dekit::ChrfConfig chrf_config;
  bool no_smoothing = false, no_case_fold = false, keep_ws = false;
  auto* score = app.add_subcommand("score", "Corpus BLEU and chrF");
  score->add_option("--hyp", sc_hyp, "Hypotheses, one per line")->required();
  score->add_option("--ref", sc_ref, "References, one per line")->required();
  score->add_option("--json", sc_json, "Write the full report as JSON");
  score->add_option("--bleu-order", bleu_config.max_order)->capture_default_str();
  score->add_flag("--no-smoothing", no_smoothing, "Disable add-one-on-zero");
  score->add_flag("--no-case-fold", no_case_fold, "Keep case for BLEU");
  score->add_option("--chrf-order", chrf_config.max_order)->capture_default_str();
  score->add_option("--beta", chrf_config.beta, "chrF recall weight")
      ->capture_default_str();
  score->add_flag("--keep-whitespace", keep_ws, "Count whitespace in chrF");

  // split
  std::string sp_in, sp_sizes, sp_out_dir;
  std::uint64_t sp_seed = 1;
  bool sp_plain = false;
  auto* split = app.add_subcommand("split", "Deterministic corpus split");
  split->add_option("--in", sp_in, "Corpus TSV")->required();
  split->add_flag("--plain", sp_plain, "Input is plain source<TAB>target");
  split->add_option("--sizes", sp_sizes, "Comma-separated subset sizes")
      ->required();
  split->add_option("--seed", sp_seed, "Shuffle seed")->capture_default_str();
  split->add_option("--out-dir", sp_out_dir, "Output directory")->required();

  // run-experiment
  dekit::ExperimentOptions exp;
  std::string exp_titles, exp_policy, exp_annotations, exp_out, exp_lexicon;
  BackendFlags exp_backend;
  auto* run = app.add_subcommand("run-experiment",
                                 "Baseline vs particle-inserted translation");
  run->add_option("--titles", exp_titles, "Titles, optionally title<TAB>reference")
      ->required();
  run->add_option("--policy", exp_policy, "Policy file (default built-in)");
  run->add_option("--annotations", exp_annotations,
                  "Decisions JSONL; apply accepted candidates only");
  run->add_option("--out-dir", exp_out, "Output directory")->required();
  run->add_option("--seed", exp.seed, "Seed for the tuning dev/train split")
      ->capture_default_str();
  run->add_option("--dev-size", exp.dev_size, "Tuning pairs held out as dev")
      ->capture_default_str();
  run->add_option("--lexicon", exp_lexicon, "Lexicon TSV (default bundled)");
  exp_backend.Register(run);

  // serve
  dekit::ServerOptions serve_options;
  std::string serve_session, serve_ui;
  auto* serve = app.add_subcommand("serve", "Run the review service");
  serve->add_option("--session", serve_session, "Experiment output directory")
      ->required();
  serve->add_option("--port", serve_options.port, "Port")->capture_default_str();
  serve->add_option("--host", serve_options.host, "Bind address")
      ->capture_default_str();
  serve->add_option("--ui-dir", serve_ui, "Serve static UI files from here");

  // export
  std::string exp_session, export_out;
  auto* export_cmd = app.add_subcommand(
      "export", "Write the accepted-only corpus of a review session");
  export_cmd->add_option("--session", exp_session, "Session directory")->required();
  export_cmd->add_option("--out", export_out, "Output TSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*segment) {
      const auto lexicon = LoadLexicon(seg_lexicon);
      std::string out;
      for (const auto& line : dekit::ReadLines(seg_in)) {
        const auto s = dekit::SegmentAndTag(line, lexicon);
        if (seg_no_tags) {
          const auto surfaces = s.surfaces();
          for (std::size_t i = 0; i < surfaces.size(); ++i) {
            if (i > 0) out += ' ';
            out += surfaces[i];
          }
        } else {
          out += dekit::FormatTagged(s);
        }
        out += '\n';
      }
      Emit(seg_out, out);
    } else if (*insert) {
      const auto lexicon = LoadLexicon(ins_lexicon);
      const auto policy = LoadPolicy(ins_policy, lexicon.tagset());
      std::string modified, candidates;
      std::size_t found = 0, applied = 0, id = 0;
      const auto lines = dekit::ReadLines(ins_in);
      for (const auto& line : lines) {
        const auto result = dekit::AutoInsert(line, lexicon, policy,
                                              std::to_string(++id));
        modified += result.text + '\n';
        for (const auto& c : result.candidates) {
          candidates += dekit::CandidateToJson(c, line) + '\n';
        }
        found += result.candidates.size();
        applied += result.applied();
      }
      dekit::WriteFile(ins_out, modified);
      if (!ins_candidates.empty()) dekit::WriteFile(ins_candidates, candidates);
      std::cerr << lines.size() << " sentences, " << found << " candidates, "
                << applied << " applied\n";
    } else if (*ablate) {
      const auto corpus = dekit::ReadLines(abl_corpus);
      const auto words = dekit::LoadWordlist(
          abl_words.empty() ? dekit::DefaultWordlistPath() : fs::path(abl_words));
      dekit::AblationOptions options;
      if (!abl_refs.empty()) {
        options.mode = dekit::ReferenceMode::kGold;
        options.gold_references = dekit::ReadLines(abl_refs);
      }
      auto backend = abl_backend.Make();
      const auto report = dekit::RunAblation(corpus, words, *backend, options);
      Emit(abl_out, report.ToTsv());
      if (!abl_json.empty()) dekit::WriteFile(abl_json, report.ToJson() + "\n");
    } else if (*translate) {
      const auto lines = dekit::ReadLines(tr_in);
      auto backend = tr_backend.Make();
      std::string out;
      for (const auto& t : backend->Translate(lines)) out += t + '\n';
      Emit(tr_out, out);
    } else if (*score) {
      bleu_config.smoothing = no_smoothing ? dekit::BleuSmoothing::kNone
                                           : dekit::BleuSmoothing::kAddOneOnZero;
      bleu_config.case_fold = !no_case_fold;
      chrf_config.strip_whitespace = !keep_ws;
      const auto hyps = dekit::ReadLines(sc_hyp);
      const auto refs = dekit::ReadLines(sc_ref);
      const auto report = dekit::Evaluate(hyps, refs, bleu_config, chrf_config);
      std::cout << "bleu=" << FormatScore(report.bleu)
                << " chrf=" << FormatScore(report.chrf) << '\n';
      if (!sc_json.empty()) dekit::WriteFile(sc_json, report.ToJson() + "\n");
    } else if (*split) {
      const auto sizes = ParseSizes(sp_sizes);
      const auto corpus =
          sp_plain ? dekit::ReadPlainParallel(sp_in) : dekit::ReadTsv(sp_in);
      const auto parts = dekit::Split(corpus, sizes, sp_seed);
      fs::create_directories(sp_out_dir);
      for (std::size_t i = 0; i < parts.size(); ++i) {
        const std::string name = i < sizes.size()
                                     ? "part_" + std::to_string(i) + ".tsv"
                                     : std::string("residual.tsv");
        dekit::WriteTsv(parts[i], fs::path(sp_out_dir) / name);
        std::cerr << name << ": " << parts[i].pairs.size() << " pairs\n";
      }
    } else if (*run) {
      const auto lexicon = LoadLexicon(exp_lexicon);
      exp.titles_path = exp_titles;
      exp.out_dir = exp_out;
      if (!exp_policy.empty()) exp.policy_path = exp_policy;
      if (!exp_annotations.empty()) exp.annotations_path = exp_annotations;
      auto backend = exp_backend.Make();
      const auto stats = dekit::RunExperiment(exp, lexicon, *backend);
      std::cout << stats.ToJson();
    } else if (*serve) {
      if (!serve_ui.empty()) serve_options.ui_dir = serve_ui;
      dekit::ReviewSession session(serve_session);
      dekit::ReviewServer server(session, serve_options);
      const int port = server.Bind();
      g_server = &server;
      std::signal(SIGINT, HandleSignal);
      std::signal(SIGTERM, HandleSignal);
      std::cerr << "serving " << serve_session << " on http://"
                << serve_options.host << ":" << port << "\n";
      server.Run();
      g_server = nullptr;
    } else if (*export_cmd) {
      const auto corpus = dekit::ExportAccepted(exp_session, export_out);
      std::cerr << corpus.pairs.size() << " pairs written to " << export_out
                << "\n";
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
