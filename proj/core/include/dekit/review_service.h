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

#ifndef DEKIT_REVIEW_SERVICE_H_
#define DEKIT_REVIEW_SERVICE_H_

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dekit/annotations.h"
#include "dekit/corpus_io.h"
#include "dekit/de_inserter.h"
#include "dekit/error.h"

namespace dekit {

class NotFoundError : public Error {
 public:
  using Error::Error;
};

struct SessionCandidate {
  InsertionCandidate candidate;  // status reflects the live decision.
  std::string sentence;
  std::optional<std::string> baseline_translation;
  std::optional<std::string> modified_translation;
  std::vector<AnnotationDecision> history;
};

struct StatusCounts {
  std::size_t proposed = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t total = 0;
};

// Review state over an experiment output directory: candidates.jsonl and
// source.tsv are required; translation files are optional. Decisions are
// appended to decisions.jsonl (flushed per write) and replayed on open.
// Every candidate starts as proposed until a decision is recorded.
// Thread-safe.
class ReviewSession {
 public:
  using Clock = std::function<std::string()>;

  // Throws dekit::Error if required files are missing, a decisions line is
  // corrupt, or a decision references an unknown candidate.
  explicit ReviewSession(std::filesystem::path dir, Clock clock = NowIso8601);

  // All candidates in corpus order, optionally filtered by status.
  std::vector<SessionCandidate> Candidates(
      std::optional<CandidateStatus> filter = std::nullopt) const;

  // Appends and applies a decision. Throws NotFoundError for unknown keys.
  SessionCandidate Record(std::string_view candidate_key, Decision decision,
                          std::string_view annotator);

  StatusCounts Counts() const;

  // Source corpus with only accepted insertions applied. Changed rows are
  // marked de_modified; untouched rows are byte-identical to source.tsv.
  Corpus ExportAccepted() const;

  const std::string& particle() const { return particle_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::optional<SessionCandidate> Find(std::string_view key) const;
  void ApplyDecision(const AnnotationDecision& d);

  std::filesystem::path dir_;
  Clock clock_;
  std::string particle_ = "的";
  Corpus source_;
  std::vector<SessionCandidate> candidates_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::ofstream decisions_out_;
  mutable std::mutex mu_;
};

// Session view JSON helpers shared by the HTTP layer and the CLI.
std::string CandidatesToJson(const std::vector<SessionCandidate>& candidates,
                             std::string_view particle);
std::string CountsToJson(const StatusCounts& counts);

// Writes the accepted-only corpus for `session_dir` to `out_path`.
Corpus ExportAccepted(const std::filesystem::path& session_dir,
                      const std::filesystem::path& out_path);

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port.
  std::optional<std::filesystem::path> ui_dir;  // Static files at "/".
};

// HTTP front end:
//   GET  /candidates?status=proposed|accepted|rejected|all
//   POST /decisions   {"candidate_key", "decision", "annotator"}
//   GET  /export      accepted-only corpus TSV
//   GET  /stats       counts by status
class ReviewServer {
 public:
  ReviewServer(ReviewSession& session, ServerOptions options);
  ~ReviewServer();

  ReviewServer(const ReviewServer&) = delete;
  ReviewServer& operator=(const ReviewServer&) = delete;

  // Binds the socket; throws dekit::Error if the port is taken. Returns
  // the bound port.
  int Bind();
  // Serves until Stop(). Requires Bind().
  void Run();
  // Bind() and Run() on a background thread.
  int Start();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace dekit

#endif  // DEKIT_REVIEW_SERVICE_H_
