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

#include "dekit/review_service.h"

#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "dekit/pipeline.h"

namespace dekit {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::map<std::string, std::string> TranslationsById(const fs::path& path) {
  std::map<std::string, std::string> out;
  if (!fs::exists(path)) return out;
  for (const auto& pair : ReadTsv(path).pairs) out[pair.id] = pair.target;
  return out;
}

CandidateStatus StatusFor(Decision d) {
  return d == Decision::kAccept ? CandidateStatus::kAccepted
                                : CandidateStatus::kRejected;
}

json TokenJson(const Token& t) {
  return json{{"surface", t.surface},
              {"pos", t.pos},
              {"start", t.span.start},
              {"end", t.span.end}};
}

json CandidateJson(const SessionCandidate& sc, std::string_view particle) {
  const auto& c = sc.candidate;
  InsertionCandidate applied = c;
  applied.status = CandidateStatus::kAccepted;
  json j;
  j["key"] = c.key();
  j["sentence_id"] = c.sentence_id;
  j["char_offset"] = c.char_offset;
  j["sentence"] = sc.sentence;
  j["preview"] = ApplyInsertions(sc.sentence, {&applied, 1}, particle);
  j["left"] = TokenJson(c.left);
  j["right"] = TokenJson(c.right);
  j["confidence"] = c.confidence;
  j["status"] = std::string(StatusName(c.status));
  j["baseline_translation"] =
      sc.baseline_translation ? json(*sc.baseline_translation) : json(nullptr);
  j["modified_translation"] =
      sc.modified_translation ? json(*sc.modified_translation) : json(nullptr);
  j["history"] = json::array();
  for (const auto& d : sc.history) {
    j["history"].push_back({{"decision", std::string(DecisionName(d.decision))},
                            {"annotator", d.annotator},
                            {"timestamp", d.timestamp}});
  }
  return j;
}

}  // namespace

ReviewSession::ReviewSession(fs::path dir, Clock clock)
    : dir_(std::move(dir)), clock_(std::move(clock)) {
  namespace sf = session_files;
  const fs::path source_path = dir_ / sf::kSource;
  const fs::path candidates_path = dir_ / sf::kCandidates;
  if (!fs::exists(candidates_path)) {
    throw Error("session " + dir_.string() + " has no " +
                std::string(sf::kCandidates));
  }
  if (!fs::exists(source_path)) {
    throw Error("session " + dir_.string() + " has no " +
                std::string(sf::kSource));
  }
  source_ = ReadTsv(source_path);
  if (const fs::path session = dir_ / sf::kSession; fs::exists(session)) {
    const auto j = json::parse(ReadFile(session));
    particle_ = j.value("particle", particle_);
  }
  const auto baseline = TranslationsById(dir_ / sf::kBaselineTranslations);
  const auto modified = TranslationsById(dir_ / sf::kModifiedTranslations);

  std::size_t line_no = 0;
  for (const auto& line : ReadLines(candidates_path)) {
    ++line_no;
    SessionCandidate sc;
    try {
      sc.candidate = CandidateFromJson(line, &sc.sentence);
    } catch (const Error& e) {
      throw Error("bad candidate at line " + std::to_string(line_no) + " of " +
                  candidates_path.string() + ": " + e.what());
    }
    sc.candidate.status = CandidateStatus::kProposed;
    if (auto it = baseline.find(sc.candidate.sentence_id); it != baseline.end()) {
      sc.baseline_translation = it->second;
    }
    if (auto it = modified.find(sc.candidate.sentence_id); it != modified.end()) {
      sc.modified_translation = it->second;
    }
    const std::string key = sc.candidate.key();
    if (!index_.emplace(key, candidates_.size()).second) {
      throw Error("duplicate candidate " + key + " in " +
                  candidates_path.string());
    }
    candidates_.push_back(std::move(sc));
  }

  const fs::path decisions_path = dir_ / sf::kDecisions;
  for (const auto& d : LoadDecisions(decisions_path)) {
    if (!index_.contains(d.candidate_key)) {
      throw Error("decision references unknown candidate " + d.candidate_key +
                  " in " + decisions_path.string());
    }
    ApplyDecision(d);
  }
  decisions_out_.open(decisions_path, std::ios::binary | std::ios::app);
  if (!decisions_out_) throw Error("cannot open " + decisions_path.string());
}

void ReviewSession::ApplyDecision(const AnnotationDecision& d) {
  SessionCandidate& sc = candidates_[index_.find(d.candidate_key)->second];
  sc.candidate.status = StatusFor(d.decision);
  sc.history.push_back(d);
}

std::vector<SessionCandidate> ReviewSession::Candidates(
    std::optional<CandidateStatus> filter) const {
  std::lock_guard lock(mu_);
  std::vector<SessionCandidate> out;
  for (const auto& sc : candidates_) {
    if (!filter || sc.candidate.status == *filter) out.push_back(sc);
  }
  return out;
}

SessionCandidate ReviewSession::Record(std::string_view candidate_key,
                                       Decision decision,
                                       std::string_view annotator) {
  std::lock_guard lock(mu_);
  if (!index_.contains(candidate_key)) {
    throw NotFoundError("unknown candidate " + std::string(candidate_key));
  }
  AnnotationDecision d{std::string(candidate_key), decision,
                       std::string(annotator), clock_()};
  decisions_out_ << DecisionToJson(d) << '\n';
  decisions_out_.flush();
  if (!decisions_out_) throw Error("failed to persist decision");
  ApplyDecision(d);
  return candidates_[index_.find(candidate_key)->second];
}

StatusCounts ReviewSession::Counts() const {
  std::lock_guard lock(mu_);
  StatusCounts counts;
  for (const auto& sc : candidates_) {
    switch (sc.candidate.status) {
      case CandidateStatus::kAccepted: ++counts.accepted; break;
      case CandidateStatus::kRejected: ++counts.rejected; break;
      default: ++counts.proposed; break;
    }
  }
  counts.total = candidates_.size();
  return counts;
}

Corpus ReviewSession::ExportAccepted() const {
  std::lock_guard lock(mu_);
  std::map<std::string, std::vector<InsertionCandidate>> accepted;
  for (const auto& sc : candidates_) {
    if (sc.candidate.status == CandidateStatus::kAccepted) {
      accepted[sc.candidate.sentence_id].push_back(sc.candidate);
    }
  }
  Corpus out = source_;
  for (auto& pair : out.pairs) {
    auto it = accepted.find(pair.id);
    if (it == accepted.end()) continue;
    auto& list = it->second;
    std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) {
      return a.char_offset < b.char_offset;
    });
    pair.source = ApplyInsertions(pair.source, list, particle_);
    pair.provenance = Provenance::kDeModified;
  }
  return out;
}

std::string CandidatesToJson(const std::vector<SessionCandidate>& candidates,
                             std::string_view particle) {
  json arr = json::array();
  for (const auto& sc : candidates) arr.push_back(CandidateJson(sc, particle));
  return arr.dump();
}

std::string CountsToJson(const StatusCounts& counts) {
  json j;
  j["proposed"] = counts.proposed;
  j["accepted"] = counts.accepted;
  j["rejected"] = counts.rejected;
  j["total"] = counts.total;
  return j.dump();
}

Corpus ExportAccepted(const fs::path& session_dir, const fs::path& out_path) {
  ReviewSession session(session_dir);
  Corpus corpus = session.ExportAccepted();
  WriteTsv(corpus, out_path);
  return corpus;
}

struct ReviewServer::Impl {
  ReviewSession& session;
  ServerOptions options;
  httplib::Server server;
  std::thread thread;
  int port = -1;

  Impl(ReviewSession& s, ServerOptions o)
      : session(s), options(std::move(o)) {
    // SO_REUSEADDR only: SO_REUSEPORT would let a second instance share a
    // busy port instead of failing.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR,
                 reinterpret_cast<const void*>(&yes), sizeof(yes));
    });
  }

  void Routes() {
    constexpr const char* kJson = "application/json; charset=utf-8";
    const auto error = [](httplib::Response& res, int status,
                          const std::string& message) {
      res.status = status;
      res.set_content(json{{"error", message}}.dump(),
                      "application/json; charset=utf-8");
    };

    server.Get("/candidates", [this, kJson, error](const httplib::Request& req,
                                                   httplib::Response& res) {
      std::optional<CandidateStatus> filter;
      const std::string status =
          req.has_param("status") ? req.get_param_value("status") : "all";
      if (status != "all") {
        filter = ParseStatus(status);
        if (!filter || *filter == CandidateStatus::kAutoApplied) {
          return error(res, 400, "status must be proposed|accepted|rejected|all");
        }
      }
      res.set_content(
          CandidatesToJson(session.Candidates(filter), session.particle()),
          kJson);
    });

    server.Post("/decisions", [this, kJson, error](const httplib::Request& req,
                                                   httplib::Response& res) {
      json body;
      try {
        body = json::parse(req.body);
      } catch (const json::exception&) {
        return error(res, 400, "body is not JSON");
      }
      const auto field = [&](const char* name) -> std::optional<std::string> {
        if (!body.is_object() || !body.contains(name) ||
            !body[name].is_string()) {
          return std::nullopt;
        }
        return body[name].get<std::string>();
      };
      const auto key = field("candidate_key");
      const auto decision_name = field("decision");
      const auto annotator = field("annotator");
      if (!key || !decision_name || !annotator) {
        return error(res, 400,
                     "candidate_key, decision and annotator are required");
      }
      const auto decision = ParseDecision(*decision_name);
      if (!decision) return error(res, 400, "decision must be accept|reject");
      try {
        const auto updated = session.Record(*key, *decision, *annotator);
        res.set_content(CandidateJson(updated, session.particle()).dump(),
                        kJson);
      } catch (const NotFoundError& e) {
        error(res, 404, e.what());
      } catch (const Error& e) {
        error(res, 500, e.what());
      }
    });

    server.Get("/export", [this, error](const httplib::Request&,
                                        httplib::Response& res) {
      try {
        res.set_content(FormatTsv(session.ExportAccepted()),
                        "text/tab-separated-values; charset=utf-8");
      } catch (const Error& e) {
        error(res, 500, e.what());
      }
    });

    server.Get("/stats", [this, kJson](const httplib::Request&,
                                       httplib::Response& res) {
      res.set_content(CountsToJson(session.Counts()), kJson);
    });

    if (options.ui_dir) {
      if (!server.set_mount_point("/", options.ui_dir->string())) {
        throw Error("cannot serve UI from " + options.ui_dir->string());
      }
    }
  }
};

ReviewServer::ReviewServer(ReviewSession& session, ServerOptions options)
    : impl_(std::make_unique<Impl>(session, std::move(options))) {
  impl_->Routes();
}

ReviewServer::~ReviewServer() { Stop(); }

int ReviewServer::Bind() {
  const auto& o = impl_->options;
  if (o.port == 0) {
    impl_->port = impl_->server.bind_to_any_port(o.host);
    if (impl_->port < 0) throw Error("cannot bind " + o.host);
  } else {
    if (!impl_->server.bind_to_port(o.host, o.port)) {
      throw Error("cannot bind " + o.host + ":" + std::to_string(o.port) +
                  " (port busy?)");
    }
    impl_->port = o.port;
  }
  return impl_->port;
}

void ReviewServer::Run() { impl_->server.listen_after_bind(); }

int ReviewServer::Start() {
  const int port = Bind();
  impl_->thread = std::thread([this] { Run(); });
  impl_->server.wait_until_ready();
  return port;
}

void ReviewServer::Stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace dekit
