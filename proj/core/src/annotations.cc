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

#include "dekit/annotations.h"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "json.hpp"

#include "dekit/error.h"

namespace dekit {

std::string_view DecisionName(Decision d) {
  return d == Decision::kAccept ? "accept" : "reject";
}

std::optional<Decision> ParseDecision(std::string_view name) {
  if (name == "accept") return Decision::kAccept;
  if (name == "reject") return Decision::kReject;
  return std::nullopt;
}

std::string DecisionToJson(const AnnotationDecision& d) {
  nlohmann::ordered_json j;
  j["candidate_key"] = d.candidate_key;
  j["decision"] = std::string(DecisionName(d.decision));
  j["annotator"] = d.annotator;
  j["timestamp"] = d.timestamp;
  return j.dump();
}

AnnotationDecision DecisionFromJson(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("not JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error("decision is not a JSON object");
  const auto text = [&](const char* field) {
    if (!j.contains(field) || !j[field].is_string()) {
      throw Error(std::string("missing string field \"") + field + "\"");
    }
    return j[field].get<std::string>();
  };
  AnnotationDecision d;
  d.candidate_key = text("candidate_key");
  const auto decision = ParseDecision(text("decision"));
  if (!decision) throw Error("decision must be \"accept\" or \"reject\"");
  d.decision = *decision;
  d.annotator = text("annotator");
  d.timestamp = text("timestamp");
  return d;
}

std::vector<AnnotationDecision> LoadDecisions(
    const std::filesystem::path& path) {
  std::vector<AnnotationDecision> out;
  if (!std::filesystem::exists(path)) return out;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(DecisionFromJson(line));
    } catch (const Error& e) {
      throw Error("corrupt decision at line " + std::to_string(line_no) +
                  " of " + path.string() + ": " + e.what());
    }
  }
  return out;
}

std::map<std::string, Decision> LiveDecisions(
    std::span<const AnnotationDecision> history) {
  std::map<std::string, Decision> live;
  for (const auto& d : history) live[d.candidate_key] = d.decision;
  return live;
}

std::string NowIso8601() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      now.time_since_epoch()) %
                  1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec, static_cast<int>(ms.count()));
  return buf;
}

}  // namespace dekit
