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

#ifndef DEKIT_ANNOTATIONS_H_
#define DEKIT_ANNOTATIONS_H_

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dekit {

enum class Decision { kAccept, kReject };

std::string_view DecisionName(Decision d);
std::optional<Decision> ParseDecision(std::string_view name);

// One accept/reject judgement on a candidate. Stored one per line as
// {"candidate_key":..,"decision":"accept","annotator":..,"timestamp":..}.
struct AnnotationDecision {
  std::string candidate_key;
  Decision decision = Decision::kAccept;
  std::string annotator;
  std::string timestamp;  // ISO-8601, UTC.

  bool operator==(const AnnotationDecision&) const = default;
};

std::string DecisionToJson(const AnnotationDecision& d);
AnnotationDecision DecisionFromJson(std::string_view line);

// Replays a decisions JSONL file. A missing file is an empty history; a
// corrupt line is an error naming the line.
std::vector<AnnotationDecision> LoadDecisions(const std::filesystem::path& path);

// Latest decision per candidate key; later entries supersede earlier ones.
std::map<std::string, Decision> LiveDecisions(
    std::span<const AnnotationDecision> history);

// Current UTC time as YYYY-MM-DDTHH:MM:SS.mmmZ.
std::string NowIso8601();

}  // namespace dekit

#endif  // DEKIT_ANNOTATIONS_H_
