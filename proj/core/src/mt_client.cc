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

#include "dekit/mt_client.h"

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace dekit {
namespace {

using json = nlohmann::ordered_json;

std::string UntranslatedMarker(std::string_view text) {
  return "<untranslated:" + std::string(text) + ">";
}

void RequireNonEmpty(std::span<const std::string> texts) {
  if (texts.empty()) throw Error("texts must be non-empty");
}

std::string EscapeCacheField(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string UnescapeCacheField(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 == s.size()) {
      out += s[i];
      continue;
    }
    switch (s[++i]) {
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default: out += s[i];
    }
  }
  return out;
}

}  // namespace

void BackendConfig::Validate() const {
  if (batch_size < 1) throw Error("batch_size must be >= 1");
  if (max_parallel < 1) throw Error("max_parallel must be >= 1");
  if (max_retries < 0) throw Error("max_retries must be >= 0");
}

std::vector<std::string> TranslationBackend::Translate(
    std::span<const std::string> texts) {
  std::vector<std::string> out;
  out.reserve(texts.size());
  for (auto& r : TranslateBatch(texts)) out.push_back(std::move(r.translation));
  return out;
}

MockBackend::MockBackend(
    std::map<std::string, std::string, std::less<>> dictionary, std::string id)
    : dictionary_(std::move(dictionary)), id_(std::move(id)) {}

std::unique_ptr<MockBackend> MockBackend::Load(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open mock dictionary " + path.string());
  std::map<std::string, std::string, std::less<>> dict;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 ||
        line.find('\t', tab + 1) != std::string::npos) {
      throw Error("malformed mock dictionary line " + std::to_string(line_no) +
                  " of " + path.string());
    }
    std::string source = line.substr(0, tab);
    std::string target = line.substr(tab + 1);
    auto [it, inserted] = dict.emplace(source, target);
    if (!inserted && it->second != target) {
      throw Error("conflicting mock dictionary entry at line " +
                  std::to_string(line_no) + " of " + path.string());
    }
  }
  return std::make_unique<MockBackend>(std::move(dict),
                                       "mock:" + path.filename().string());
}

std::string MockBackend::Lookup(std::string_view text) const {
  auto it = dictionary_.find(text);
  return it == dictionary_.end() ? UntranslatedMarker(text) : it->second;
}

std::vector<TranslationResult> MockBackend::TranslateBatch(
    std::span<const std::string> texts) {
  RequireNonEmpty(texts);
  std::vector<TranslationResult> out;
  out.reserve(texts.size());
  for (const auto& text : texts) {
    out.push_back(TranslationResult{text, Lookup(text), id_, {}});
  }
  return out;
}

std::string EncodeTranslateRequest(std::string_view src, std::string_view tgt,
                                   std::span<const std::string> texts) {
  json j;
  j["src"] = std::string(src);
  j["tgt"] = std::string(tgt);
  j["texts"] = json::array();
  for (const auto& t : texts) j["texts"].push_back(t);
  return j.dump();
}

std::vector<std::string> DecodeTranslateResponse(std::string_view body,
                                                 std::size_t expected) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception& e) {
    throw Error(std::string("protocol error: response is not JSON: ") +
                e.what());
  }
  if (!j.is_object() || !j.contains("translations") ||
      !j["translations"].is_array()) {
    throw Error("protocol error: missing \"translations\" array");
  }
  const auto& arr = j["translations"];
  if (arr.size() != expected) {
    throw Error("protocol error: expected " + std::to_string(expected) +
                " translations, got " + std::to_string(arr.size()));
  }
  std::vector<std::string> out;
  out.reserve(expected);
  for (const auto& t : arr) {
    if (!t.is_string()) throw Error("protocol error: non-string translation");
    out.push_back(t.get<std::string>());
  }
  return out;
}

TranslationCache::TranslationCache(std::filesystem::path dir)
    : file_(dir / "translations.tsv") {
  std::filesystem::create_directories(dir);
  std::ifstream in(file_, std::ios::binary);
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) continue;  // Torn trailing write.
    entries_[line.substr(0, tab)] = UnescapeCacheField(line.substr(tab + 1));
  }
}

std::optional<std::string> TranslationCache::Get(const std::string& key) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void TranslationCache::Put(const std::string& key,
                           const std::string& translation) {
  std::lock_guard lock(mu_);
  if (!entries_.emplace(key, translation).second) return;
  std::ofstream out(file_, std::ios::binary | std::ios::app);
  out << key << '\t' << EscapeCacheField(translation) << '\n';
}

std::string TranslationCache::Key(std::string_view endpoint,
                                  std::string_view src, std::string_view tgt,
                                  std::string_view text) {
  // FNV-1a, 64-bit, over the NUL-joined fields.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto mix = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h *= 0x100000001b3ULL;  // NUL separator byte.
  };
  mix(endpoint);
  mix(src);
  mix(tgt);
  mix(text);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

HttpBackend::HttpBackend(BackendConfig config,
                         std::shared_ptr<HttpTransport> transport)
    : config_(std::move(config)), transport_(std::move(transport)) {
  config_.Validate();
  if (config_.endpoint.empty()) throw Error("HTTP backend needs an endpoint");
  if (!transport_) transport_ = MakeHttpTransport();
  if (config_.cache_dir) {
    cache_ = std::make_unique<TranslationCache>(*config_.cache_dir);
  }
}

std::vector<std::string> HttpBackend::SendBatch(
    std::span<const std::string> texts, std::size_t batch_index) {
  const std::string body =
      EncodeTranslateRequest(config_.src_lang, config_.tgt_lang, texts);
  HttpHeaders headers = {{"Content-Type", "application/json"}};
  if (!config_.bearer_token.empty()) {
    headers.emplace_back("Authorization", "Bearer " + config_.bearer_token);
  }
  std::string last_error;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(config_.backoff_base * (1 << (attempt - 1)));
    }
    HttpResponse response;
    try {
      response = transport_->Post(config_.endpoint, body, headers,
                                  config_.timeout);
    } catch (const Error& e) {
      last_error = e.what();
      continue;
    }
    if (response.status != 200) {
      last_error = "HTTP status " + std::to_string(response.status);
      continue;
    }
    try {
      return DecodeTranslateResponse(response.body, texts.size());
    } catch (const Error& e) {
      throw TranslationError(
          "batch " + std::to_string(batch_index) + ": " + e.what(),
          batch_index);
    }
  }
  throw TranslationError("batch " + std::to_string(batch_index) + " failed after " +
                             std::to_string(config_.max_retries + 1) +
                             " attempts: " + last_error,
                         batch_index);
}

std::vector<TranslationResult> HttpBackend::TranslateBatch(
    std::span<const std::string> texts) {
  RequireNonEmpty(texts);
  const std::string backend_id = id();
  std::vector<TranslationResult> results(texts.size());
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    results[i].source = texts[i];
    results[i].backend_id = backend_id;
    if (cache_) {
      if (auto hit = cache_->Get(TranslationCache::Key(
              config_.endpoint, config_.src_lang, config_.tgt_lang,
              texts[i]))) {
        results[i].translation = std::move(*hit);
        continue;
      }
    }
    pending.push_back(i);
  }
  if (pending.empty()) return results;

  const std::size_t num_batches =
      (pending.size() + config_.batch_size - 1) / config_.batch_size;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mu;
  std::optional<TranslationError> first_error;

  const auto worker = [&] {
    while (!failed.load()) {
      const std::size_t b = next.fetch_add(1);
      if (b >= num_batches) return;
      const std::size_t begin = b * config_.batch_size;
      const std::size_t end =
          std::min(pending.size(), begin + config_.batch_size);
      std::vector<std::string> batch;
      for (std::size_t k = begin; k < end; ++k) {
        batch.push_back(texts[pending[k]]);
      }
      const auto started = std::chrono::steady_clock::now();
      try {
        auto translations = SendBatch(batch, b);
        const auto latency =
            std::chrono::duration_cast<std::chrono::microseconds>(
                std::chrono::steady_clock::now() - started);
        for (std::size_t k = begin; k < end; ++k) {
          auto& r = results[pending[k]];
          r.translation = std::move(translations[k - begin]);
          r.latency = latency;
        }
      } catch (const TranslationError& e) {
        std::lock_guard lock(error_mu);
        if (!first_error || e.batch_index() < first_error->batch_index()) {
          first_error.emplace(e);
        }
        failed.store(true);
        return;
      }
    }
  };

  const std::size_t workers = std::min(config_.max_parallel, num_batches);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(worker);
  }
  if (first_error) throw *first_error;

  if (cache_) {
    for (std::size_t i : pending) {
      cache_->Put(TranslationCache::Key(config_.endpoint, config_.src_lang,
                                        config_.tgt_lang, texts[i]),
                  results[i].translation);
    }
  }
  return results;
}

std::unique_ptr<TranslationBackend> MakeBackend(std::string_view spec,
                                                BackendConfig base) {
  if (spec.starts_with("mock:")) {
    return MockBackend::Load(std::string(spec.substr(5)));
  }
  if (spec.starts_with("http:")) {
    std::string_view url = spec.substr(5);
    // Accept both "http:http://host/path" and "http://host/path".
    base.endpoint = url.starts_with("//") ? "http:" + std::string(url)
                                          : std::string(url);
    return std::make_unique<HttpBackend>(std::move(base));
  }
  throw Error("backend must be mock:<dict-path> or http:<url>, got '" +
              std::string(spec) + "'");
}

}  // namespace dekit
