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

#ifndef DEKIT_MT_CLIENT_H_
#define DEKIT_MT_CLIENT_H_

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dekit/error.h"

namespace dekit {

struct BackendConfig {
  std::string endpoint;  // e.g. http://127.0.0.1:5000/translate
  std::string src_lang = "zh";
  std::string tgt_lang = "en";
  std::size_t batch_size = 16;
  std::chrono::milliseconds timeout{30000};
  int max_retries = 2;
  std::size_t max_parallel = 4;
  // Delay before retry k (0-based) is backoff_base * 2^k.
  std::chrono::milliseconds backoff_base{200};
  std::string bearer_token;  // Sent as "Authorization: Bearer ..." if set.
  // When set, translations are cached on disk keyed by
  // (endpoint, src, tgt, text).
  std::optional<std::filesystem::path> cache_dir;

  void Validate() const;
};

struct TranslationResult {
  std::string source;
  std::string translation;
  std::string backend_id;
  std::chrono::microseconds latency{0};
};

// Raised when a batch fails after all retries or the server violates the
// wire protocol.
class TranslationError : public Error {
 public:
  TranslationError(const std::string& what, std::size_t batch_index)
      : Error(what), batch_index_(batch_index) {}
  std::size_t batch_index() const { return batch_index_; }

 private:
  std::size_t batch_index_;
};

class TranslationBackend {
 public:
  virtual ~TranslationBackend() = default;

  virtual std::string id() const = 0;

  // Results are order-aligned with `texts`. All-or-nothing: throws rather
  // than returning a partial result. Throws on an empty input.
  virtual std::vector<TranslationResult> TranslateBatch(
      std::span<const std::string> texts) = 0;

  std::vector<std::string> Translate(std::span<const std::string> texts);
};

// Deterministic in-process backend over a `source<TAB>translation` file.
// Unknown inputs translate to "<untranslated:{input}>".
class MockBackend : public TranslationBackend {
 public:
  MockBackend(std::map<std::string, std::string, std::less<>> dictionary,
              std::string id);

  static std::unique_ptr<MockBackend> Load(const std::filesystem::path& path);

  std::string id() const override { return id_; }
  std::vector<TranslationResult> TranslateBatch(
      std::span<const std::string> texts) override;

  std::string Lookup(std::string_view text) const;
  std::size_t size() const { return dictionary_.size(); }

 private:
  std::map<std::string, std::string, std::less<>> dictionary_;
  std::string id_;
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

using HttpHeaders = std::vector<std::pair<std::string, std::string>>;

// One POST. Implementations throw dekit::Error on transport failure
// (connection refused, timeout); any received response is returned as-is.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse Post(const std::string& url, const std::string& body,
                            const HttpHeaders& headers,
                            std::chrono::milliseconds timeout) = 0;
};

// cpp-httplib backed transport. Plain http:// only.
std::shared_ptr<HttpTransport> MakeHttpTransport();

// {"src":"zh","tgt":"en","texts":[...]}
std::string EncodeTranslateRequest(std::string_view src, std::string_view tgt,
                                   std::span<const std::string> texts);
// {"translations":[...]} with exactly `expected` strings.
std::vector<std::string> DecodeTranslateResponse(std::string_view body,
                                                 std::size_t expected);

// Append-only on-disk translation cache (`translations.tsv` in the cache
// directory). Thread-safe.
class TranslationCache {
 public:
  explicit TranslationCache(std::filesystem::path dir);

  std::optional<std::string> Get(const std::string& key) const;
  void Put(const std::string& key, const std::string& translation);

  static std::string Key(std::string_view endpoint, std::string_view src,
                         std::string_view tgt, std::string_view text);

 private:
  std::filesystem::path file_;
  mutable std::mutex mu_;
  std::map<std::string, std::string> entries_;
};

// Batched JSON-over-HTTP client. Batches of at most batch_size texts are
// sent with at most max_parallel in flight; non-200 responses and transport
// errors are retried up to max_retries times with exponential backoff.
class HttpBackend : public TranslationBackend {
 public:
  explicit HttpBackend(BackendConfig config,
                       std::shared_ptr<HttpTransport> transport = nullptr);

  std::string id() const override { return "http:" + config_.endpoint; }
  std::vector<TranslationResult> TranslateBatch(
      std::span<const std::string> texts) override;

  const BackendConfig& config() const { return config_; }

 private:
  std::vector<std::string> SendBatch(std::span<const std::string> texts,
                                     std::size_t batch_index);

  BackendConfig config_;
  std::shared_ptr<HttpTransport> transport_;
  std::unique_ptr<TranslationCache> cache_;
};

// Parses "mock:<dict-path>" or "http:<url>". `base` supplies every setting
// except the endpoint.
std::unique_ptr<TranslationBackend> MakeBackend(std::string_view spec,
                                                BackendConfig base = {});

}  // namespace dekit

#endif  // DEKIT_MT_CLIENT_H_
