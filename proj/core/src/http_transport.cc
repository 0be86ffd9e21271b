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

// Kept separate so that httplib.h is compiled in as few translation units as
// possible.

#include "httplib.h"

#include "dekit/mt_client.h"

namespace dekit {
namespace {

class HttplibTransport : public HttpTransport {
 public:
  HttpResponse Post(const std::string& url, const std::string& body,
                    const HttpHeaders& headers,
                    std::chrono::milliseconds timeout) override {
    constexpr std::string_view kScheme = "http://";
    if (!std::string_view(url).starts_with(kScheme)) {
      throw Error("unsupported URL (only http:// is supported): " + url);
    }
    const std::size_t path_start = url.find('/', kScheme.size());
    const std::string host = url.substr(0, path_start);
    const std::string path =
        path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(host);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
    const auto usecs =
        std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());

    httplib::Headers h;
    std::string content_type = "application/json";
    for (const auto& [k, v] : headers) {
      if (k == "Content-Type") {
        content_type = v;
      } else {
        h.emplace(k, v);
      }
    }
    auto res = client.Post(path, h, body, content_type);
    if (!res) {
      throw Error("HTTP request to " + url +
                  " failed: " + httplib::to_string(res.error()));
    }
    return HttpResponse{res->status, res->body};
  }
};

}  // namespace

std::shared_ptr<HttpTransport> MakeHttpTransport() {
  return std::make_shared<HttplibTransport>();
}

}  // namespace dekit
