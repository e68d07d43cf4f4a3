// Copyright 2026 The STT Toolkit Authors.
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

#ifndef STT_SERVICE_H_
#define STT_SERVICE_H_

#include <memory>
#include <string>
#include <string_view>

#include "stt/config.h"

namespace httplib {
class Server;
}

namespace stt {

struct HttpReply {
  int status = 200;
  std::string body;
};

// Stateless reward verifier exposed over HTTP:
//   POST /v1/score       one ScoreRequest object, or an array of them
//   POST /v1/descriptor  {object_name?, samples:[{t, box}], config?}
//   GET  /healthz        {status, version, config_digest}
//
// The Handle* methods hold all request logic and can be called directly; the
// server only routes bodies to them.
class ScoringService {
 public:
  explicit ScoringService(ToolkitConfig config);
  ~ScoringService();

  ScoringService(const ScoringService&) = delete;
  ScoringService& operator=(const ScoringService&) = delete;

  HttpReply HandleScore(std::string_view body) const;
  HttpReply HandleDescriptor(std::string_view body) const;
  HttpReply HandleHealth() const;

  const std::string& config_digest() const { return digest_; }

  // Binds to `port` (0 picks a free one) and returns the bound port, or -1.
  int Bind(const std::string& host, int port);
  // Serves until Stop() is called. Requires a successful Bind.
  bool Serve();
  void Stop();

 private:
  ToolkitConfig config_;
  std::string digest_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace stt

#endif  // STT_SERVICE_H_
