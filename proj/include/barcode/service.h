// Copyright 2026 The BARcode Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BARCODE_SERVICE_H_
#define BARCODE_SERVICE_H_

#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "barcode/bundle.h"

namespace barcode {

struct HttpReply {
  int status = 200;
  std::string body;
  std::vector<std::pair<std::string, std::string>> headers;
};

// {"error": {"code": ..., "message": ...}}
HttpReply ErrorReply(int status, const std::string& code, const std::string& message);

// Endpoint handlers over a loaded engine. Everything but the feedback log is
// read-only, so handlers may run concurrently.
//
//   GET  /health              status and manifest hash
//   POST /query               {query, k?, filtered?, timing?}
//   GET  /sentence/{id}       sentence with article provenance and phrases
//   POST /feedback            {query, sentence_id, rating 0-2, known?, note?}
//   GET  /config              runtime and build settings, manifest
//
// Query bodies carry no timing unless the request sets "timing": true, so
// identical requests get identical bodies; the Server-Timing header always
// has the ranking time.
class Service {
 public:
  Service(Engine& engine, std::filesystem::path feedback_log);

  HttpReply Health() const;
  HttpReply Query(const std::string& body);
  HttpReply Sentence(const std::string& sentence_id) const;
  HttpReply Feedback(const std::string& body);
  HttpReply Config() const;

  const std::filesystem::path& feedback_log() const { return feedback_log_; }

 private:
  Engine& engine_;
  std::filesystem::path feedback_log_;
  std::mutex feedback_mu_;
};

// HTTP/1.1 front end for a Service.
class HttpServer {
 public:
  HttpServer(Service& service, int threads, std::string cors_origin = "");
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Port 0 binds any free port. Returns the bound port.
  int Bind(const std::string& host, int port);
  // Blocks until Stop.
  void Listen();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Opens the bundle (refusing unsealed or tampered ones) and serves it with
// the service.* settings until the process is stopped.
void Serve(const std::filesystem::path& index_dir, const barcode::Config& cfg);

}  // namespace barcode

#endif  // BARCODE_SERVICE_H_
