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

#include "barcode/service.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <optional>

#include <spdlog/spdlog.h>

#include "httplib.h"

namespace barcode {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

HttpReply JsonReply(const ordered_json& j, int status = 200) {
  return {status, j.dump() + "\n", {}};
}

std::string UtcNow() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json ParseBody(const std::string& body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded()) throw ValidationError("request body is not valid JSON");
  if (!j.is_object()) throw ValidationError("request body must be a JSON object");
  return j;
}

template <typename T>
T Field(const json& j, const std::string& key, bool (json::*is)() const, const char* kind,
        std::optional<T> fallback = std::nullopt) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    if (fallback) return *fallback;
    throw ValidationError("missing field '" + key + "'");
  }
  if (!((*it).*is)()) throw ValidationError("field '" + key + "' must be " + kind);
  return it->get<T>();
}

}  // namespace

HttpReply ErrorReply(int status, const std::string& code, const std::string& message) {
  ordered_json j;
  j["error"]["code"] = code;
  j["error"]["message"] = message;
  return JsonReply(j, status);
}

Service::Service(Engine& engine, std::filesystem::path feedback_log)
    : engine_(engine), feedback_log_(std::move(feedback_log)) {}

HttpReply Service::Health() const {
  ordered_json j;
  j["status"] = "ok";
  j["manifest_hash"] = engine_.manifest().content_hash;
  j["sentences"] = engine_.corpus().sentences().size();
  j["phrases"] = engine_.phrases().size();
  return JsonReply(j);
}

HttpReply Service::Query(const std::string& body) {
  barcode::Query q;
  bool timing = false;
  try {
    json j = ParseBody(body);
    const auto& cfg = engine_.config();
    q.text = Field<std::string>(j, "query", &json::is_string, "a string");
    long long k = Field<long long>(j, "k", &json::is_number_integer, "an integer",
                                   cfg.GetInt("ranking.default_k"));
    long long max_k = cfg.GetInt("ranking.max_k");
    q.k = static_cast<int>(std::clamp<long long>(k, 1, max_k));
    q.use_filtered = Field<bool>(j, "filtered", &json::is_boolean, "a boolean", false);
    timing = Field<bool>(j, "timing", &json::is_boolean, "a boolean", false);
    if (Trim(q.text).empty()) throw ValidationError("query text is empty");
  } catch (const ValidationError& e) {
    return ErrorReply(400, "invalid_request", e.what());
  }

  auto start = std::chrono::steady_clock::now();
  RankResponse r;
  try {
    r = engine_.Query(q);
  } catch (const ValidationError& e) {
    return ErrorReply(400, "invalid_request", e.what());
  } catch (const ProviderError& e) {
    return ErrorReply(502, "provider_error", e.what());
  }
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                  .count();
  ordered_json out = ResponseToJson(q, r);
  if (timing) out["timing_ms"] = ms;
  HttpReply reply = JsonReply(out);
  char dur[64];
  std::snprintf(dur, sizeof dur, "rank;dur=%.3f", ms);
  reply.headers.emplace_back("Server-Timing", dur);
  return reply;
}

HttpReply Service::Sentence(const std::string& sentence_id) const {
  const auto* s = engine_.corpus().FindSentence(sentence_id);
  if (!s) return ErrorReply(404, "not_found", "unknown sentence_id '" + sentence_id + "'");
  ordered_json j;
  j["sentence_id"] = s->sentence_id;
  j["text"] = s->text;
  j["char_offset"] = s->char_offset;
  j["organism"] = s->organism;
  j["article_id"] = s->article_id;
  if (const auto* a = engine_.corpus().FindArticle(s->article_id)) {
    j["title"] = a->title;
    j["source_url"] = a->source_url;
  }
  auto bio = engine_.BioScore(sentence_id);
  j["bio_score"] = bio ? json(*bio) : json(nullptr);
  j["phrases"] = ordered_json::array();
  for (const auto* p : engine_.PhrasesOf(sentence_id)) {
    j["phrases"].push_back(extract::PhraseToJson(*p));
  }
  return JsonReply(j);
}

HttpReply Service::Feedback(const std::string& body) {
  ordered_json row;
  try {
    json j = ParseBody(body);
    row["query"] = Field<std::string>(j, "query", &json::is_string, "a string");
    std::string sid = Field<std::string>(j, "sentence_id", &json::is_string, "a string");
    if (!engine_.corpus().FindSentence(sid)) {
      throw ValidationError("unknown sentence_id '" + sid + "'");
    }
    row["sentence_id"] = sid;
    long long rating = Field<long long>(j, "rating", &json::is_number_integer, "an integer");
    if (rating < 0 || rating > 2) throw ValidationError("rating must be 0, 1 or 2");
    row["rating"] = rating;
    row["known"] = Field<bool>(j, "known", &json::is_boolean, "a boolean", false);
    row["note"] = Field<std::string>(j, "note", &json::is_string, "a string", std::string());
  } catch (const ValidationError& e) {
    return ErrorReply(400, "invalid_request", e.what());
  }
  row["manifest_hash"] = engine_.manifest().content_hash;
  row["received_at"] = UtcNow();
  {
    std::lock_guard<std::mutex> lock(feedback_mu_);
    std::ofstream out(feedback_log_, std::ios::app);
    if (!out) return ErrorReply(500, "storage_error", "cannot open feedback log");
    out << row.dump() << '\n';
    out.flush();
    if (!out) return ErrorReply(500, "storage_error", "cannot write feedback log");
  }
  return JsonReply({{"status", "recorded"}}, 201);
}

HttpReply Service::Config() const {
  ordered_json j;
  j["runtime"] = engine_.config().Snapshot();
  j["build"] = engine_.build_config();
  j["manifest"] = engine_.manifest().ToJson();
  return JsonReply(j);
}

// --- HTTP -------------------------------------------------------------------

struct HttpServer::Impl {
  httplib::Server server;
};

namespace {

void Send(const HttpReply& r, httplib::Response& res) {
  res.status = r.status;
  for (const auto& [k, v] : r.headers) res.set_header(k, v);
  res.set_content(r.body, "application/json");
}

}  // namespace

HttpServer::HttpServer(Service& service, int threads, std::string cors_origin)
    : impl_(std::make_unique<Impl>()) {
  auto& s = impl_->server;
  s.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  s.Get("/health", [&service](const httplib::Request&, httplib::Response& res) {
    Send(service.Health(), res);
  });
  s.Post("/query", [&service](const httplib::Request& req, httplib::Response& res) {
    Send(service.Query(req.body), res);
  });
  s.Get(R"(/sentence/(.+))", [&service](const httplib::Request& req, httplib::Response& res) {
    Send(service.Sentence(req.matches[1]), res);
  });
  s.Post("/feedback", [&service](const httplib::Request& req, httplib::Response& res) {
    Send(service.Feedback(req.body), res);
  });
  s.Get("/config", [&service](const httplib::Request&, httplib::Response& res) {
    Send(service.Config(), res);
  });
  if (!cors_origin.empty()) {
    s.set_post_routing_handler([cors_origin](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Origin", cors_origin);
    });
    s.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });
  }
  s.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    std::string code = res.status == 404 ? "not_found" : "http_error";
    Send(ErrorReply(res.status, code, req.method + " " + req.path), res);
  });
  s.set_exception_handler(
      [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string what = "internal error";
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          what = e.what();
        } catch (...) {
        }
        spdlog::error("request failed: {}", what);
        Send(ErrorReply(500, "internal", what), res);
      });
}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::Bind(const std::string& host, int port) {
  auto& s = impl_->server;
  int bound = port == 0 ? s.bind_to_any_port(host) : (s.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::Listen() { impl_->server.listen_after_bind(); }

void HttpServer::Stop() {
  if (impl_) impl_->server.stop();
}

void Serve(const std::filesystem::path& index_dir, const barcode::Config& cfg) {
  auto engine = Engine::Open(index_dir, cfg);
  Service service(*engine, cfg.GetPath("service.feedback_log"));
  HttpServer server(service, static_cast<int>(cfg.GetInt("service.threads")),
                    cfg.GetString("service.cors_origin"));
  std::string host = cfg.GetString("service.host");
  int port = server.Bind(host, static_cast<int>(cfg.GetInt("service.port")));
  spdlog::info("serving {} on http://{}:{} (manifest {})", index_dir.string(), host, port,
               engine->manifest().content_hash.substr(0, 12));
  server.Listen();
}

}  // namespace barcode
