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

#include <future>
#include <thread>

#include "bundle_fixture.h"
#include "doctest.h"
#include "httplib.h"

namespace barcode {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Fixture {
  Fixture()
      : log(testing::TempDir("feedback") / "feedback.jsonl"),
        engine(Engine::Open(testing::SharedBundle(), testing::FixtureConfig())),
        service(*engine, log) {}
  fs::path log;
  std::unique_ptr<Engine> engine;
  Service service;
};

json Body(const HttpReply& r) { return json::parse(r.body); }

void CheckError(const HttpReply& r, int status) {
  CHECK(r.status == status);
  json j = Body(r);
  REQUIRE(j.contains("error"));
  CHECK(j["error"]["code"].is_string());
  CHECK(j["error"]["message"].is_string());
}

std::size_t CountLines(const fs::path& p) {
  if (!fs::exists(p)) return 0;
  std::size_t n = 0;
  for (const auto& line : ReadLines(p)) n += !line.empty();
  return n;
}

TEST_CASE("health reports the manifest hash") {
  Fixture f;
  auto r = f.service.Health();
  CHECK(r.status == 200);
  CHECK(Body(r)["status"] == "ok");
  CHECK(Body(r)["manifest_hash"] == f.engine->manifest().content_hash);
}

TEST_CASE("query endpoint") {
  Fixture f;
  auto r = f.service.Query(R"({"query": "prevent sinking", "k": 15})");
  REQUIRE(r.status == 200);
  json j = Body(r);
  CHECK(j["k"] == 15);
  CHECK(j["filtered"] == false);
  CHECK(!j.contains("timing_ms"));
  CHECK(j["results"].size() <= 15);
  CHECK(!j["results"].empty());
  int expect = 1;
  for (const auto& res : j["results"]) CHECK(res["rank"] == expect++);
  CHECK(r.headers.size() == 1);
  CHECK(r.headers[0].first == "Server-Timing");

  CHECK(Body(f.service.Query(R"({"query": "prevent sinking"})"))["k"] == 15);
  CHECK(Body(f.service.Query(R"({"query": "prevent sinking", "k": 0})"))["k"] == 1);
  CHECK(Body(f.service.Query(R"({"query": "prevent sinking", "k": -4})"))["k"] == 1);
  CHECK(Body(f.service.Query(R"({"query": "prevent sinking", "k": 1000})"))["k"] == 100);
  CHECK(Body(f.service.Query(R"({"query": "prevent sinking", "k": 1})"))["results"].size() == 1);
  CHECK(Body(f.service.Query(R"({"query": "prevent sinking", "filtered": true})"))["filtered"] ==
        true);
  CHECK(Body(f.service.Query(R"({"query": "prevent sinking", "timing": true})"))
            .contains("timing_ms"));

  CheckError(f.service.Query("not json"), 400);
  CheckError(f.service.Query("[1]"), 400);
  CheckError(f.service.Query(R"({"k": 3})"), 400);
  CheckError(f.service.Query(R"({"query": "   "})"), 400);
  CheckError(f.service.Query(R"({"query": "x", "k": "3"})"), 400);
  CheckError(f.service.Query(R"({"query": "x", "k": 2.5})"), 400);
  CheckError(f.service.Query(R"({"query": "x", "filtered": 1})"), 400);
}

TEST_CASE("sentence endpoint carries provenance") {
  Fixture f;
  auto r = f.service.Sentence("pelican#0");
  REQUIRE(r.status == 200);
  json j = Body(r);
  CHECK(j["organism"] == "Pelican");
  CHECK(j["article_id"] == "pelican");
  CHECK(j["source_url"] == "https://en.wikipedia.org/wiki/Pelican");
  CHECK(j["bio_score"].is_number());
  CHECK(j["phrases"].is_array());
  CheckError(f.service.Sentence("nope#9"), 404);
}

TEST_CASE("feedback validation and log") {
  Fixture f;
  CheckError(f.service.Feedback(R"({"query": "q", "sentence_id": "pelican#0", "rating": 3})"),
             400);
  CheckError(f.service.Feedback(R"({"query": "q", "sentence_id": "pelican#0", "rating": -1})"),
             400);
  CheckError(f.service.Feedback(R"({"query": "q", "sentence_id": "pelican#0"})"), 400);
  CheckError(f.service.Feedback(R"({"query": "q", "sentence_id": "x#0", "rating": 1})"), 400);
  CheckError(f.service.Feedback(
                 R"({"query": "q", "sentence_id": "pelican#0", "rating": 1, "known": "no"})"),
             400);
  CHECK(CountLines(f.log) == 0);

  auto ok = f.service.Feedback(
      R"({"query": "stay afloat", "sentence_id": "pelican#0", "rating": 2, "known": true,
          "note": "air sacs"})");
  CHECK(ok.status == 201);
  auto lines = ReadLines(f.log);
  REQUIRE(lines.size() == 1);
  json row = json::parse(lines[0]);
  CHECK(row["rating"] == 2);
  CHECK(row["known"] == true);
  CHECK(row["note"] == "air sacs");
  CHECK(row["manifest_hash"] == f.engine->manifest().content_hash);

  // Concurrent appends stay whole lines.
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&f, t] {
      for (int i = 0; i < 25; ++i) {
        json body{{"query", "q" + std::to_string(t)},
                  {"sentence_id", "pelican#0"},
                  {"rating", i % 3},
                  {"note", std::string(200, 'a' + t)}};
        f.service.Feedback(body.dump());
      }
    });
  }
  for (auto& th : threads) th.join();
  lines = ReadLines(f.log);
  CHECK(lines.size() == 201);
  for (const auto& line : lines) CHECK_NOTHROW(json::parse(line));
}

TEST_CASE("config endpoint") {
  Fixture f;
  json j = Body(f.service.Config());
  CHECK(j["runtime"]["ranking"]["default_k"] == 15);
  CHECK(j["build"].contains("providers_resolved"));
  CHECK(j["manifest"]["content_hash"] == f.engine->manifest().content_hash);
}

TEST_CASE("http server: concurrent identical queries, routing, read-only bundle") {
  Fixture f;
  std::string before = VerifyBundle(testing::SharedBundle()).content_hash;
  HttpServer server(f.service, 4, "*");
  int port = server.Bind("127.0.0.1", 0);
  std::thread runner([&server] { server.Listen(); });

  auto client = [port] {
    httplib::Client c("127.0.0.1", port);
    c.set_read_timeout(60, 0);
    return c;
  };
  const std::string body = R"({"query": "collect water from humid air", "k": 10})";
  std::vector<std::future<std::string>> futures;
  for (int i = 0; i < 6; ++i) {
    futures.push_back(std::async(std::launch::async, [&] {
      auto c = client();
      auto res = c.Post("/query", body, "application/json");
      return res && res->status == 200 ? res->body : std::string("failed");
    }));
  }
  std::vector<std::string> bodies;
  for (auto& fu : futures) bodies.push_back(fu.get());
  CHECK(bodies[0] != "failed");
  for (const auto& b : bodies) CHECK(b == bodies[0]);

  auto c = client();
  auto health = c.Get("/health");
  REQUIRE(health);
  CHECK(health->status == 200);
  CHECK(health->get_header_value("Access-Control-Allow-Origin") == "*");
  auto sentence = c.Get("/sentence/pelican%230");
  REQUIRE(sentence);
  CHECK(sentence->status == 200);
  CHECK(json::parse(sentence->body)["sentence_id"] == "pelican#0");
  auto missing = c.Get("/nowhere");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  CHECK(json::parse(missing->body)["error"]["code"] == "not_found");
  auto q = c.Post("/query", body, "application/json");
  REQUIRE(q);
  CHECK(q->has_header("Server-Timing"));
  auto bad = c.Post("/feedback", R"({"query": "q", "sentence_id": "pelican#0", "rating": 3})",
                    "application/json");
  REQUIRE(bad);
  CHECK(bad->status == 400);

  server.Stop();
  runner.join();
  CHECK(VerifyBundle(testing::SharedBundle()).content_hash == before);
}

TEST_CASE("serve refuses an unsealed bundle") {
  auto dir = testing::TempDir("unsealed");
  fs::copy(testing::SharedBundle(), dir, fs::copy_options::recursive);
  fs::remove(dir / "manifest.json");
  CHECK_THROWS_AS(Serve(dir, testing::FixtureConfig()), StoreError);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace barcode
