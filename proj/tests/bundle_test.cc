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

#include "barcode/bundle.h"

#include <algorithm>

#include "bundle_fixture.h"
#include "doctest.h"

namespace barcode {
namespace {

namespace fs = std::filesystem;

using testing::FixtureConfig;
using testing::SharedBundle;

fs::path Articles() { return testing::FixtureArticles(); }

BuildReport Build(const fs::path& dir, const Config& cfg) {
  return testing::BuildFixtureBundle(dir, cfg);
}

std::vector<std::string> Ran(const BuildReport& r) {
  std::vector<std::string> out;
  for (const auto& s : r.stages) {
    if (!s.skipped) out.push_back(s.stage);
  }
  return out;
}

TEST_CASE("fixture build seals every stage and opens") {
  const auto& dir = SharedBundle();
  CHECK(IsSealed(dir));
  Manifest m = VerifyBundle(dir);
  CHECK(m.stages.size() == BuildStages().size());
  CHECK(m.files.count("embeddings.bin") == 1);
  CHECK(m.files.count("classifier.json") == 1);
  CHECK(m.files.count("manifest.json") == 0);
  CHECK(m.providers.at("embedding") == "builtin:hashed-lexical-v1/d256");

  auto engine = Engine::Open(dir, FixtureConfig());
  CHECK(engine->corpus().sentences().size() == 20);
  CHECK(!engine->phrases().empty());
  auto r = engine->Query({"avoid sinking", 5, false});
  CHECK(r.status == "ok");
  CHECK(r.results.size() <= 5);
  CHECK(!r.results.empty());
  auto b = engine->Baseline({"avoid sinking", 5, false});
  CHECK(!b.results.empty());
  for (const auto& res : r.results) {
    CHECK(engine->BioScore(res.sentence_id).has_value());
    auto ps = engine->PhrasesOf(res.sentence_id);
    CHECK(std::any_of(ps.begin(), ps.end(), [&](const auto* p) {
      return p->phrase_id == res.matched_phrase.phrase_id;
    }));
  }
}

TEST_CASE("rebuild is reproducible and resumable") {
  auto dir = testing::TempDir("bundle_rebuild");
  Config cfg = FixtureConfig();
  auto first = Build(dir, cfg);
  CHECK(Ran(first) == BuildStages());
  CHECK(first.content_hash == VerifyBundle(SharedBundle()).content_hash);

  auto again = Build(dir, cfg);
  CHECK(Ran(again).empty());
  CHECK(again.content_hash == first.content_hash);

  // A lost marker reruns that stage and everything after it.
  fs::remove(dir / "stages/embed.done");
  auto resumed = Build(dir, cfg);
  CHECK(Ran(resumed) == std::vector<std::string>{"embed", "classifier"});
  CHECK(resumed.content_hash == first.content_hash);

  // A changed setting reruns from its stage.
  cfg.Set("bio.tau", "0.6");
  auto retuned = Build(dir, cfg);
  CHECK(Ran(retuned) == std::vector<std::string>{"bio", "embed", "classifier"});
  CHECK(retuned.content_hash != first.content_hash);
  fs::remove_all(dir);
}

TEST_CASE("stage order is enforced") {
  auto dir = testing::TempDir("bundle_order");
  Config cfg = FixtureConfig();
  ProviderSet providers = MakeProviders(cfg);
  BundleBuilder builder(dir, cfg, providers);
  CHECK_THROWS_AS(builder.Extract(), StoreError);
  builder.Ingest(Articles());
  CHECK_THROWS_AS(builder.ScoreBio(), StoreError);
  CHECK_THROWS_AS(Seal(dir), StoreError);
  fs::remove_all(dir);
}

TEST_CASE("tampered or unsealed bundles are rejected") {
  auto dir = testing::TempDir("bundle_tamper");
  fs::copy(SharedBundle(), dir, fs::copy_options::recursive);
  CHECK_NOTHROW(VerifyBundle(dir));

  std::string bin = ReadFile(dir / "embeddings.bin");
  std::string flipped = bin;
  flipped[flipped.size() - 1] ^= 0x01;
  WriteFile(dir / "embeddings.bin", flipped);
  CHECK_THROWS_WITH_AS(VerifyBundle(dir), doctest::Contains("manifest mismatch"), StoreError);
  CHECK_THROWS_AS(Engine::Open(dir, FixtureConfig()), StoreError);
  WriteFile(dir / "embeddings.bin", bin);
  CHECK_NOTHROW(VerifyBundle(dir));

  fs::remove(dir / "bio/scores.tsv");
  CHECK_THROWS_AS(VerifyBundle(dir), StoreError);
  fs::copy_file(SharedBundle() / "bio/scores.tsv", dir / "bio/scores.tsv");

  fs::remove(dir / "manifest.json");
  CHECK_FALSE(IsSealed(dir));
  CHECK_THROWS_WITH_AS(Engine::Open(dir, FixtureConfig()), doctest::Contains("not sealed"),
                       StoreError);
  fs::remove_all(dir);
}

TEST_CASE("engine refuses a different embedding model") {
  Config cfg = FixtureConfig();
  cfg.Set("providers.embedding_dim", "128");
  CHECK_THROWS_AS(Engine::Open(SharedBundle(), cfg), ConfigError);
}

TEST_CASE("http providers need a url") {
  Config cfg = FixtureConfig();
  cfg.Set("providers.embedding", "http");
  CHECK_THROWS_AS(MakeProviders(cfg), ConfigError);
}

}  // namespace
}  // namespace barcode
