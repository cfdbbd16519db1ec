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

#include "barcode/cli.h"

#include <cstdlib>
#include <sstream>

#include "barcode/common.h"
#include "doctest.h"
#include "nlohmann/json.hpp"
#include "test_util.h"

namespace barcode {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Run {
  int code = -1;
  std::string out;
  std::string err;
  json Json() const { return json::parse(out); }
};

std::string ConfigPath() { return (testing::SourceDir() / "barcode.toml").string(); }

Run Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "barcode");
  std::ostringstream out, err;
  Run r;
  r.code = RunCli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

Run CliCfg(std::vector<std::string> args) {
  args.insert(args.begin(), {"--config", ConfigPath()});
  return Cli(std::move(args));
}

json EffectiveConfig(const std::string& err) {
  const std::string tag = "effective config: ";
  auto pos = err.find(tag);
  REQUIRE(pos != std::string::npos);
  auto end = err.find('\n', pos);
  return json::parse(err.substr(pos + tag.size(), end - pos - tag.size()));
}

const fs::path& CliBundle() {
  static const fs::path dir = [] {
    auto d = testing::TempDir("cli_index");
    auto r = CliCfg({"--index", d.string(), "build-index", "--input",
                     (testing::SourceDir() / "fixtures/corpus/articles.jsonl").string()});
    REQUIRE(r.code == 0);
    return d;
  }();
  return dir;
}

TEST_CASE("usage errors exit 2 with help text") {
  auto none = Cli({});
  CHECK(none.code == kExitUsage);
  CHECK(none.err.find("Usage") != std::string::npos);
  CHECK(Cli({"--bogus"}).code == kExitUsage);
  CHECK(Cli({"query", "--nope", "x"}).code == kExitUsage);
  auto no_text = Cli({"query", "--index", "/tmp"});
  CHECK(no_text.code == kExitUsage);
  CHECK(no_text.err.find("Usage: query") != std::string::npos);
  CHECK(Cli({"evaluate", "--run", "a.tsv"}).code == kExitUsage);
  CHECK(Cli({"query", "--k", "many", "x"}).code == kExitUsage);
  CHECK(CliCfg({"extract-phrases"}).code == kExitUsage);  // no --index
  auto help = Cli({"--help"});
  CHECK(help.code == kExitOk);
  CHECK(help.out.find("build-index") != std::string::npos);
}

TEST_CASE("domain errors exit 1; --json reports them as JSON") {
  auto missing = CliCfg({"--json", "--index", "/nonexistent/idx", "query", "prevent sinking"});
  CHECK(missing.code == kExitDomainError);
  CHECK(missing.Json()["error"]["code"] == "store_error");
  CHECK(Cli({"--config", "/nonexistent.toml", "query", "--index", "x", "y"}).code ==
        kExitDomainError);
  CHECK(CliCfg({"--set", "bio.tau=2", "--index", "x", "query", "y"}).code == kExitDomainError);
}

TEST_CASE("config precedence: flags > env > file > defaults") {
  auto dir = testing::TempDir("cli_cfg");
  WriteFile(dir / "c.toml", "[bio]\ntau = 0.55\n[general]\nseed = 5\n");
  auto run = [&](std::vector<std::string> extra) {
    std::vector<std::string> args{"--config", (dir / "c.toml").string()};
    args.insert(args.end(), extra.begin(), extra.end());
    args.insert(args.end(), {"evaluate", "--run", "x", "--qrels", "y"});
    return EffectiveConfig(Cli(args).err);
  };
  auto file_only = run({});
  CHECK(file_only["bio"]["tau"] == 0.55);
  CHECK(file_only["general"]["seed"] == 5);
  CHECK(file_only["bio"]["window"] == 5);  // default
  setenv("BARCODE_BIO_TAU", "0.7", 1);
  CHECK(run({})["bio"]["tau"] == 0.7);
  auto flagged = run({"--tau", "0.6", "--seed", "9"});
  CHECK(flagged["bio"]["tau"] == 0.6);
  CHECK(flagged["general"]["seed"] == 9);
  unsetenv("BARCODE_BIO_TAU");
  fs::remove_all(dir);
}

TEST_CASE("pipeline subcommands one stage at a time") {
  auto dir = testing::TempDir("cli_stages");
  std::string idx = dir.string();
  auto articles = (testing::SourceDir() / "fixtures/corpus/articles.jsonl").string();
  auto ingest = CliCfg({"--json", "--index", idx, "ingest", articles});
  REQUIRE(ingest.code == 0);
  CHECK(ingest.Json()["summary"]["sentences"] == 20);
  auto extract = CliCfg({"--json", "--index", idx, "extract-phrases"});
  REQUIRE(extract.code == 0);
  CHECK(extract.Json()["summary"]["phrases"].get<int>() > 0);
  auto bio = CliCfg({"--json", "--index", idx, "score-bio"});
  REQUIRE(bio.code == 0);
  CHECK(bio.Json()["stage"] == "bio");
  auto again = CliCfg({"--json", "--index", idx, "score-bio"});
  CHECK(again.Json()["skipped"] == true);
  auto build = CliCfg({"--json", "--index", idx, "build-index"});
  REQUIRE(build.code == 0);
  json j = build.Json();
  CHECK(j["stages"][0]["skipped"] == true);
  CHECK(j["stages"][3]["skipped"] == false);
  CHECK(j["content_hash"].get<std::string>().size() == 64);
  fs::remove_all(dir);
}

TEST_CASE("query output and determinism") {
  std::string idx = CliBundle().string();
  auto table = CliCfg({"--index", idx, "query", "--k", "15", "collect water from humid air"});
  REQUIRE(table.code == 0);
  CHECK(table.out.find("organism") != std::string::npos);
  CHECK(table.out.find("phrase") != std::string::npos);

  auto a = CliCfg({"--json", "--index", idx, "query", "prevent sinking"});
  auto b = CliCfg({"--json", "--index", idx, "query", "prevent sinking"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  json j = a.Json();
  CHECK(j["k"] == 15);
  CHECK(j["results"].size() <= 15);
  CHECK(CliCfg({"--json", "--index", idx, "query", "--k", "500", "x y"}).Json()["k"] == 100);
  CHECK(CliCfg({"--json", "--index", idx, "query", "--filtered", "prevent sinking"})
            .Json()["filtered"] == true);
  auto bm25 = CliCfg({"--json", "--index", idx, "query", "--baseline", "prevent sinking"});
  CHECK(bm25.code == 0);
}

TEST_CASE("batch runs, evaluate and robustness") {
  std::string idx = CliBundle().string();
  auto dir = testing::TempDir("cli_eval");
  auto queries = (testing::SourceDir() / "data/queries/asknature.tsv").string();
  auto run_a = (dir / "barcode.run.tsv").string();
  auto run_b = (dir / "baseline.run.tsv").string();
  auto batch = CliCfg({"--json", "--index", idx, "query", "--queries", queries, "--out", run_a});
  REQUIRE(batch.code == 0);
  CHECK(batch.Json()["queries"] == 42);
  REQUIRE(CliCfg({"--index", idx, "query", "--baseline", "--queries", queries, "--out", run_b})
              .code == 0);

  // Judge the first result of every query relevant for both aspects.
  std::ostringstream qrels;
  for (const auto& line : ReadLines(run_a)) {
    auto f = Split(line, '\t');
    if (f.size() >= 3 && f[1] == "1") qrels << f[0] << '\t' << f[2] << "\t1\t1\n";
  }
  WriteFile(dir / "qrels.tsv", qrels.str());
  auto qrels_path = (dir / "qrels.tsv").string();

  auto table = CliCfg({"evaluate", "--run", run_a, "--run", run_b, "--qrels", qrels_path,
                       "--k", "7", "--k", "15"});
  REQUIRE(table.code == 0);
  CHECK(table.out.find("barcode.run") != std::string::npos);
  CHECK(table.out.find("Mann-Whitney") != std::string::npos);
  auto ev = CliCfg({"--json", "evaluate", "--run", run_a, "--qrels", qrels_path, "--k", "7"});
  REQUIRE(ev.code == 0);
  json rep = ev.Json()["reports"][0];
  CHECK(rep["n_queries"] == 42);

  auto two = CliCfg({"--json", "robustness", "--run", run_a, "--run", run_a});
  REQUIRE(two.code == 0);
  CHECK(two.Json()["mean_rbo"].get<double>() == doctest::Approx(1.0));
  auto para = CliCfg({"--json", "robustness", "--run", run_a, "--queries", queries});
  REQUIRE(para.code == 0);
  CHECK(para.Json()["n_pairs"] == 18);
  CHECK(CliCfg({"robustness", "--run", run_a}).code == kExitUsage);
  CHECK(CliCfg({"robustness", "--run", run_a, "--run", run_b, "--p", "1.5"}).code == kExitUsage);
  fs::remove_all(dir);
}

TEST_CASE("mine-patents reproduces the shipped lexicon") {
  auto dir = testing::TempDir("cli_mine");
  auto out = (dir / "problems.tsv").string();
  auto r = CliCfg({"--json", "mine-patents", "--out", out});
  REQUIRE(r.code == 0);
  CHECK(r.Json()["kept"].get<int>() > 0);
  CHECK(ReadFile(out) == ReadFile(testing::SourceDir() / "lexicon/problems.tsv"));
  fs::remove_all(dir);
}

TEST_CASE("train-classifier output is used by build-index and tied to its providers") {
  auto dir = testing::TempDir("cli_train");
  auto model = (dir / "relevance.json").string();
  auto r = CliCfg({"--json", "train-classifier", "--out", model});
  REQUIRE(r.code == 0);
  CHECK(r.Json()["n_holdout"].get<int>() > 0);
  CHECK(json::parse(ReadFile(model))["features_from"]["embedding"] ==
        "builtin:hashed-lexical-v1/d256");

  auto articles = (testing::SourceDir() / "fixtures/corpus/articles.jsonl").string();
  auto idx = (dir / "idx").string();
  auto built = CliCfg({"--json", "--set", "classifier.model=" + model, "--index", idx,
                       "build-index", "--input", articles});
  REQUIRE(built.code == 0);
  CHECK(built.Json()["stages"][4]["summary"]["source"] == "relevance.json");

  auto other = CliCfg({"--set", "classifier.model=" + model, "--set",
                       "providers.embedding_dim=64", "--index", (dir / "idx2").string(),
                       "build-index", "--input", articles});
  CHECK(other.code == kExitDomainError);
  CHECK(other.err.find("trained on") != std::string::npos);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace barcode
