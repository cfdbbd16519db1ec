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

// Acceptance run: one PASS/FAIL/SKIP line per primary criterion. Exits 1
// when any criterion fails.
//
// Optional checks:
//   BARCODE_PROVIDER_URL + BARCODE_FAMOUS_CORPUS  famous-examples retrieval
//   BARCODE_REFERENCE_CORPUS                      sealed bundle built over the
//                                                 reference corpus (tau retention)

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/fmt/fmt.h>
#include <spdlog/spdlog.h>

#include "barcode/bio_filter.h"
#include "barcode/bundle.h"
#include "barcode/dep_pattern.h"
#include "barcode/evaluation.h"
#include "barcode/phrase_extraction.h"
#include "barcode/ranking.h"
#include "oracles.h"
#include "synthetic.h"
#include "table3_targets.h"

namespace barcode {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

enum class Status { kPass, kFail, kSkip };

struct Outcome {
  Status status;
  std::string detail;
};

Outcome Pass(std::string d) { return {Status::kPass, std::move(d)}; }
Outcome Fail(std::string d) { return {Status::kFail, std::move(d)}; }
Outcome Skip(std::string d) { return {Status::kSkip, std::move(d)}; }
Outcome Check(bool ok, std::string d) { return {ok ? Status::kPass : Status::kFail, std::move(d)}; }

fs::path Src() { return BARCODE_SOURCE_DIR; }

double Seconds(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

fs::path TempDir(const std::string& name) {
  auto dir = fs::temp_directory_path() /
             ("barcode_accept_" + name + "_" + std::to_string(std::random_device{}()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Config FixtureConfig() {
  Config cfg = Config::FromFile(Src() / "barcode.toml");
  return cfg;
}

std::vector<corpus::SentenceRecord> FixtureSentences() {
  BuiltinSegmenter seg;
  std::vector<corpus::SentenceRecord> out;
  for (const auto& a : corpus::ReadArticlesJsonl(Src() / "fixtures/corpus/articles.jsonl")) {
    auto recs = corpus::Segment(a, seg);
    out.insert(out.end(), recs.begin(), recs.end());
  }
  return out;
}

// ---- criteria ----------------------------------------------------------

// 250 random instances per metric, lists of at most 20 items.
Outcome MetricOracles() {
  constexpr int kInstances = 250;
  constexpr double kMetricTol = 1e-9, kPTol = 1e-6;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2026);
  std::map<std::string, int> bad;
  for (int t = 0; t < kInstances; ++t) {
    auto v = oracle::RandomBits(rng, rng() % 21, 0.4);
    int k = 1 + rng() % 20;
    std::size_t rel = std::count(v.begin(), v.end(), true) + rng() % 4;
    bad["P@k"] += std::fabs(eval::PrecisionAtK(v, k) - oracle::Precision(v, k)) > kMetricTol;
    bad["NDCG@k"] += std::fabs(eval::NdcgAtK(v, k, rel) - oracle::Ndcg(v, k, rel)) > kMetricTol;

    std::vector<std::string> universe;
    for (int i = 0; i < 30; ++i) universe.push_back("s" + std::to_string(i));
    std::shuffle(universe.begin(), universe.end(), rng);
    std::vector<std::string> a(universe.begin(), universe.begin() + rng() % 21);
    std::shuffle(universe.begin(), universe.end(), rng);
    std::vector<std::string> b(universe.begin(), universe.begin() + rng() % 21);
    double p = std::uniform_real_distribution<double>(0.05, 0.98)(rng);
    std::size_t depth = 1 + rng() % 20;
    bad["RBO"] += std::fabs(eval::Rbo(a, b, p, depth) - oracle::Rbo(a, b, p, depth)) > kMetricTol;

    std::size_t na = 1 + rng() % 6, nb = 1 + rng() % 6;
    int levels = 2 + rng() % 5;
    std::vector<double> xa(na), xb(nb);
    for (auto& x : xa) x = static_cast<double>(rng() % levels);
    for (auto& x : xb) x = static_cast<double>(rng() % levels);
    auto mw = eval::MannWhitneyU(xa, xb);
    bad["Mann-Whitney U"] += std::fabs(mw.u - oracle::MannWhitneyU(xa, xb)) > kMetricTol;
    bad["Mann-Whitney p"] +=
        !mw.exact || std::fabs(mw.p_value - oracle::MannWhitneyExactP(xa, xb)) > kPTol;

    eval::AnnotationMatrix m(1 + rng() % 20, std::vector<std::string>(2 + rng() % 6));
    int cats = 1 + rng() % 4;
    for (auto& row : m) {
      for (auto& cell : row) cell = "c" + std::to_string(rng() % cats);
    }
    bad["Fleiss kappa"] += std::fabs(eval::FleissKappa(m) - oracle::FleissKappa(m)) > kMetricTol;
  }
  const double secs = Seconds(t0);
  std::string failures;
  for (const auto& [name, n] : bad) {
    if (n) failures += fmt::format(" {} {}/{} off;", name, n, kInstances);
  }
  return Check(failures.empty() && secs < 30.0,
               fmt::format("{} instances x 6 checks, tol 1e-9 (p 1e-6), {:.2f}s{}", kInstances,
                           secs, failures.empty() ? "" : ";" + failures));
}

Outcome Table3Report() {
  const auto dir = Src() / "fixtures/table3";
  if (!fs::exists(dir / "qrels.tsv")) return Fail("fixtures/table3 missing");
  auto qrels = eval::ReadQrels(dir / "qrels.tsv");
  std::map<std::string, eval::EvalReport> reports;
  int p_ok = 0, ndcg_ok = 0, n = 0;
  std::string worst;
  double worst_err = 0;
  for (const auto& row : testing::Table3Rows()) {
    if (!reports.count(row.run)) {
      reports[row.run] = eval::EvaluateRun(eval::ReadRun(dir / (std::string(row.run) + ".run.tsv")),
                                           qrels, {7, 15}, row.run);
    }
    const auto& rep = reports[row.run];
    auto it = std::find_if(rep.rows.begin(), rep.rows.end(), [&](const eval::MetricRow& m) {
      return m.aspect == row.aspect && m.k == row.k;
    });
    if (it == rep.rows.end() || rep.n_queries != 42) return Fail("fixture run incomplete");
    ++n;
    p_ok += std::fabs(it->precision - row.p) <= testing::kTable3Tolerance;
    double err = std::fabs(it->ndcg - row.ndcg);
    ndcg_ok += err <= testing::kTable3Tolerance;
    if (err > worst_err) {
      worst_err = err;
      worst = fmt::format("{} {}@{} NDCG {:.3f} vs {:.3f}", row.run, eval::AspectName(row.aspect),
                          row.k, it->ndcg, row.ndcg);
    }
  }
  const auto& best = reports["barcode_entire"];
  std::string headline = fmt::format("strategy P@7 {:.3f}, P@15 {:.3f}", best.rows[2].precision,
                                     best.rows[3].precision);
  std::string detail = fmt::format("{}; P {}/{} and NDCG {}/{} within {}", headline, p_ok, n,
                                   ndcg_ok, n, testing::kTable3Tolerance);
  if (ndcg_ok < n) {
    detail += fmt::format("; worst {}; strategy NDCG rows are jointly infeasible under shared "
                          "judged-relevant normalization (tools/check_table3_feasibility.py)",
                          worst);
  }
  return Check(p_ok == n && ndcg_ok == n, detail);
}

Outcome DepPatternBruteForce() {
  const auto t0 = Clock::now();
  json pattern_file = json::parse(ReadFile(Src() / "patterns/dep_patterns.json"));
  auto patterns = PatternsFromJson(pattern_file);
  std::ifstream in(Src() / "fixtures/trees/brute_force_trees.jsonl");
  std::string line;
  int trees = 0, mismatches = 0, oversized = 0;
  std::size_t matches = 0;
  while (std::getline(in, line)) {
    ParseTree tree = ParseTree::FromJson(json::parse(line));
    ++trees;
    oversized += tree.size() > 25;
    for (std::size_t p = 0; p < patterns.size(); ++p) {
      auto expected = oracle::EnumerateMatches(pattern_file[p]["pattern"], tree);
      auto got = MatchPattern(patterns[p], tree);
      mismatches += std::set<PatternMatch>(got.begin(), got.end()) != expected ||
                    got.size() != expected.size();
      matches += got.size();
    }
  }
  const double secs = Seconds(t0);
  return Check(trees == 100 && oversized == 0 && mismatches == 0 && secs < 60.0,
               fmt::format("{} trees x {} patterns, {} matches, {} mismatches, {:.2f}s", trees,
                           patterns.size(), matches, mismatches, secs));
}

Outcome ExampleExtraction() {
  auto sentences = FixtureSentences();
  FixtureParseProvider parser(Src() / "fixtures/parse");
  FixtureSrlProvider srl(Src() / "fixtures/srl");
  auto table = extract::ExtractAll(
      sentences, parser, &srl, extract::LoadPhrasePatterns(Src() / "patterns/dep_patterns.json"));
  struct Want {
    const char* article;
    const char* text;
    extract::Method method;
  };
  const Want wants[] = {
      {"yucca", "trap moisture", extract::Method::kQasrl},
      {"ctenophora", "avoid sinking", extract::Method::kQasrl},
      {"pelican", "keep buoyant", extract::Method::kDep},
      {"cephalopod", "increase buoyancy", extract::Method::kDep},
      {"stenocara_gracilipes", "catch fog droplets", extract::Method::kBoth},
  };
  std::string missing;
  int found = 0;
  for (const auto& w : wants) {
    auto it = std::find_if(table.phrases.begin(), table.phrases.end(), [&](const auto& p) {
      return p.sentence_id.rfind(std::string(w.article) + "#", 0) == 0 && p.text == w.text &&
             p.method == w.method;
    });
    found += it != table.phrases.end();
    if (it == table.phrases.end()) {
      missing += fmt::format(" '{}' ({});", w.text, extract::MethodName(w.method));
    }
  }
  // The two questions the QA filter must drop, as recorded for their sentences.
  const std::set<std::string> dropped = {"Who detects something?", "What reduces something?"};
  int seen = 0, kept = 0;
  for (const auto& s : sentences) {
    for (const auto& qa : srl.Analyze(s.sentence_id, s.text)) {
      if (!dropped.count(qa.question)) continue;
      ++seen;
      kept += !extract::QasrlToPhrases(s, {qa}).empty();
    }
  }
  bool ok = missing.empty() && seen == 2 && kept == 0;
  return Check(ok, fmt::format("{}/5 phrases with their method tags{}; QA filter dropped {}/{} "
                               "listed questions",
                               found, missing.empty() ? "" : ", missing:" + missing, seen - kept,
                               seen));
}

Outcome LabelingFunctions() {
  auto sentences = FixtureSentences();
  FixtureParseProvider parser(Src() / "fixtures/parse");
  std::map<std::string, ParseTree> parses;
  for (const auto& s : sentences) parses.emplace(s.sentence_id, parser.Parse(s.sentence_id, s.text));
  auto res = bio::LfResources::Load(Src() / "lexicon");
  auto vote = [&](const std::string& id, const std::string& lf) {
    for (const auto& v : bio::ApplyLfs(parses.at(id), res)) {
      if (v.lf_name == lf) return v.vote;
    }
    return bio::Vote::kAbstain;
  };
  int pos = 0, neg = 0;
  for (const auto& v : bio::ApplyLfs(parses.at("peregrine_falcon#0"), res)) {
    pos += v.vote == bio::Vote::kPositive;
    neg += v.vote == bio::Vote::kNegative;
  }
  std::vector<std::string> wrong;
  auto expect = [&](bool ok, const char* what) {
    if (!ok) wrong.push_back(what);
  };
  expect(pos >= 1 && neg == 0, "falcon >=1 POSITIVE, 0 NEGATIVE");
  expect(vote("common_hill_myna#0", "unlikely_entity") == bio::Vote::kNegative, "myna pronoun");
  expect(vote("morgan_horse#0", "unlikely_entity") == bio::Vote::kNegative, "Morgan horse date");
  expect(vote("isopoda#0", "known_problem") == bio::Vote::kPositive, "isopoda known problem");
  expect(vote("yucca#0", "known_problem") == bio::Vote::kPositive, "yucca known problem");
  expect(vote("pigeon_guillemot#0", "auxiliary_verb") == bio::Vote::kPositive,
         "guillemot auxiliary verb");

  auto run = bio::RunBioFilter(sentences, parses, res, {}, {});
  std::map<std::string, double> score;
  for (const auto& s : run.scores) score[s.sentence_id] = s.score;
  double falcon = score.at("peregrine_falcon#0"), myna = score.at("common_hill_myna#0");
  expect(falcon > myna, "falcon scored above myna");
  std::string detail = fmt::format("6 sentences, {} rule checks failed; falcon {:.4f} > myna {:.4f}",
                                   wrong.size(), falcon, myna);
  for (const auto& w : wrong) detail += "; " + w;
  return Check(wrong.empty(), detail);
}

Outcome LabelModelPlanted() {
  const auto t0 = Clock::now();
  const std::vector<double> planted_acc = {0.9, 0.8, 0.7, 0.6, 0.55};
  int ordered = 0;
  double min_auc = 1.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto planted = testing::MakePlantedMatrix(planted_acc, 0.7, 5000, 1000 + seed);
    auto m = bio::LabelModel::Train(planted.matrix, {.seed = seed});
    const auto& acc = m.accuracies();
    ordered += std::is_sorted(acc.rbegin(), acc.rend()) &&
               std::adjacent_find(acc.begin(), acc.end()) == acc.end();
    min_auc = std::min(min_auc, testing::PairwiseAuc(m.ScoreAll(planted.matrix), planted.truth));
  }
  const double secs = Seconds(t0);
  return Check(ordered >= 19 && min_auc >= 0.9 && secs < 120.0,
               fmt::format("ranking recovered {}/20 seeds (need 19), min AUC {:.4f} (need 0.9), "
                           "{:.1f}s",
                           ordered, min_auc, secs));
}

Outcome FilterProperties(const fs::path& bundle) {
  auto scores = bio::ReadScores(bundle / "bio" / "scores.tsv");
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  const std::size_t fixture_n = scores.size();
  for (int i = 0; i < 500; ++i) scores.push_back({"r" + std::to_string(i), u(rng), ""});
  bool all_at_zero = bio::Filter(scores, 0.0).size() == scores.size();
  bool none_above_one =
      bio::Filter(scores, 1.0 + 1e-9).empty() && bio::Filter(scores, 2.0).empty();
  int violations = 0;
  for (int t = 0; t < 1000; ++t) {
    double lo = u(rng) * 1.1, hi = u(rng) * 1.1;
    if (lo > hi) std::swap(lo, hi);
    auto big = bio::Filter(scores, lo), small = bio::Filter(scores, hi);
    violations += !std::includes(big.begin(), big.end(), small.begin(), small.end());
  }
  return Check(all_at_zero && none_above_one && violations == 0,
               fmt::format("{} fixture + 500 random scores; tau=0 keeps all: {}; tau>1 keeps none: "
                           "{}; 1000 tau pairs, {} monotonicity violations",
                           fixture_n, all_at_zero, none_above_one, violations));
}

Outcome ShortlistExact() {
  auto index = testing::RandomIndex(10'000, 32, 42);
  std::mt19937_64 rng(43);
  int agree = 0;
  for (int trial = 0; trial < 20; ++trial) {
    auto q = testing::RandomUnit(rng, 32);
    std::vector<std::pair<double, std::string>> all;
    for (std::size_t i = 0; i < index.size(); ++i) {
      double s = 0;
      for (std::size_t k = 0; k < 32; ++k) s += double(q[k]) * index.row(i)[k];
      all.emplace_back(-s, index.phrase_ids()[i]);
    }
    std::sort(all.begin(), all.end());
    std::set<std::string> want;
    for (int i = 0; i < 50; ++i) want.insert(all[i].second);
    std::set<std::string> got;
    for (const auto& e : Shortlist(q, index, 50)) got.insert(index.phrase_ids()[e.row]);
    agree += got == want;
  }
  return Check(agree == 20, fmt::format("top-50 of 10,000 equals brute force in {}/20 trials", agree));
}

struct Proc {
  int code;
  std::string out;
};

Proc RunProcess(const std::vector<std::string>& args) {
  std::string cmd;
  for (const auto& a : args) {
    std::string q = "'";
    for (char c : a) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
    cmd += q + "' ";
  }
  cmd += "2>/dev/null";
  Proc p{-1, ""};
  FILE* f = popen(cmd.c_str(), "r");
  if (!f) return p;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), f)) > 0) p.out.append(buf.data(), n);
  int status = pclose(f);
  p.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return p;
}

// Two separate `barcode query` processes over the sealed bundle.
Outcome EndToEndDeterminism(const fs::path& bundle) {
  const std::string cli = BARCODE_CLI;
  const std::vector<std::string> base = {cli, "--config", (Src() / "barcode.toml").string(),
                                         "--json", "--index", bundle.string(), "query"};
  const std::vector<std::string> queries = {"prevent sinking", "collect water from humid air",
                                            "reduce fluid drag"};
  int identical = 0;
  std::size_t bytes = 0;
  for (const auto& q : queries) {
    auto args = base;
    args.push_back(q);
    auto a = RunProcess(args), b = RunProcess(args);
    if (a.code != 0 || b.code != 0) return Fail(fmt::format("barcode query exited {} / {}", a.code, b.code));
    identical += a.out == b.out && !a.out.empty();
    bytes += a.out.size();
  }
  return Check(identical == static_cast<int>(queries.size()),
               fmt::format("{}/{} queries byte-identical across two runs ({} bytes)", identical,
                           queries.size(), bytes));
}

Outcome FamousExamples() {
  const char* url = std::getenv("BARCODE_PROVIDER_URL");
  const char* corpus = std::getenv("BARCODE_FAMOUS_CORPUS");
  if (!url || !*url || !corpus || !*corpus) {
    return Skip("needs BARCODE_PROVIDER_URL (reference providers) and BARCODE_FAMOUS_CORPUS");
  }
  const auto t0 = Clock::now();
  Config cfg = FixtureConfig();
  cfg.Set("providers.url", url);
  for (const char* key : {"providers.segmenter", "providers.parse", "providers.srl",
                          "providers.embedding", "providers.nli"}) {
    cfg.Set(key, "http");
  }
  auto dir = TempDir("famous");
  ProviderSet providers = MakeProviders(cfg);
  BundleBuilder(dir, cfg, providers).BuildAll(fs::path(corpus));
  auto engine = Engine::Open(dir, cfg);
  std::ifstream in(Src() / "data/queries/famous.tsv");
  std::string line, detail;
  int found = 0, total = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto cols = Split(line, '\t');
    ++total;
    auto resp = engine->Query({cols.at(1), 10, false});
    int rank = 0;
    for (const auto& r : resp.results) {
      if (ToLower(r.sentence_id + " " + r.organism).find(ToLower(cols.at(2))) != std::string::npos) {
        rank = r.rank;
        break;
      }
    }
    found += rank > 0;
    detail += fmt::format(" {}={};", cols.at(2), rank ? std::to_string(rank) : "miss");
  }
  fs::remove_all(dir);
  const double secs = Seconds(t0);
  return Check(total == 4 && found == 4 && secs < 600.0,
               fmt::format("{}/{} in top 10:{} {:.0f}s", found, total, detail, secs));
}

Outcome ReferenceRetention() {
  const char* dir = std::getenv("BARCODE_REFERENCE_CORPUS");
  if (!dir || !*dir) return Skip("needs BARCODE_REFERENCE_CORPUS (bundle over the reference corpus)");
  VerifyBundle(dir);
  auto scores = bio::ReadScores(fs::path(dir) / "bio" / "scores.tsv");
  if (scores.empty()) return Fail("no scored sentences");
  double share = static_cast<double>(bio::Filter(scores, 0.5).size()) / scores.size();
  return Check(std::fabs(share - 0.03) <= 0.015,
               fmt::format("tau=0.5 keeps {:.2f}% of {} sentences (need 3 +/- 1.5)", 100 * share,
                           scores.size()));
}

}  // namespace
}  // namespace barcode

int main() {
  using namespace barcode;
  spdlog::set_level(spdlog::level::warn);
  auto bundle = TempDir("bundle");
  std::function<Outcome()> build_failed;
  try {
    Config cfg = FixtureConfig();
    ProviderSet providers = MakeProviders(cfg);
    BundleBuilder(bundle, cfg, providers).BuildAll(Src() / "fixtures/corpus/articles.jsonl");
  } catch (const std::exception& e) {
    std::string what = e.what();
    build_failed = [what] { return Fail("fixture bundle build failed: " + what); };
  }
  auto needs_bundle = [&](std::function<Outcome()> f) {
    return build_failed ? build_failed : f;
  };

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"metric_oracles", MetricOracles},
      {"table3_report_fixture", Table3Report},
      {"dep_pattern_brute_force", DepPatternBruteForce},
      {"example_extraction", ExampleExtraction},
      {"labeling_functions", LabelingFunctions},
      {"label_model_planted_truth", LabelModelPlanted},
      {"filter_properties", needs_bundle([&] { return FilterProperties(bundle); })},
      {"shortlist_exactness", ShortlistExact},
      {"end_to_end_determinism", needs_bundle([&] { return EndToEndDeterminism(bundle); })},
      {"famous_examples (optional)", FamousExamples},
      {"tau_retention (optional)", ReferenceRetention},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = Fail(std::string("exception: ") + e.what());
    }
    const char* tag = o.status == Status::kPass ? "PASS" : o.status == Status::kFail ? "FAIL" : "SKIP";
    failed += o.status == Status::kFail;
    std::cout << fmt::format("{}  {:<28} {}", tag, name, o.detail) << std::endl;
  }
  std::filesystem::remove_all(bundle);
  std::cout << (failed ? fmt::format("{} criteria failed", failed) : "all criteria passed")
            << std::endl;
  return failed ? 1 : 0;
}
