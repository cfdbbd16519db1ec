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

#include "barcode/evaluation.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.h"
#include "table3_targets.h"
#include "test_util.h"

namespace barcode::eval {
namespace {

using nlohmann::json;

using oracle::RandomBits;

std::vector<std::string> Items(std::initializer_list<const char*> xs) {
  return {xs.begin(), xs.end()};
}

TEST_CASE("precision at k") {
  CHECK(PrecisionAtK({true, true, false}, 3) == doctest::Approx(2.0 / 3));
  CHECK(PrecisionAtK({true, true, true}, 3) == 1.0);
  CHECK(PrecisionAtK({true}, 7) == doctest::Approx(1.0 / 7));
  CHECK(PrecisionAtK({}, 5) == 0.0);
  CHECK_THROWS_AS(PrecisionAtK({true}, 0), ValidationError);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 300; ++t) {
    auto v = RandomBits(rng, rng() % 25, 0.4);
    int k = 1 + rng() % 20;
    CHECK(std::fabs(PrecisionAtK(v, k) - oracle::Precision(v, k)) < 1e-12);
  }
}

TEST_CASE("ndcg at k") {
  CHECK(NdcgAtK({true, false, true}, 3, 2) ==
        doctest::Approx((1 + 0.5) / (1 + 1 / std::log2(3.0))).epsilon(1e-12));
  CHECK(NdcgAtK({true, false, true}, 3, 2) == doctest::Approx(0.9197).epsilon(1e-4));
  CHECK(NdcgAtK({true, true, true}, 3) == doctest::Approx(1.0));
  CHECK(NdcgAtK({false, false}, 2, 0) == 0.0);
  CHECK(NdcgAtK({false, false}, 2, 3) == 0.0);
  CHECK_THROWS_AS(NdcgAtK({true, true}, 2, 1), ValidationError);
  CHECK_THROWS_AS(NdcgAtK({true}, 0, 1), ValidationError);

  std::mt19937_64 rng(2);
  for (int t = 0; t < 300; ++t) {
    auto v = RandomBits(rng, 1 + rng() % 25, 0.35);
    std::size_t rel = std::count(v.begin(), v.end(), true) + rng() % 4;
    int k = 1 + rng() % 20;
    CHECK(std::fabs(NdcgAtK(v, k, rel) - oracle::Ndcg(v, k, rel)) < 1e-9);
  }
}

TEST_CASE("P@k and NDCG@k ignore order below rank k") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    auto v = RandomBits(rng, 20, 0.4);
    int k = 1 + rng() % 19;
    std::size_t rel = std::count(v.begin(), v.end(), true) + 2;
    auto w = v;
    std::shuffle(w.begin() + k, w.end(), rng);
    CHECK(PrecisionAtK(v, k) == PrecisionAtK(w, k));
    CHECK(NdcgAtK(v, k, rel) == doctest::Approx(NdcgAtK(w, k, rel)).epsilon(1e-12));
  }
}

TEST_CASE("NDCG@k is 1 iff the relevant items fill the top ranks") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = 1 + rng() % 15;
    std::size_t rel = 1 + rng() % n;
    int k = 1 + rng() % 15;
    std::vector<bool> v(n, false);
    std::fill(v.begin(), v.begin() + rel, true);
    CHECK(NdcgAtK(v, k, rel) == doctest::Approx(1.0).epsilon(1e-12));
    std::shuffle(v.begin(), v.end(), rng);
    bool top = true;
    for (std::size_t i = 0; i < std::min<std::size_t>(k, rel); ++i) top = top && v[i];
    CHECK((std::fabs(NdcgAtK(v, k, rel) - 1.0) < 1e-12) == top);
  }
}

TEST_CASE("rbo basics") {
  auto abc = Items({"a", "b", "c"});
  CHECK(Rbo(abc, abc, 0.9, 15) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(Rbo(abc, Items({"x", "y", "z"}), 0.9, 15) == 0.0);
  CHECK(Rbo(abc, Items({"b", "a", "c"}), 0.9, 3) == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(Rbo(abc, Items({"b", "a", "c"}), 0.8, 3) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(Rbo({}, {}, 0.9, 15) == 1.0);
  CHECK(Rbo(abc, {}, 0.9, 15) == 0.0);
  CHECK_THROWS_AS(Rbo(abc, abc, 0.0, 15), ValidationError);
  CHECK_THROWS_AS(Rbo(abc, abc, 1.0, 15), ValidationError);
  CHECK_THROWS_AS(Rbo(abc, abc, 0.9, 0), ValidationError);
  CHECK_THROWS_AS(Rbo(Items({"a", "a"}), abc, 0.9, 15), ValidationError);
  // Prefix of a longer list: extrapolation assumes the agreement continues.
  CHECK(Rbo(Items({"a", "b"}), Items({"a", "b", "c", "d"}), 0.9, 15) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rbo matches the agreement-series oracle on random lists") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pd(0.05, 0.98);
  for (int t = 0; t < 400; ++t) {
    std::vector<std::string> universe;
    for (int i = 0; i < 30; ++i) universe.push_back("s" + std::to_string(i));
    std::shuffle(universe.begin(), universe.end(), rng);
    std::vector<std::string> a(universe.begin(), universe.begin() + rng() % 20);
    std::shuffle(universe.begin(), universe.end(), rng);
    std::vector<std::string> b(universe.begin(), universe.begin() + rng() % 20);
    double p = pd(rng);
    std::size_t depth = 1 + rng() % 20;
    double got = Rbo(a, b, p, depth);
    CHECK(std::fabs(got - oracle::Rbo(a, b, p, depth)) < 1e-9);
    CHECK(std::fabs(got - Rbo(b, a, p, depth)) < 1e-12);
    CHECK(got >= -1e-12);
    CHECK(got <= 1 + 1e-12);
    CHECK(std::fabs(Rbo(a, a, p, depth) - 1.0) < 1e-9);
  }
}

TEST_CASE("shared items") {
  CHECK(SharedItems(Items({"a", "b", "c"}), Items({"c", "d", "a"}), 15) == 2);
  CHECK(SharedItems(Items({"a", "b", "c"}), Items({"c", "d", "a"}), 2) == 0);
  CHECK(SharedItems({}, Items({"a"}), 15) == 0);
}

TEST_CASE("mann-whitney worked examples") {
  auto r = MannWhitneyU({1, 2, 3}, {10, 11, 12});
  CHECK(r.exact);
  CHECK(r.u == 0.0);
  CHECK(r.p_value == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(MannWhitneyU({10, 11, 12}, {1, 2, 3}).u == 9.0);

  auto same = MannWhitneyU({1, 2, 3, 4}, {1, 2, 3, 4});
  CHECK(same.u == 8.0);
  CHECK(same.p_value == doctest::Approx(1.0));
  CHECK(MannWhitneyU({5, 5, 5}, {5, 5}).p_value == doctest::Approx(1.0));

  CHECK_THROWS_AS(MannWhitneyU({}, {1}), ValidationError);
  CHECK_THROWS_AS(MannWhitneyU({1}, {}), ValidationError);
  CHECK_THROWS_AS(MannWhitneyU({std::nan("")}, {1}), ValidationError);
}

TEST_CASE("mann-whitney exact p matches permutation enumeration, ties included") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 250; ++t) {
    std::size_t na = 1 + rng() % 6, nb = 1 + rng() % 6;
    int levels = 2 + rng() % 5;  // few levels -> many ties
    std::vector<double> a(na), b(nb);
    for (auto& x : a) x = static_cast<double>(rng() % levels);
    for (auto& x : b) x = static_cast<double>(rng() % levels);
    auto r = MannWhitneyU(a, b);
    REQUIRE(r.exact);
    CHECK(std::fabs(r.p_value - oracle::MannWhitneyExactP(a, b)) < 1e-6);
    CHECK(r.u + MannWhitneyU(b, a).u == doctest::Approx(static_cast<double>(na * nb)));
  }
}

TEST_CASE("mann-whitney agrees with scipy") {
  json ref = json::parse(ReadFile(testing::SourceDir() / "fixtures/stats/reference.json"));
  int asymptotic = 0, exact = 0;
  for (const auto& c : ref["mann_whitney"]) {
    auto a = c["a"].get<std::vector<double>>();
    auto b = c["b"].get<std::vector<double>>();
    auto r = MannWhitneyU(a, b);
    CHECK(r.u == doctest::Approx(c["u"].get<double>()).epsilon(1e-12));
    if (c["method"] == "asymptotic") {
      REQUIRE_FALSE(r.exact);
      ++asymptotic;
    } else {
      REQUIRE(r.exact);
      ++exact;
    }
    CHECK(std::fabs(r.p_value - c["p"].get<double>()) < 1e-6);
  }
  CHECK(asymptotic == 40);
  CHECK(exact == 20);
}

TEST_CASE("fleiss kappa") {
  AnnotationMatrix hand = {{"A", "A", "A"}, {"A", "A", "B"}, {"A", "B", "B"}, {"B", "B", "B"}};
  // P-bar = 2/3, P_e = 1/2.
  CHECK(FleissKappa(hand) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(FleissKappa({{"x", "x"}, {"y", "y"}}) == doctest::Approx(1.0));
  CHECK(FleissKappa({{"x", "x"}, {"x", "x"}}) == 1.0);
  CHECK_THROWS_AS(FleissKappa({}), ValidationError);
  CHECK_THROWS_AS(FleissKappa({{"x"}}), ValidationError);
  CHECK_THROWS_AS(FleissKappa({{"x", "y"}, {"x"}}), ValidationError);
  CHECK_THROWS_AS(FleissKappa({{"x", ""}}), ValidationError);

  std::mt19937_64 rng(8);
  AnnotationMatrix noise(5000, std::vector<std::string>(5));
  for (auto& row : noise) {
    for (auto& cell : row) cell = rng() % 2 ? "yes" : "no";
  }
  CHECK(std::fabs(FleissKappa(noise)) < 0.02);

  json ref = json::parse(ReadFile(testing::SourceDir() / "fixtures/stats/reference.json"));
  for (const auto& c : ref["fleiss"]) {
    auto m = c["labels"].get<AnnotationMatrix>();
    CHECK(std::fabs(FleissKappa(m) - c["kappa"].get<double>()) < 1e-9);
  }
}

TEST_CASE("fleiss kappa matches the pairwise-agreement oracle") {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 300; ++t) {
    AnnotationMatrix m(1 + rng() % 20, std::vector<std::string>(2 + rng() % 6));
    int cats = 1 + rng() % 4;
    for (auto& row : m) {
      for (auto& cell : row) cell = "c" + std::to_string(rng() % cats);
    }
    CHECK(std::fabs(FleissKappa(m) - oracle::FleissKappa(m)) < 1e-9);
  }
}

TEST_CASE("evaluate run: single query, unjudged, empty") {
  Qrels qrels;
  qrels["q1"] = {{"s1", {true, false}}, {"s2", {false, true}}, {"s3", {true, true}}};
  RunFile run;
  run["q1"] = {"s3", "s9", "s1"};
  run["q2"] = {"s1"};
  auto r = EvaluateRun(run, qrels, {3, 1}, "demo");
  CHECK(r.n_queries == 1);
  CHECK(r.unjudged == std::vector<std::string>{"q2"});
  REQUIRE(r.rows.size() == 4);
  CHECK(r.rows[0].aspect == Aspect::kChallenge);
  CHECK(r.rows[0].k == 1);
  CHECK(r.rows[1].k == 3);
  CHECK(r.rows[1].precision == doctest::Approx(2.0 / 3));
  CHECK(r.rows[1].ndcg == doctest::Approx(NdcgAtK({true, false, true}, 3, 2)));
  CHECK(r.rows[3].precision == doctest::Approx(1.0 / 3));
  CHECK(r.rows[3].ndcg == doctest::Approx(NdcgAtK({true, false, false}, 3, 2)));

  auto j = ReportToJson(r);
  CHECK(j["n_queries"] == 1);
  CHECK(j["metrics"].size() == 4);
  auto table = ReportToTable({r});
  CHECK(table.find("unjudged") != std::string::npos);
  CHECK(table.find("0.667") != std::string::npos);

  auto empty = EvaluateRun({}, qrels, {7, 15});
  CHECK(empty.n_queries == 0);
  CHECK(empty.rows.empty());
  CHECK_THROWS_AS(EvaluateRun(run, qrels, {0}), ValidationError);
  RunFile dup;
  dup["q1"] = {"s1", "s1"};
  CHECK_THROWS_AS(EvaluateRun(dup, qrels, {3}), ValidationError);
}

TEST_CASE("qrels and run files round trip") {
  auto dir = testing::TempDir("eval_io");
  Qrels q;
  q["q1"] = {{"s1", {true, false}}, {"s2", {false, false}}};
  q["q2"] = {{"s3", {false, true}}};
  WriteQrels(q, dir / "qrels.tsv");
  auto back = ReadQrels(dir / "qrels.tsv");
  CHECK(back.size() == 2);
  CHECK(back["q1"]["s1"].challenge);
  CHECK_FALSE(back["q1"]["s1"].strategy);
  CHECK(back["q2"]["s3"].strategy);

  RunFile run;
  run["q1"] = {"s2", "s1"};
  WriteRun(run, dir / "run.tsv");
  CHECK(ReadRun(dir / "run.tsv") == run);

  // Ranks order the list regardless of row order.
  WriteFile(dir / "shuffled.tsv", "q1\t2\tb\t0.5\nq1\t1\ta\t0.9\n");
  CHECK(ReadRun(dir / "shuffled.tsv")["q1"] == Items({"a", "b"}));

  WriteFile(dir / "bad1.tsv", "q1\ts1\t2\t0\n");
  CHECK_THROWS_AS(ReadQrels(dir / "bad1.tsv"), ValidationError);
  WriteFile(dir / "bad2.tsv", "q1\ts1\t1\t0\nq1\ts1\t0\t0\n");
  CHECK_THROWS_AS(ReadQrels(dir / "bad2.tsv"), ValidationError);
  WriteFile(dir / "bad3.tsv", "q1\tx\ts1\t1\n");
  CHECK_THROWS_AS(ReadRun(dir / "bad3.tsv"), ValidationError);
  WriteFile(dir / "bad4.tsv", "q1\t1\ts1\t1\nq1\t2\ts1\t1\n");
  CHECK_THROWS_AS(ReadRun(dir / "bad4.tsv"), ValidationError);
  CHECK_THROWS_AS(ReadRun(dir / "missing.tsv"), StoreError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("query set ships the 24 AskNature queries and 18 paraphrases") {
  auto qs = ReadQueries(testing::SourceDir() / "data/queries/asknature.tsv");
  REQUIRE(qs.size() == 42);
  std::size_t originals = 0, paraphrases = 0;
  for (const auto& q : qs) (q.paraphrase_of.empty() ? originals : paraphrases) += 1;
  CHECK(originals == 24);
  CHECK(paraphrases == 18);
  CHECK(qs.front().text == "absorb carbon dioxide");
  auto it = std::find_if(qs.begin(), qs.end(),
                         [](const QuerySpec& q) { return q.text == "prevent water absorption"; });
  REQUIRE(it != qs.end());
  CHECK(it->paraphrase_of == "an02");
}

TEST_CASE("robustness over paraphrase pairs") {
  std::vector<QuerySpec> qs = {{"o1", "repel water", ""}, {"p1", "prevent water absorption", "o1"},
                               {"o2", "reduce drag", ""}, {"p2", "minimize friction", "o2"},
                               {"o3", "store liquid", ""}};
  RunFile run;
  run["o1"] = {"a", "b", "c"};
  run["p1"] = {"a", "b", "c"};
  run["o2"] = {"x", "y"};
  run["p2"] = {"z"};
  auto r = EvaluateRobustness(qs, run, 0.9, 15);
  REQUIRE(r.pairs.size() == 2);
  CHECK(r.pairs[0].rbo == doctest::Approx(1.0));
  CHECK(r.pairs[0].shared == 3);
  CHECK(r.pairs[1].rbo == 0.0);
  CHECK(r.mean_rbo == doctest::Approx(0.5));
  CHECK(r.mean_shared == doctest::Approx(1.5));
  CHECK(RobustnessToJson(r)["n_pairs"] == 2);
}

TEST_CASE("compare two run files") {
  RunFile a{{"q1", {"x", "y", "z"}}, {"q2", {"u"}}};
  RunFile b{{"q1", {"x", "y", "z"}}, {"q3", {"v"}}};
  auto r = CompareRuns(a, b);
  REQUIRE(r.pairs.size() == 3);
  CHECK(r.pairs[0].original_id == "q1");
  CHECK(r.pairs[0].rbo == doctest::Approx(1.0));
  CHECK(r.pairs[0].shared == 3);
  CHECK(r.pairs[1].rbo == 0.0);
  CHECK(r.pairs[2].rbo == 0.0);
  CHECK(r.mean_rbo == doctest::Approx(1.0 / 3));
  CHECK(CompareRuns(a, a).mean_rbo == doctest::Approx(1.0));
}

TEST_CASE("Table 3 fixture reproduces the target means") {
  // Every P row, and NDCG on the rows the fixture matches. The acceptance
  // run reports the full criterion.
  const auto& rows = testing::Table3Rows();
  auto dir = testing::SourceDir() / "fixtures/table3";
  auto qrels = ReadQrels(dir / "qrels.tsv");
  std::map<std::string, EvalReport> reports;
  for (const auto& row : rows) {
    if (!reports.count(row.run)) {
      auto run = ReadRun(dir / (std::string(row.run) + ".run.tsv"));
      reports[row.run] = EvaluateRun(run, qrels, {7, 15}, row.run);
    }
    const auto& rep = reports[row.run];
    CHECK(rep.n_queries == 42);
    CHECK(rep.unjudged.empty());
    auto it = std::find_if(rep.rows.begin(), rep.rows.end(), [&](const MetricRow& m) {
      return m.aspect == row.aspect && m.k == row.k;
    });
    REQUIRE(it != rep.rows.end());
    INFO(row.run << " " << AspectName(row.aspect) << "@" << row.k);
    CHECK(std::fabs(it->precision - row.p) <= testing::kTable3Tolerance);
    if (row.ndcg_matched) CHECK(std::fabs(it->ndcg - row.ndcg) <= testing::kTable3Tolerance);
  }
  // 0.718 = 211 hits over 42 x 7 slots.
  const auto& best = reports["barcode_entire"];
  CHECK(best.rows[2].precision == doctest::Approx(211.0 / 294).epsilon(1e-12));
  CHECK(best.rows[3].precision == doctest::Approx(437.0 / 630).epsilon(1e-12));

  std::vector<EvalReport> all;
  for (auto& [_, r] : reports) all.push_back(r);
  auto table = ReportToTable(all);
  CHECK(table.find("0.718") != std::string::npos);
  CHECK(table.find("0.694") != std::string::npos);

  auto sig = ComparePrecision(reports["barcode_entire"], reports["baseline_entire"],
                              Aspect::kStrategy, 7);
  CHECK(sig.u > 42 * 42 / 2.0);
  CHECK(sig.p_value < 0.05);
}

TEST_CASE("metric suite runs quickly") {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(9);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> a(20), b(20);
    for (auto& x : a) x = rng() % 5;
    for (auto& x : b) x = rng() % 5;
    MannWhitneyU(a, b);
  }
  auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(secs < 5.0);
}

}  // namespace
}  // namespace barcode::eval
