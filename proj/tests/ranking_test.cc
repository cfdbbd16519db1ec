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

#include "barcode/ranking.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "synthetic.h"
#include "test_util.h"

namespace barcode {
namespace {

using nlohmann::json;

using testing::RandomIndex;
using testing::RandomUnit;

TEST_CASE("embedding index round trip and validation") {
  auto index = RandomIndex(37, 8, 1);
  auto dir = testing::TempDir("index");
  index.Write(dir);
  auto back = EmbeddingIndex::Read(dir);
  CHECK(back.size() == 37);
  CHECK(back.dim() == 8);
  CHECK(back.model_id() == "random");
  CHECK(back.phrase_ids() == index.phrase_ids());
  for (std::size_t i = 0; i < index.size(); ++i) {
    CHECK(std::equal(back.row(i).begin(), back.row(i).end(), index.row(i).begin()));
  }
  std::string bin = ReadFile(dir / "embeddings.bin");
  CHECK(bin.substr(0, 4) == "BARC");
  CHECK(bin.size() == 4 + 4 + 4 + 8 + 37 * 8 * 4);

  WriteFile(dir / "embeddings.bin", bin.substr(0, bin.size() - 4));
  CHECK_THROWS_AS(EmbeddingIndex::Read(dir), StoreError);
  WriteFile(dir / "embeddings.bin", "XXXX" + bin.substr(4));
  CHECK_THROWS_AS(EmbeddingIndex::Read(dir), StoreError);
  WriteFile(dir / "embeddings.bin", bin);
  WriteFile(dir / "embeddings.ids", "a\nb\n");
  CHECK_THROWS_AS(EmbeddingIndex::Read(dir), StoreError);
  std::filesystem::remove_all(dir);

  EmbeddingIndex small("m", 2);
  CHECK_THROWS_AS(small.Add("x", std::vector<float>{1.0f, 1.0f}), ValidationError);
  CHECK_THROWS_AS(small.Add("x", std::vector<float>{1.0f}), ValidationError);
}

TEST_CASE("shortlist basics") {
  EmbeddingIndex index("m", 2);
  index.Add("a", std::vector<float>{1, 0});
  index.Add("b", std::vector<float>{0, 1});
  index.Add("c", std::vector<float>{0.6f, 0.8f});
  std::vector<float> q{0, 1};
  auto top = Shortlist(q, index, 1);
  REQUIRE(top.size() == 1);
  CHECK(index.phrase_ids()[top[0].row] == "b");
  CHECK(Shortlist(q, index, 10).size() == 3);
  CHECK(Shortlist(q, index, 10, {true, false, true}).size() == 2);
  CHECK_THROWS_AS(Shortlist(std::vector<float>{1, 0, 0}, index, 1), ValidationError);

  EmbeddingIndex dup("m", 2);
  dup.Add("z", std::vector<float>{1, 0});
  dup.Add("m", std::vector<float>{1, 0});
  dup.Add("a", std::vector<float>{1, 0});
  auto tied = Shortlist(std::vector<float>{1, 0}, dup, 3);
  CHECK(dup.phrase_ids()[tied[0].row] == "a");
  CHECK(dup.phrase_ids()[tied[1].row] == "m");
  CHECK(dup.phrase_ids()[tied[2].row] == "z");
}

TEST_CASE("shortlist equals a brute-force scan (top-50 of 10,000, 20 trials)") {
  auto index = RandomIndex(10'000, 32, 42);
  std::mt19937_64 rng(43);
  int agree = 0;
  for (int trial = 0; trial < 20; ++trial) {
    auto q = RandomUnit(rng, 32);
    // Oracle: score everything, full sort.
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
  CHECK(agree == 20);
}

TEST_CASE("builtin providers: embedding and NLI sanity") {
  HashedLexicalEncoder emb;
  std::vector<std::string> texts = {"trap moisture", "trap moisture"};
  auto v = emb.Embed(texts);
  CHECK(v[0] == v[1]);
  CHECK(Dot(v[0], v[0]) == doctest::Approx(1.0).epsilon(1e-6));
  LexicalNli nli;
  CHECK(nli.Score("increase water loss", "reduce water loss").Argmax() == 2);
  CHECK(nli.Score("reduce water loss", "reduce water loss").Argmax() == 0);
  auto s = ScoreNli(nli, {"avoid sinking"}, "prevent sinking", true);
  CHECK(s[0].entail + s[0].neutral + s[0].contradict == doctest::Approx(1.0));
}

LabeledPair Pair(double cos, double e, double n, double c, bool rel) {
  return {{cos, {e, n, c}}, rel};
}

TEST_CASE("SMO matches scikit-learn SVC on a recorded toy problem") {
  auto ref = json::parse(ReadFile(testing::SourceDir() / "fixtures/svm/sklearn_reference.json"));
  std::vector<LabeledPair> train;
  auto xs = ref["train_x"];
  auto ys = ref["train_y"];
  for (std::size_t i = 0; i < xs.size(); ++i) {
    train.push_back(Pair(xs[i][0], xs[i][1], xs[i][2], xs[i][3], ys[i].get<int>() == 1));
  }
  SvmParams p;
  p.eps = 1e-5;
  auto clf = RelevanceClassifier::Train(train, p);
  CHECK(clf.report().train_accuracy == doctest::Approx(ref["train_accuracy"].get<double>()));
  auto tx = ref["test_x"];
  for (std::size_t i = 0; i < tx.size(); ++i) {
    RelevanceFeatures f{tx[i][0], {tx[i][1], tx[i][2], tx[i][3]}};
    double want = ref["decision"][i].get<double>();
    CHECK(clf.Decision(f) == doctest::Approx(want).epsilon(1e-3).scale(1.0));
  }
}

TEST_CASE("separable toy set is fit exactly") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<LabeledPair> data;
  for (int i = 0; i < 200; ++i) {
    double e = u(rng);
    if (std::abs(e - 0.5) < 0.05) continue;
    double rest = 1 - e;
    data.push_back(Pair(u(rng), e, rest / 2, rest / 2, e > 0.5));
  }
  auto clf = RelevanceClassifier::Train(data);
  CHECK(Evaluate(clf, data).Accuracy() == 1.0);
}

TEST_CASE("single-class data is rejected") {
  std::vector<LabeledPair> data = {Pair(0.1, 0.2, 0.3, 0.5, true), Pair(0.3, 0.3, 0.3, 0.4, true)};
  CHECK_THROWS_AS(RelevanceClassifier::Train(data), ValidationError);
  CHECK_THROWS_AS(RelevanceClassifier::Train({}), ValidationError);
}

TEST_CASE("classifier JSON round trip keeps decisions") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<LabeledPair> data;
  for (int i = 0; i < 150; ++i) {
    double c = u(rng), e = u(rng);
    data.push_back(Pair(c, e, (1 - e) / 2, (1 - e) / 2, c + e + 0.2 * u(rng) > 1.0));
  }
  auto clf = TrainWithHoldout(data, {});
  auto dir = testing::TempDir("clf");
  clf.Save(dir / "relevance.json");
  auto back = RelevanceClassifier::Load(dir / "relevance.json");
  for (const auto& d : data) CHECK(back.Decision(d.features) == clf.Decision(d.features));
  CHECK(back.params().c == 100.0);
  CHECK(back.params().gamma == 0.1);
  CHECK(back.params().degree == 2);
  CHECK(back.report().n_holdout == 30);
  CHECK_THROWS_AS(RelevanceClassifier::Load(dir / "missing.json"), StoreError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("shuffled labels give precision near the class prior") {
  HashedLexicalEncoder emb;
  LexicalNli nli;
  auto rows = ReadLabeledPairs(testing::SourceDir() / "data/labeled_pairs.jsonl");
  auto data = FeaturizeLabeledPairs(rows, emb, nli);
  std::mt19937_64 rng(17);
  std::vector<bool> labels;
  for (const auto& d : data) labels.push_back(d.relevant);
  double sum = 0;
  const int kSeeds = 5;
  for (int s = 0; s < kSeeds; ++s) {
    std::shuffle(labels.begin(), labels.end(), rng);
    for (std::size_t i = 0; i < data.size(); ++i) data[i].relevant = labels[i];
    SvmParams p;
    p.seed = s;
    sum += TrainWithHoldout(data, p).report().holdout_precision;
  }
  CHECK(sum / kSeeds == doctest::Approx(0.63).epsilon(0.1 / 0.63));
}

TEST_CASE("labeled-pairs fixture shape") {
  auto rows = ReadLabeledPairs(testing::SourceDir() / "data/labeled_pairs.jsonl");
  CHECK(rows.size() == 1005);
  auto rel = std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.relevant; });
  CHECK(double(rel) / rows.size() == doctest::Approx(0.63).epsilon(0.005));
}

// --- ranker ----------------------------------------------------------------

struct RankFixture {
  corpus::CorpusStore store;
  std::vector<extract::CandidatePhrase> phrases;
  EmbeddingIndex index;
  BioScoreMap bio;
  RelevanceClassifier clf;
  HashedLexicalEncoder emb;
  LexicalNli nli;

  RankFixture() {
    auto src = testing::SourceDir();
    auto articles = corpus::ReadArticlesJsonl(src / "fixtures/corpus/articles.jsonl");
    BuiltinSegmenter seg;
    std::vector<corpus::SentenceRecord> sentences;
    for (const auto& a : articles) {
      auto recs = corpus::Segment(a, seg);
      sentences.insert(sentences.end(), recs.begin(), recs.end());
    }
    FixtureParseProvider parser(src / "fixtures/parse");
    FixtureSrlProvider srl(src / "fixtures/srl");
    auto table = extract::ExtractAll(sentences, parser, &srl,
                                     extract::LoadPhrasePatterns(src / "patterns/dep_patterns.json"));
    phrases = table.phrases;
    store = corpus::CorpusStore::FromRecords(articles, sentences);
    index = BuildEmbeddingIndex(phrases, emb);
    int i = 0;
    for (const auto& s : sentences) bio[s.sentence_id] = (i++ % 3 == 0) ? 0.9 : 0.2;
    auto rows = ReadLabeledPairs(src / "data/labeled_pairs.jsonl");
    clf = TrainWithHoldout(FeaturizeLabeledPairs(rows, emb, nli), {});
  }
};

RankFixture& Rf() {
  static RankFixture f;
  return f;
}

TEST_CASE("ranker: Ctenophora 'avoid sinking' answers 'prevent sinking'") {
  auto& f = Rf();
  BarcodeRanker r(f.store, f.phrases, f.index, &f.bio, f.clf, f.emb, f.nli);
  auto resp = r.Rank({"prevent sinking", 15, false});
  bool found = false;
  for (const auto& res : resp.results) {
    if (res.sentence_id == "ctenophora#0") {
      found = true;
      CHECK(res.matched_phrase.text == "avoid sinking");
    }
  }
  CHECK(found);
}

TEST_CASE("ranker: ordering, uniqueness, aggregation") {
  auto& f = Rf();
  RankerOptions opt;
  BarcodeRanker r(f.store, f.phrases, f.index, &f.bio, f.clf, f.emb, f.nli, opt);
  auto resp = r.Rank({"reduce water loss", 100, false});
  std::set<std::string> seen;
  for (std::size_t i = 0; i < resp.results.size(); ++i) {
    const auto& a = resp.results[i];
    CHECK(a.rank == int(i) + 1);
    CHECK(seen.insert(a.sentence_id).second);
    if (i > 0) {
      const auto& p = resp.results[i - 1];
      bool ordered = p.combined_score > a.combined_score ||
                     (p.combined_score == a.combined_score &&
                      (p.features.cosine > a.features.cosine ||
                       (p.features.cosine == a.features.cosine && p.sentence_id < a.sentence_id)));
      CHECK(ordered);
    }
  }
  // k beyond the corpus returns every sentence that owns a phrase.
  std::set<std::string> with_phrase;
  for (const auto& p : f.phrases) with_phrase.insert(p.sentence_id);
  CHECK(seen == with_phrase);

  // Oracle for aggregation: score every phrase independently, take the max.
  auto qv = f.emb.Embed(std::vector<std::string>{"reduce water loss"}).front();
  std::map<std::string, double> best;
  for (std::size_t i = 0; i < f.index.size(); ++i) {
    const auto& ph = *std::find_if(f.phrases.begin(), f.phrases.end(), [&](const auto& p) {
      return p.phrase_id == f.index.phrase_ids()[i];
    });
    RelevanceFeatures feat{Dot(qv, f.index.row(i)), f.nli.Score(ph.text, "reduce water loss")};
    double s = f.clf.Decision(feat);
    auto it = best.find(ph.sentence_id);
    if (it == best.end() || s > it->second) best[ph.sentence_id] = s;
  }
  for (const auto& res : resp.results) {
    CHECK(res.combined_score == doctest::Approx(best.at(res.sentence_id)).epsilon(1e-12));
  }
}

TEST_CASE("ranker: determinism, filtered containment, empty filter, validation") {
  auto& f = Rf();
  BarcodeRanker r(f.store, f.phrases, f.index, &f.bio, f.clf, f.emb, f.nli);
  Query q{"collect water from humid air", 10, false};
  CHECK(ResponseToJson(q, r.Rank(q)).dump() == ResponseToJson(q, r.Rank(q)).dump());

  Query fq{"collect water from humid air", 100, true};
  auto filtered = r.Rank(fq);
  CHECK_FALSE(filtered.results.empty());
  for (const auto& res : filtered.results) CHECK(f.bio.at(res.sentence_id) >= 0.5);

  RankerOptions strict;
  strict.tau = 0.95;
  BarcodeRanker none(f.store, f.phrases, f.index, &f.bio, f.clf, f.emb, f.nli, strict);
  auto empty = none.Rank(fq);
  CHECK(empty.results.empty());
  CHECK(empty.status != "ok");

  CHECK_THROWS_AS(r.Rank({"   ", 5, false}), ValidationError);
  CHECK_THROWS_AS(r.Rank({"x", 0, false}), ValidationError);
  BarcodeRanker no_bio(f.store, f.phrases, f.index, nullptr, f.clf, f.emb, f.nli);
  CHECK_THROWS_AS(no_bio.Rank(fq), ValidationError);

  RankerOptions small;
  small.shortlist_n = 3;
  BarcodeRanker narrow(f.store, f.phrases, f.index, &f.bio, f.clf, f.emb, f.nli, small);
  auto n3 = narrow.Rank({"reduce water loss", 100, false});
  CHECK(n3.shortlisted == 3);
  CHECK(n3.results.size() <= 3);
}

TEST_CASE("BM25 matches the textbook formula") {
  std::vector<corpus::Article> arts = {{"a", "A", "A", "", ""}};
  std::vector<corpus::SentenceRecord> sents = {
      {"a#0", "a", "A", "The beetle catches fog on its wings.", 0},
      {"a#1", "a", "A", "Fog nets catch fog and water from fog.", 0},
      {"a#2", "a", "A", "The kangaroo rat buries its nose.", 0}};
  auto store = corpus::CorpusStore::FromRecords(arts, sents);
  Bm25Ranker bm(store, nullptr);
  // Hand count: lengths 7, 8, 6 (avg 7); "fog" df=2, tf 1 and 3.
  const double n = 3, df = 2, k1 = 1.2, b = 0.75, avg = 7.0;
  double idf = std::log(1 + (n - df + 0.5) / (df + 0.5));
  auto term = [&](double tf, double len) {
    return idf * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len / avg));
  };
  CHECK(bm.Score({"fog"}, 0) == doctest::Approx(term(1, 7)));
  CHECK(bm.Score({"fog"}, 1) == doctest::Approx(term(3, 8)));
  CHECK(bm.Score({"fog"}, 2) == 0.0);
  auto resp = bm.Rank({"fog", 5, false});
  REQUIRE(resp.results.size() == 2);
  CHECK(resp.results[0].sentence_id == "a#1");
  CHECK(resp.results[1].rank == 2);
  BioScoreMap bio = {{"a#0", 0.9}, {"a#1", 0.1}, {"a#2", 0.9}};
  Bm25Ranker fbm(store, &bio);
  auto f = fbm.Rank({"fog", 5, true});
  REQUIRE(f.results.size() == 1);
  CHECK(f.results[0].sentence_id == "a#0");
}

}  // namespace
}  // namespace barcode
