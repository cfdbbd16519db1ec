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
#include <cctype>
#include <cmath>

#include "barcode/text.h"

namespace barcode {

using nlohmann::ordered_json;

ordered_json ResultToJson(const RankedResult& r) {
  ordered_json j;
  j["rank"] = r.rank;
  j["sentence_id"] = r.sentence_id;
  j["organism"] = r.organism;
  j["sentence_text"] = r.sentence_text;
  if (r.matched_phrase.phrase_id.empty()) {
    j["matched_phrase"] = nullptr;
  } else {
    j["matched_phrase"] = extract::PhraseToJson(r.matched_phrase);
  }
  j["features"] = {{"cosine", r.features.cosine},
                   {"entail", r.features.nli.entail},
                   {"neutral", r.features.nli.neutral},
                   {"contradict", r.features.nli.contradict}};
  j["combined_score"] = r.combined_score;
  return j;
}

ordered_json ResponseToJson(const Query& q, const RankResponse& r) {
  ordered_json j;
  j["query"] = q.text;
  j["k"] = q.k;
  j["filtered"] = q.use_filtered;
  j["status"] = r.status;
  j["candidates"] = r.candidates;
  j["shortlisted"] = r.shortlisted;
  j["results"] = ordered_json::array();
  for (const auto& res : r.results) j["results"].push_back(ResultToJson(res));
  return j;
}

namespace {

void ValidateQuery(const Query& q) {
  if (Trim(q.text).empty()) throw ValidationError("query text is empty");
  if (q.k < 1) throw ValidationError("k must be at least 1");
}

std::vector<NliScores> ScoreDirected(NliProvider& nli,
                                     const std::vector<std::pair<std::string, std::string>>& pairs,
                                     std::size_t batch) {
  std::vector<NliScores> out;
  out.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); i += batch) {
    std::size_t len = std::min(batch, pairs.size() - i);
    auto got = nli.Score(std::span(pairs).subspan(i, len));
    if (got.size() != len) throw ProviderError("NLI provider returned wrong batch size");
    for (const auto& s : got) out.push_back(ValidateNli(s));
  }
  return out;
}

}  // namespace

std::vector<NliScores> ScoreNli(NliProvider& nli, const std::vector<std::string>& phrases,
                                const std::string& query, bool bidirectional,
                                std::size_t batch) {
  if (batch == 0) batch = 1;
  std::vector<std::pair<std::string, std::string>> forward;
  forward.reserve(phrases.size());
  for (const auto& p : phrases) forward.emplace_back(p, query);
  auto out = ScoreDirected(nli, forward, batch);
  if (!bidirectional) return out;
  for (auto& [p, h] : forward) std::swap(p, h);
  auto back = ScoreDirected(nli, forward, batch);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = {(out[i].entail + back[i].entail) / 2, (out[i].neutral + back[i].neutral) / 2,
              (out[i].contradict + back[i].contradict) / 2};
  }
  return out;
}

std::vector<RelevanceFeatures> ComputeFeatures(
    EmbeddingProvider& emb, NliProvider& nli,
    const std::vector<std::pair<std::string, std::string>>& phrase_query, bool bidirectional) {
  std::map<std::string, Vector> cache;
  std::vector<std::string> texts;
  for (const auto& [p, q] : phrase_query) {
    for (const auto* t : {&p, &q}) {
      if (cache.emplace(*t, Vector{}).second) texts.push_back(*t);
    }
  }
  for (std::size_t i = 0; i < texts.size(); i += 64) {
    std::size_t len = std::min<std::size_t>(64, texts.size() - i);
    auto got = emb.Embed(std::span(texts).subspan(i, len));
    for (std::size_t k = 0; k < len; ++k) cache[texts[i + k]] = std::move(got[k]);
  }
  auto scores = ScoreDirected(nli, phrase_query, 64);
  if (bidirectional) {
    std::vector<std::pair<std::string, std::string>> reversed;
    for (const auto& [p, q] : phrase_query) reversed.emplace_back(q, p);
    auto back = ScoreDirected(nli, reversed, 64);
    for (std::size_t i = 0; i < scores.size(); ++i) {
      scores[i] = {(scores[i].entail + back[i].entail) / 2,
                   (scores[i].neutral + back[i].neutral) / 2,
                   (scores[i].contradict + back[i].contradict) / 2};
    }
  }
  std::vector<RelevanceFeatures> out;
  out.reserve(phrase_query.size());
  for (std::size_t i = 0; i < phrase_query.size(); ++i) {
    const auto& [p, q] = phrase_query[i];
    out.push_back({Dot(cache.at(p), cache.at(q)), scores[i]});
  }
  return out;
}

std::vector<LabeledText> ReadLabeledPairs(const std::filesystem::path& path) {
  std::vector<LabeledText> out;
  std::size_t lineno = 0;
  for (const auto& line : ReadLines(path)) {
    ++lineno;
    try {
      auto j = nlohmann::json::parse(line);
      int label = j.at("label").get<int>();
      if (label != 0 && label != 1) throw ValidationError("label must be 0 or 1");
      out.push_back({j.at("query").get<std::string>(), j.at("phrase").get<std::string>(),
                     label == 1});
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<LabeledPair> FeaturizeLabeledPairs(const std::vector<LabeledText>& rows,
                                               EmbeddingProvider& emb, NliProvider& nli,
                                               bool bidirectional) {
  std::vector<std::pair<std::string, std::string>> pq;
  pq.reserve(rows.size());
  for (const auto& r : rows) pq.emplace_back(r.phrase, r.query);
  auto feats = ComputeFeatures(emb, nli, pq, bidirectional);
  std::vector<LabeledPair> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out.push_back({feats[i], rows[i].relevant});
  return out;
}

BarcodeRanker::BarcodeRanker(const corpus::CorpusStore& corpus,
                             const std::vector<extract::CandidatePhrase>& phrases,
                             const EmbeddingIndex& index, const BioScoreMap* bio_scores,
                             const RelevanceClassifier& classifier, EmbeddingProvider& embedder,
                             NliProvider& nli, RankerOptions options)
    : corpus_(corpus),
      index_(index),
      bio_(bio_scores),
      clf_(classifier),
      embedder_(embedder),
      nli_(nli),
      opt_(options) {
  std::map<std::string, const extract::CandidatePhrase*> by_id;
  for (const auto& p : phrases) by_id[p.phrase_id] = &p;
  row_phrase_.reserve(index_.size());
  for (const auto& id : index_.phrase_ids()) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw StoreError("index row " + id + " has no phrase record");
    if (!corpus_.FindSentence(it->second->sentence_id)) {
      throw StoreError("phrase " + id + " refers to a missing sentence");
    }
    row_phrase_.push_back(it->second);
  }
}

RankResponse BarcodeRanker::Rank(const Query& q) {
  ValidateQuery(q);
  RankResponse resp;
  if (q.use_filtered && !bio_) {
    throw ValidationError("filtered query needs bio-inspiration scores");
  }

  std::vector<bool> allowed;
  std::size_t eligible = index_.size();
  if (q.use_filtered) {
    allowed.assign(index_.size(), false);
    eligible = 0;
    for (std::size_t i = 0; i < index_.size(); ++i) {
      auto it = bio_->find(row_phrase_[i]->sentence_id);
      if (it != bio_->end() && it->second >= opt_.tau) {
        allowed[i] = true;
        ++eligible;
      }
    }
  }
  resp.candidates = eligible;
  if (eligible == 0) {
    resp.status = q.use_filtered ? "no sentences pass the bio-inspiration filter"
                                 : "index is empty";
    return resp;
  }

  Vector qv;
  std::vector<NliScores> nli;
  std::vector<ShortlistEntry> shortlist;
  {
    std::lock_guard<std::mutex> lock(provider_mu_);
    qv = embedder_.Embed(std::span(&q.text, 1)).front();
    shortlist = Shortlist(qv, index_, opt_.shortlist_n, allowed);
    std::vector<std::string> texts;
    texts.reserve(shortlist.size());
    for (const auto& e : shortlist) texts.push_back(row_phrase_[e.row]->text);
    nli = ScoreNli(nli_, texts, q.text, opt_.bidirectional_nli, opt_.nli_batch);
  }
  resp.shortlisted = shortlist.size();

  std::map<std::string, RankedResult> best;
  for (std::size_t i = 0; i < shortlist.size(); ++i) {
    const auto* phrase = row_phrase_[shortlist[i].row];
    RelevanceFeatures f{shortlist[i].cosine, nli[i]};
    double score = clf_.Decision(f);
    auto it = best.find(phrase->sentence_id);
    if (it != best.end()) {
      const RankedResult& cur = it->second;
      bool better = score > cur.combined_score ||
                    (score == cur.combined_score &&
                     (f.cosine > cur.features.cosine ||
                      (f.cosine == cur.features.cosine &&
                       phrase->phrase_id < cur.matched_phrase.phrase_id)));
      if (!better) continue;
    }
    const auto* s = corpus_.FindSentence(phrase->sentence_id);
    RankedResult r;
    r.sentence_id = s->sentence_id;
    r.organism = s->organism;
    r.sentence_text = s->text;
    r.matched_phrase = *phrase;
    r.features = f;
    r.combined_score = score;
    best[phrase->sentence_id] = std::move(r);
  }

  for (auto& [_, r] : best) resp.results.push_back(std::move(r));
  std::sort(resp.results.begin(), resp.results.end(), [](const auto& a, const auto& b) {
    if (a.combined_score != b.combined_score) return a.combined_score > b.combined_score;
    if (a.features.cosine != b.features.cosine) return a.features.cosine > b.features.cosine;
    return a.sentence_id < b.sentence_id;
  });
  if (resp.results.size() > static_cast<std::size_t>(q.k)) resp.results.resize(q.k);
  for (std::size_t i = 0; i < resp.results.size(); ++i) resp.results[i].rank = int(i) + 1;
  return resp;
}

Bm25Ranker::Bm25Ranker(const corpus::CorpusStore& corpus, const BioScoreMap* bio_scores,
                       double tau, double k1, double b)
    : corpus_(corpus), bio_(bio_scores), tau_(tau), k1_(k1), b_(b) {
  std::size_t total = 0;
  for (const auto& s : corpus_.sentences()) {
    std::map<std::string, int> tf;
    auto terms = Analyze(s.text);
    for (const auto& t : terms) ++tf[t];
    for (const auto& [t, _] : tf) ++df_[t];
    len_.push_back(terms.size());
    total += terms.size();
    tf_.push_back(std::move(tf));
  }
  avg_len_ = len_.empty() ? 0.0 : static_cast<double>(total) / static_cast<double>(len_.size());
}

std::vector<std::string> Bm25Ranker::Analyze(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& t : text::Tokenize(text)) {
    if (std::isalnum(static_cast<unsigned char>(t.text[0]))) out.push_back(ToLower(t.text));
  }
  return out;
}

double Bm25Ranker::Score(const std::vector<std::string>& query_terms, std::size_t doc) const {
  const double n = static_cast<double>(tf_.size());
  double s = 0;
  for (const auto& t : query_terms) {
    auto it = tf_[doc].find(t);
    if (it == tf_[doc].end()) continue;
    double df = static_cast<double>(df_.at(t));
    double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
    double f = it->second;
    double norm = avg_len_ > 0 ? static_cast<double>(len_[doc]) / avg_len_ : 1.0;
    s += idf * f * (k1_ + 1) / (f + k1_ * (1 - b_ + b_ * norm));
  }
  return s;
}

RankResponse Bm25Ranker::Rank(const Query& q) {
  ValidateQuery(q);
  if (q.use_filtered && !bio_) {
    throw ValidationError("filtered query needs bio-inspiration scores");
  }
  RankResponse resp;
  auto terms = Analyze(q.text);
  const auto& sents = corpus_.sentences();
  for (std::size_t d = 0; d < sents.size(); ++d) {
    if (q.use_filtered) {
      auto it = bio_->find(sents[d].sentence_id);
      if (it == bio_->end() || it->second < tau_) continue;
    }
    ++resp.candidates;
    double s = Score(terms, d);
    if (s <= 0) continue;
    RankedResult r;
    r.sentence_id = sents[d].sentence_id;
    r.organism = sents[d].organism;
    r.sentence_text = sents[d].text;
    r.combined_score = s;
    resp.results.push_back(std::move(r));
  }
  if (resp.candidates == 0) {
    resp.status = q.use_filtered ? "no sentences pass the bio-inspiration filter"
                                 : "corpus is empty";
  }
  resp.shortlisted = resp.results.size();
  std::sort(resp.results.begin(), resp.results.end(), [](const auto& a, const auto& b) {
    if (a.combined_score != b.combined_score) return a.combined_score > b.combined_score;
    return a.sentence_id < b.sentence_id;
  });
  if (resp.results.size() > static_cast<std::size_t>(q.k)) resp.results.resize(q.k);
  for (std::size_t i = 0; i < resp.results.size(); ++i) resp.results[i].rank = int(i) + 1;
  return resp;
}

}  // namespace barcode
