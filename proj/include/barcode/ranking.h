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

#ifndef BARCODE_RANKING_H_
#define BARCODE_RANKING_H_

#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "barcode/corpus.h"
#include "barcode/embedding_index.h"
#include "barcode/phrase_extraction.h"
#include "barcode/relevance_classifier.h"

namespace barcode {

struct Query {
  std::string text;
  int k = 15;
  bool use_filtered = false;
};

struct RankedResult {
  int rank = 0;  // 1-based
  std::string sentence_id;
  std::string organism;
  std::string sentence_text;
  extract::CandidatePhrase matched_phrase;
  RelevanceFeatures features;
  double combined_score = 0.0;
};

struct RankResponse {
  std::vector<RankedResult> results;
  std::string status = "ok";
  std::size_t candidates = 0;   // phrases eligible before the shortlist
  std::size_t shortlisted = 0;  // phrases scored by NLI
};

nlohmann::ordered_json ResultToJson(const RankedResult& r);
nlohmann::ordered_json ResponseToJson(const Query& q, const RankResponse& r);

// Sentence-id -> bio-inspiration score.
using BioScoreMap = std::map<std::string, double>;

class Retriever {
 public:
  virtual ~Retriever() = default;
  virtual std::string name() const = 0;
  // Throws ValidationError on an empty query text or k < 1.
  virtual RankResponse Rank(const Query& q) = 0;
};

struct RankerOptions {
  std::size_t shortlist_n = 4000;
  double tau = 0.5;
  bool bidirectional_nli = false;  // average phrase->query and query->phrase
  std::size_t nli_batch = 64;
};

// NLI with the phrase as premise and the query as hypothesis.
std::vector<NliScores> ScoreNli(NliProvider& nli, const std::vector<std::string>& phrases,
                                const std::string& query, bool bidirectional,
                                std::size_t batch = 64);

struct LabeledText {
  std::string query;
  std::string phrase;
  bool relevant = false;
};

// JSONL rows {"query","phrase","label": 0|1}.
std::vector<LabeledText> ReadLabeledPairs(const std::filesystem::path& path);

// Features for every row, then the labeled training set.
std::vector<LabeledPair> FeaturizeLabeledPairs(const std::vector<LabeledText>& rows,
                                               EmbeddingProvider& emb, NliProvider& nli,
                                               bool bidirectional = false);

// Features of (phrase, query) pairs, for classifier training.
std::vector<RelevanceFeatures> ComputeFeatures(
    EmbeddingProvider& emb, NliProvider& nli,
    const std::vector<std::pair<std::string, std::string>>& phrase_query,
    bool bidirectional = false);

// Filter (optional) -> exact shortlist -> NLI -> classifier decision ->
// best phrase per sentence -> top k. Results are ordered by score, then
// cosine, then sentence id. Safe to call from several threads; provider
// calls are serialized.
class BarcodeRanker : public Retriever {
 public:
  // All referenced objects must outlive the ranker. `bio_scores` may be null
  // when filtered queries are not needed.
  BarcodeRanker(const corpus::CorpusStore& corpus,
                const std::vector<extract::CandidatePhrase>& phrases,
                const EmbeddingIndex& index, const BioScoreMap* bio_scores,
                const RelevanceClassifier& classifier, EmbeddingProvider& embedder,
                NliProvider& nli, RankerOptions options = {});

  std::string name() const override { return "barcode"; }
  RankResponse Rank(const Query& q) override;

 private:
  const corpus::CorpusStore& corpus_;
  const EmbeddingIndex& index_;
  const BioScoreMap* bio_;
  const RelevanceClassifier& clf_;
  EmbeddingProvider& embedder_;
  NliProvider& nli_;
  RankerOptions opt_;
  std::vector<const extract::CandidatePhrase*> row_phrase_;
  std::mutex provider_mu_;
};

// Okapi BM25 over sentence text (lower-cased word tokens, no stemming),
// with Lucene's idf ln(1 + (N - df + 0.5) / (df + 0.5)).
class Bm25Ranker : public Retriever {
 public:
  Bm25Ranker(const corpus::CorpusStore& corpus, const BioScoreMap* bio_scores,
             double tau = 0.5, double k1 = 1.2, double b = 0.75);

  std::string name() const override { return "bm25"; }
  RankResponse Rank(const Query& q) override;

  // Score of one sentence (by position in the corpus) for a tokenized query.
  double Score(const std::vector<std::string>& query_terms, std::size_t doc) const;
  static std::vector<std::string> Analyze(std::string_view text);

 private:
  const corpus::CorpusStore& corpus_;
  const BioScoreMap* bio_;
  double tau_, k1_, b_;
  std::vector<std::map<std::string, int>> tf_;
  std::vector<std::size_t> len_;
  std::map<std::string, std::size_t> df_;
  double avg_len_ = 0.0;
};

}  // namespace barcode

#endif  // BARCODE_RANKING_H_
