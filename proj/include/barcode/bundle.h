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

#ifndef BARCODE_BUNDLE_H_
#define BARCODE_BUNDLE_H_

// Index bundle: everything a query needs, in one directory.
//
//   corpus/{articles,sentences}.jsonl, corpus/stats.json
//   phrases.jsonl, parses.jsonl
//   bio/candidates.jsonl, bio/label_model.json, bio/scores.tsv
//   embeddings.{bin,ids,json}
//   classifier.json
//   config.json                  effective settings at build time
//   stages/<stage>.done          fingerprint of each finished stage
//   manifest.json                written by Seal; absent while unsealed

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "barcode/bio_filter.h"
#include "barcode/config.h"
#include "barcode/corpus.h"
#include "barcode/embedding_index.h"
#include "barcode/phrase_extraction.h"
#include "barcode/providers.h"
#include "barcode/ranking.h"
#include "barcode/relevance_classifier.h"

namespace barcode {

struct ProviderSet {
  std::unique_ptr<SegmentationProvider> segmenter;
  std::unique_ptr<ParseProvider> parser;
  std::unique_ptr<SrlProvider> srl;  // null when providers.srl = "none"
  std::unique_ptr<EmbeddingProvider> embedder;
  std::unique_ptr<NliProvider> nli;
};

// Instantiates the providers named in the config. "http" providers need
// providers.url; "fixture" embedding/NLI providers need their file.
ProviderSet MakeProviders(const Config& cfg);

inline const std::vector<std::string>& BuildStages() {
  static const std::vector<std::string> kStages = {"ingest", "extract", "bio", "embed",
                                                   "classifier"};
  return kStages;
}

struct StageResult {
  std::string stage;
  bool skipped = false;  // fingerprint matched an existing marker
  std::string fingerprint;
  nlohmann::ordered_json summary;
};

struct BuildReport {
  std::vector<StageResult> stages;
  std::string content_hash;
};

class BundleBuilder {
 public:
  BundleBuilder(std::filesystem::path index_dir, const Config& cfg, ProviderSet& providers);

  // Each stage skips itself when its marker fingerprint (inputs, settings,
  // provider ids and the upstream fingerprint) matches. Running a stage
  // removes the markers of later stages and unseals the bundle. A failing
  // stage leaves its marker absent, so the next build restarts there.
  StageResult Ingest(const std::filesystem::path& articles_jsonl);
  StageResult Extract();
  StageResult ScoreBio();
  StageResult Embed();
  // Copies the configured classifier model into the bundle; when the file
  // does not exist, trains one from classifier.labeled_pairs.
  StageResult Classifier();

  // All stages, then Seal. Without articles the ingest stage must already
  // be done.
  BuildReport BuildAll(const std::optional<std::filesystem::path>& articles_jsonl);

  bool force = false;  // ignore existing markers

 private:
  std::string Upstream(const std::string& stage) const;
  bool UpToDate(const std::string& stage, const std::string& fingerprint) const;
  void MarkDone(const std::string& stage, const std::string& fingerprint,
                const nlohmann::ordered_json& summary);
  void Invalidate(const std::string& stage);

  std::filesystem::path dir_;
  const Config& cfg_;
  ProviderSet& providers_;
};

// Trains the relevance classifier on the labeled pairs with the given
// providers and settings.
RelevanceClassifier TrainClassifier(const Config& cfg, EmbeddingProvider& emb, NliProvider& nli);

struct Manifest {
  int format = 1;
  std::string content_hash;  // over file hashes and provider ids only
  std::string sealed_at;     // UTC, informational
  nlohmann::ordered_json providers;
  std::map<std::string, std::string> files;  // relative path -> sha256
  std::map<std::string, std::string> stages;  // stage -> fingerprint

  nlohmann::ordered_json ToJson() const;
  static Manifest FromJson(const nlohmann::json& j);
};

// Hashes every bundle file into manifest.json. Requires every stage marker.
Manifest Seal(const std::filesystem::path& index_dir);
bool IsSealed(const std::filesystem::path& index_dir);
// Re-hashes every listed file. Unsealed bundle, missing or changed file:
// StoreError.
Manifest VerifyBundle(const std::filesystem::path& index_dir);

// Loaded, verified bundle plus the retrievers over it. Read-only; Rank may
// be called concurrently.
class Engine {
 public:
  // Verifies the bundle, then loads it. The providers must produce the same
  // embedding model the index was built with.
  static std::unique_ptr<Engine> Open(const std::filesystem::path& index_dir, const Config& cfg,
                                      ProviderSet providers);
  static std::unique_ptr<Engine> Open(const std::filesystem::path& index_dir, const Config& cfg);

  RankResponse Query(const barcode::Query& q);
  RankResponse Baseline(const barcode::Query& q);

  const corpus::CorpusStore& corpus() const { return corpus_; }
  const Manifest& manifest() const { return manifest_; }
  const Config& config() const { return cfg_; }
  const nlohmann::json& build_config() const { return build_config_; }
  const std::vector<extract::CandidatePhrase>& phrases() const { return phrases_; }
  std::optional<double> BioScore(const std::string& sentence_id) const;
  std::vector<const extract::CandidatePhrase*> PhrasesOf(const std::string& sentence_id) const;
  const std::filesystem::path& dir() const { return dir_; }

 private:
  Engine() = default;

  std::filesystem::path dir_;
  Config cfg_;
  nlohmann::json build_config_;
  Manifest manifest_;
  ProviderSet providers_;
  corpus::CorpusStore corpus_;
  std::vector<extract::CandidatePhrase> phrases_;
  std::multimap<std::string, std::size_t> phrases_by_sentence_;
  EmbeddingIndex index_;
  BioScoreMap bio_;
  RelevanceClassifier classifier_;
  std::unique_ptr<BarcodeRanker> ranker_;
  std::unique_ptr<Bm25Ranker> baseline_;
};

}  // namespace barcode

#endif  // BARCODE_BUNDLE_H_
