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

#ifndef BARCODE_PROVIDERS_H_
#define BARCODE_PROVIDERS_H_

// Pluggable model providers. Every provider family has a record/replay
// fixture implementation (tests, offline builds) and an HTTP client for a
// remote inference service. Embedding and NLI also have deterministic
// in-process lexical implementations.
//
// Provider instances are not assumed to be thread safe; use one per worker.

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "barcode/common.h"
#include "barcode/parse_tree.h"

namespace barcode {

struct QAPair {
  std::string verb;
  std::string verb_lemma;
  std::string question;
  std::string answer;
};

nlohmann::json QAPairToJson(const QAPair& qa);
QAPair QAPairFromJson(const nlohmann::json& j);

struct NliScores {
  double entail = 0.0;
  double neutral = 0.0;
  double contradict = 0.0;

  // Index of the largest coordinate: 0 entail, 1 neutral, 2 contradict.
  int Argmax() const;
};

using Vector = std::vector<float>;

class SegmentationProvider {
 public:
  virtual ~SegmentationProvider() = default;
  virtual std::string id() const = 0;
  virtual std::vector<CharSpan> Segment(std::string_view text) = 0;
};

class ParseProvider {
 public:
  virtual ~ParseProvider() = default;
  virtual std::string id() const = 0;
  // Returned tree has spans aligned to `text`.
  virtual ParseTree Parse(std::string_view sentence_id,
                          std::string_view text) = 0;
};

class SrlProvider {
 public:
  virtual ~SrlProvider() = default;
  virtual std::string id() const = 0;
  virtual std::vector<QAPair> Analyze(std::string_view sentence_id,
                                      std::string_view text) = 0;
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string id() const = 0;
  // Unit L2-norm vectors, one per text. Never returns zero vectors.
  virtual std::vector<Vector> Embed(std::span<const std::string> texts) = 0;
};

class NliProvider {
 public:
  virtual ~NliProvider() = default;
  virtual std::string id() const = 0;
  virtual std::vector<NliScores> Score(
      std::span<const std::pair<std::string, std::string>> premise_hypothesis) = 0;
  NliScores Score(const std::string& premise, const std::string& hypothesis);
};

// --- builtin -------------------------------------------------------------

class BuiltinSegmenter : public SegmentationProvider {
 public:
  std::string id() const override;
  std::vector<CharSpan> Segment(std::string_view text) override;
};

// Signed feature hashing of content lemmas and lemma character trigrams
// into `dim` buckets, L2 normalized.
class HashedLexicalEncoder : public EmbeddingProvider {
 public:
  explicit HashedLexicalEncoder(int dim = 256) : dim_(dim) {}
  std::string id() const override;
  std::vector<Vector> Embed(std::span<const std::string> texts) override;

 private:
  int dim_;
};

// Lexical-overlap NLI with a verb polarity lexicon: hypothesis coverage by
// the premise drives entailment, an antonymous verb over shared objects
// drives contradiction.
class LexicalNli : public NliProvider {
 public:
  std::string id() const override;
  std::vector<NliScores> Score(
      std::span<const std::pair<std::string, std::string>> pairs) override;
  using NliProvider::Score;
};

// --- fixtures ------------------------------------------------------------

// Reads <dir>/<sentence_id>.json.
class FixtureParseProvider : public ParseProvider {
 public:
  explicit FixtureParseProvider(std::filesystem::path dir);
  std::string id() const override;
  ParseTree Parse(std::string_view sentence_id, std::string_view text) override;

 private:
  std::filesystem::path dir_;
};

class FixtureSrlProvider : public SrlProvider {
 public:
  explicit FixtureSrlProvider(std::filesystem::path dir);
  std::string id() const override;
  std::vector<QAPair> Analyze(std::string_view sentence_id,
                              std::string_view text) override;

 private:
  std::filesystem::path dir_;
};

// Replays vectors from a JSONL file of {"text","vector"} rows. Unknown text
// is a ProviderError. With a delegate, misses are computed by the delegate
// and appended to the file (record mode).
class FixtureEmbeddingProvider : public EmbeddingProvider {
 public:
  FixtureEmbeddingProvider(std::filesystem::path file,
                           std::unique_ptr<EmbeddingProvider> record_from = nullptr);
  std::string id() const override;
  std::vector<Vector> Embed(std::span<const std::string> texts) override;

 private:
  std::filesystem::path file_;
  std::string model_id_;
  std::map<std::string, Vector, std::less<>> table_;
  std::unique_ptr<EmbeddingProvider> delegate_;
};

// Same scheme for NLI: JSONL rows {"premise","hypothesis","scores":[e,n,c]}.
class FixtureNliProvider : public NliProvider {
 public:
  FixtureNliProvider(std::filesystem::path file,
                     std::unique_ptr<NliProvider> record_from = nullptr);
  std::string id() const override;
  std::vector<NliScores> Score(
      std::span<const std::pair<std::string, std::string>> pairs) override;
  using NliProvider::Score;

 private:
  std::filesystem::path file_;
  std::string model_id_;
  std::map<std::pair<std::string, std::string>, NliScores> table_;
  std::unique_ptr<NliProvider> delegate_;
};

// Wraps a parse/SRL provider and writes every answer into a fixture dir.
class RecordingParseProvider : public ParseProvider {
 public:
  RecordingParseProvider(std::unique_ptr<ParseProvider> inner,
                         std::filesystem::path dir);
  std::string id() const override { return inner_->id(); }
  ParseTree Parse(std::string_view sentence_id, std::string_view text) override;

 private:
  std::unique_ptr<ParseProvider> inner_;
  std::filesystem::path dir_;
};

class RecordingSrlProvider : public SrlProvider {
 public:
  RecordingSrlProvider(std::unique_ptr<SrlProvider> inner,
                       std::filesystem::path dir);
  std::string id() const override { return inner_->id(); }
  std::vector<QAPair> Analyze(std::string_view sentence_id,
                              std::string_view text) override;

 private:
  std::unique_ptr<SrlProvider> inner_;
  std::filesystem::path dir_;
};

// --- remote --------------------------------------------------------------

// JSON over HTTP. Endpoints (relative to the base URL):
//   POST /segment {"text"}                      -> {"spans": [[s,e],...]}
//   POST /parse   {"sentence_id","text"}        -> {"tokens": [...]}
//   POST /srl     {"sentence_id","text"}        -> {"qa": [{verb,...}]}
//   POST /embed   {"model","texts"}             -> {"vectors": [[...]]}
//   POST /nli     {"model","pairs": [[p,h]]}    -> {"scores": [[e,n,c]]}
class HttpProviderClient {
 public:
  explicit HttpProviderClient(std::string base_url, int timeout_s = 120);
  nlohmann::json Post(const std::string& path, const nlohmann::json& body) const;
  const std::string& base_url() const { return base_url_; }

 private:
  std::string base_url_;
  int timeout_s_;
};

class HttpSegmenter : public SegmentationProvider {
 public:
  explicit HttpSegmenter(std::string url) : client_(std::move(url)) {}
  std::string id() const override;
  std::vector<CharSpan> Segment(std::string_view text) override;

 private:
  HttpProviderClient client_;
};

class HttpParseProvider : public ParseProvider {
 public:
  explicit HttpParseProvider(std::string url) : client_(std::move(url)) {}
  std::string id() const override;
  ParseTree Parse(std::string_view sentence_id, std::string_view text) override;

 private:
  HttpProviderClient client_;
};

class HttpSrlProvider : public SrlProvider {
 public:
  explicit HttpSrlProvider(std::string url) : client_(std::move(url)) {}
  std::string id() const override;
  std::vector<QAPair> Analyze(std::string_view sentence_id,
                              std::string_view text) override;

 private:
  HttpProviderClient client_;
};

class HttpEmbeddingProvider : public EmbeddingProvider {
 public:
  HttpEmbeddingProvider(std::string url, std::string model)
      : client_(std::move(url)), model_(std::move(model)) {}
  std::string id() const override { return model_; }
  std::vector<Vector> Embed(std::span<const std::string> texts) override;

 private:
  HttpProviderClient client_;
  std::string model_;
};

class HttpNliProvider : public NliProvider {
 public:
  HttpNliProvider(std::string url, std::string model)
      : client_(std::move(url)), model_(std::move(model)) {}
  std::string id() const override { return model_; }
  std::vector<NliScores> Score(
      std::span<const std::pair<std::string, std::string>> pairs) override;
  using NliProvider::Score;

 private:
  HttpProviderClient client_;
  std::string model_;
};

// --- helpers -------------------------------------------------------------

void NormalizeInPlace(Vector& v);
double Dot(std::span<const float> a, std::span<const float> b);
NliScores ValidateNli(NliScores s);

}  // namespace barcode

#endif  // BARCODE_PROVIDERS_H_
