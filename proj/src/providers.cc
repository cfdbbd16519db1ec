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

#include "barcode/providers.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "barcode/text.h"
#include "httplib.h"

namespace barcode {

using nlohmann::json;

json QAPairToJson(const QAPair& qa) {
  return json{{"verb", qa.verb},
              {"verb_lemma", qa.verb_lemma},
              {"question", qa.question},
              {"answer", qa.answer}};
}

QAPair QAPairFromJson(const json& j) {
  QAPair qa;
  qa.verb = j.at("verb").get<std::string>();
  qa.verb_lemma = j.value("verb_lemma", text::LemmatizeVerb(qa.verb));
  qa.question = j.at("question").get<std::string>();
  qa.answer = j.at("answer").get<std::string>();
  return qa;
}

int NliScores::Argmax() const {
  if (entail >= neutral && entail >= contradict) return 0;
  if (neutral >= contradict) return 1;
  return 2;
}

NliScores NliProvider::Score(const std::string& premise,
                             const std::string& hypothesis) {
  std::pair<std::string, std::string> p{premise, hypothesis};
  return Score(std::span(&p, 1)).front();
}

void NormalizeInPlace(Vector& v) {
  double norm = 0.0;
  for (float x : v) norm += static_cast<double>(x) * x;
  norm = std::sqrt(norm);
  if (norm == 0.0) throw ProviderError("cannot normalize a zero vector");
  for (float& x : v) x = static_cast<float>(x / norm);
}

double Dot(std::span<const float> a, std::span<const float> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += static_cast<double>(a[i]) * b[i];
  }
  return s;
}

NliScores ValidateNli(NliScores s) {
  for (double p : {s.entail, s.neutral, s.contradict}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ProviderError("NLI probability outside [0,1]");
    }
  }
  double sum = s.entail + s.neutral + s.contradict;
  if (std::abs(sum - 1.0) > 1e-4) {
    throw ProviderError("NLI probabilities do not sum to 1");
  }
  // Renormalize away float noise so downstream sums are exact to 1e-12.
  s.entail /= sum;
  s.neutral /= sum;
  s.contradict /= sum;
  return s;
}

// --- builtin -------------------------------------------------------------

std::string BuiltinSegmenter::id() const {
  return std::string(text::kSegmenterVersion);
}

std::vector<CharSpan> BuiltinSegmenter::Segment(std::string_view t) {
  return text::SegmentSentences(t);
}

namespace {

std::uint64_t Fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void AddFeature(Vector& v, std::string_view feature, double weight) {
  std::uint64_t h = Fnv1a(feature);
  std::size_t bucket = static_cast<std::size_t>(h % v.size());
  double sign = (h >> 63) ? -1.0 : 1.0;
  v[bucket] += static_cast<float>(sign * weight);
}

}  // namespace

std::string HashedLexicalEncoder::id() const {
  return "builtin:hashed-lexical-v1/d" + std::to_string(dim_);
}

std::vector<Vector> HashedLexicalEncoder::Embed(
    std::span<const std::string> texts) {
  std::vector<Vector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) {
    Vector v(static_cast<std::size_t>(dim_), 0.0f);
    for (const auto& lemma : text::ContentLemmas(t)) {
      AddFeature(v, "w:" + lemma, 1.0);
      std::string padded = "#" + lemma + "#";
      if (padded.size() >= 3) {
        double w = 0.6 / static_cast<double>(padded.size() - 2);
        for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
          AddFeature(v, "c:" + padded.substr(i, 3), w);
        }
      }
    }
    bool zero = std::all_of(v.begin(), v.end(), [](float x) { return x == 0.0f; });
    if (zero) AddFeature(v, "raw:" + text::NormalizeSpaces(t), 1.0);
    NormalizeInPlace(v);
    out.push_back(std::move(v));
  }
  return out;
}

namespace {

enum class Polarity { kNone, kUp, kDown, kBlock, kCause };

Polarity VerbPolarity(std::string_view lemma) {
  static const std::unordered_map<std::string_view, Polarity> kLexicon = {
      {"increase", Polarity::kUp},   {"raise", Polarity::kUp},
      {"enhance", Polarity::kUp},    {"boost", Polarity::kUp},
      {"gain", Polarity::kUp},       {"improve", Polarity::kUp},
      {"amplify", Polarity::kUp},    {"expand", Polarity::kUp},
      {"enlarge", Polarity::kUp},    {"strengthen", Polarity::kUp},
      {"maximize", Polarity::kUp},   {"elevate", Polarity::kUp},
      {"accelerate", Polarity::kUp}, {"reduce", Polarity::kDown},
      {"decrease", Polarity::kDown}, {"lower", Polarity::kDown},
      {"minimize", Polarity::kDown}, {"diminish", Polarity::kDown},
      {"lose", Polarity::kDown},     {"lessen", Polarity::kDown},
      {"shrink", Polarity::kDown},   {"weaken", Polarity::kDown},
      {"dampen", Polarity::kDown},   {"slow", Polarity::kDown},
      {"prevent", Polarity::kBlock}, {"avoid", Polarity::kBlock},
      {"block", Polarity::kBlock},   {"inhibit", Polarity::kBlock},
      {"stop", Polarity::kBlock},    {"resist", Polarity::kBlock},
      {"repel", Polarity::kBlock},   {"suppress", Polarity::kBlock},
      {"cause", Polarity::kCause},   {"induce", Polarity::kCause},
      {"trigger", Polarity::kCause}, {"promote", Polarity::kCause},
      {"attract", Polarity::kCause}, {"absorb", Polarity::kCause}};
  auto it = kLexicon.find(lemma);
  return it == kLexicon.end() ? Polarity::kNone : it->second;
}

bool Opposed(Polarity a, Polarity b) {
  return (a == Polarity::kUp && b == Polarity::kDown) ||
         (a == Polarity::kDown && b == Polarity::kUp) ||
         (a == Polarity::kBlock && b == Polarity::kCause) ||
         (a == Polarity::kCause && b == Polarity::kBlock);
}

NliScores Softmax(double e, double n, double c) {
  double m = std::max({e, n, c});
  double ee = std::exp(e - m), en = std::exp(n - m), ec = std::exp(c - m);
  double z = ee + en + ec;
  return {ee / z, en / z, ec / z};
}

}  // namespace

std::string LexicalNli::id() const { return "builtin:lexical-nli-v1"; }

std::vector<NliScores> LexicalNli::Score(
    std::span<const std::pair<std::string, std::string>> pairs) {
  std::vector<NliScores> out;
  out.reserve(pairs.size());
  for (const auto& [premise, hypothesis] : pairs) {
    auto p = text::ContentLemmas(premise);
    auto h = text::ContentLemmas(hypothesis);
    if (h.empty() || p.empty()) {
      out.push_back(Softmax(0.0, 1.0, 0.0));
      continue;
    }
    std::unordered_set<std::string> pset(p.begin(), p.end());
    int covered = 0, opposed = 0, objects = 0, shared_objects = 0;
    for (const auto& w : h) {
      Polarity pw = VerbPolarity(w);
      if (pw != Polarity::kNone) {
        bool same = false, opp = false;
        for (const auto& q : p) {
          Polarity pq = VerbPolarity(q);
          same |= (q == w) || (pq == pw);
          opp |= Opposed(pw, pq);
        }
        if (same) ++covered;
        if (opp && !same) ++opposed;
        continue;
      }
      ++objects;
      if (pset.count(w)) {
        ++covered;
        ++shared_objects;
      }
    }
    double coverage = static_cast<double>(covered) / h.size();
    double object_overlap =
        objects == 0 ? 1.0 : static_cast<double>(shared_objects) / objects;
    double contra = opposed > 0 ? 1.0 : 0.0;
    double e = 5.0 * coverage - 2.5 - 4.0 * contra;
    double c = contra * (4.0 * object_overlap + 2.0) - 1.5;
    out.push_back(Softmax(e, 0.5, c));
  }
  return out;
}

// --- fixtures ------------------------------------------------------------

namespace {

std::filesystem::path FixturePath(const std::filesystem::path& dir,
                                  std::string_view sentence_id) {
  return dir / (std::string(sentence_id) + ".json");
}

json LoadJsonFile(const std::filesystem::path& p) {
  try {
    return json::parse(ReadFile(p));
  } catch (const json::exception& e) {
    throw ProviderError("bad fixture " + p.string() + ": " + e.what());
  }
}

std::vector<json> LoadJsonl(const std::filesystem::path& p) {
  std::vector<json> rows;
  if (!std::filesystem::exists(p)) return rows;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    if (Trim(line).empty()) continue;
    rows.push_back(json::parse(line));
  }
  return rows;
}

void AppendJsonl(const std::filesystem::path& p, const json& row) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::app);
  out << row.dump() << '\n';
}

}  // namespace

FixtureParseProvider::FixtureParseProvider(std::filesystem::path dir)
    : dir_(std::move(dir)) {}

std::string FixtureParseProvider::id() const { return "fixture:parse"; }

ParseTree FixtureParseProvider::Parse(std::string_view sentence_id,
                                      std::string_view text) {
  auto path = FixturePath(dir_, sentence_id);
  if (!std::filesystem::exists(path)) {
    throw ProviderError("no parse fixture for " + std::string(sentence_id));
  }
  ParseTree tree;
  try {
    tree = ParseTree::FromJson(LoadJsonFile(path));
    tree.AlignTo(text);
  } catch (const ValidationError& e) {
    throw ProviderError("parse fixture " + path.string() + ": " + e.what());
  }
  return tree;
}

FixtureSrlProvider::FixtureSrlProvider(std::filesystem::path dir)
    : dir_(std::move(dir)) {}

std::string FixtureSrlProvider::id() const { return "fixture:srl"; }

std::vector<QAPair> FixtureSrlProvider::Analyze(std::string_view sentence_id,
                                                std::string_view) {
  auto path = FixturePath(dir_, sentence_id);
  if (!std::filesystem::exists(path)) {
    throw ProviderError("no SRL fixture for " + std::string(sentence_id));
  }
  std::vector<QAPair> out;
  for (const auto& j : LoadJsonFile(path)) out.push_back(QAPairFromJson(j));
  return out;
}

FixtureEmbeddingProvider::FixtureEmbeddingProvider(
    std::filesystem::path file, std::unique_ptr<EmbeddingProvider> record_from)
    : file_(std::move(file)), delegate_(std::move(record_from)) {
  for (const auto& row : LoadJsonl(file_)) {
    if (row.contains("model")) {
      model_id_ = row["model"].get<std::string>();
      continue;
    }
    table_[row.at("text").get<std::string>()] = row.at("vector").get<Vector>();
  }
  if (delegate_) {
    if (model_id_.empty()) {
      model_id_ = delegate_->id();
      AppendJsonl(file_, json{{"model", model_id_}});
    } else if (model_id_ != delegate_->id()) {
      throw ProviderError("embedding fixture recorded from " + model_id_ +
                          ", cannot extend with " + delegate_->id());
    }
  }
  if (model_id_.empty() && !std::filesystem::exists(file_)) {
    throw ProviderError("embedding fixture " + file_.string() + " not found");
  }
}

std::string FixtureEmbeddingProvider::id() const { return model_id_; }

std::vector<Vector> FixtureEmbeddingProvider::Embed(
    std::span<const std::string> texts) {
  std::vector<Vector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) {
    auto it = table_.find(t);
    if (it == table_.end()) {
      if (!delegate_) {
        throw ProviderError("no recorded embedding for \"" + t + "\"");
      }
      Vector v = delegate_->Embed(std::span(&t, 1)).front();
      AppendJsonl(file_, json{{"text", t}, {"vector", v}});
      it = table_.emplace(t, std::move(v)).first;
    }
    out.push_back(it->second);
  }
  return out;
}

FixtureNliProvider::FixtureNliProvider(std::filesystem::path file,
                                       std::unique_ptr<NliProvider> record_from)
    : file_(std::move(file)), delegate_(std::move(record_from)) {
  for (const auto& row : LoadJsonl(file_)) {
    if (row.contains("model")) {
      model_id_ = row["model"].get<std::string>();
      continue;
    }
    auto s = row.at("scores");
    table_[{row.at("premise").get<std::string>(),
            row.at("hypothesis").get<std::string>()}] =
        ValidateNli({s[0].get<double>(), s[1].get<double>(), s[2].get<double>()});
  }
  if (delegate_) {
    if (model_id_.empty()) {
      model_id_ = delegate_->id();
      AppendJsonl(file_, json{{"model", model_id_}});
    } else if (model_id_ != delegate_->id()) {
      throw ProviderError("NLI fixture recorded from " + model_id_ +
                          ", cannot extend with " + delegate_->id());
    }
  }
  if (model_id_.empty() && !std::filesystem::exists(file_)) {
    throw ProviderError("NLI fixture " + file_.string() + " not found");
  }
}

std::string FixtureNliProvider::id() const { return model_id_; }

std::vector<NliScores> FixtureNliProvider::Score(
    std::span<const std::pair<std::string, std::string>> pairs) {
  std::vector<NliScores> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    auto it = table_.find(p);
    if (it == table_.end()) {
      if (!delegate_) {
        throw ProviderError("no recorded NLI scores for (\"" + p.first +
                            "\", \"" + p.second + "\")");
      }
      NliScores s = delegate_->Score(std::span(&p, 1)).front();
      AppendJsonl(file_, json{{"premise", p.first},
                              {"hypothesis", p.second},
                              {"scores", {s.entail, s.neutral, s.contradict}}});
      it = table_.emplace(p, s).first;
    }
    out.push_back(it->second);
  }
  return out;
}

RecordingParseProvider::RecordingParseProvider(
    std::unique_ptr<ParseProvider> inner, std::filesystem::path dir)
    : inner_(std::move(inner)), dir_(std::move(dir)) {}

ParseTree RecordingParseProvider::Parse(std::string_view sentence_id,
                                        std::string_view text) {
  ParseTree tree = inner_->Parse(sentence_id, text);
  WriteFile(FixturePath(dir_, sentence_id), tree.ToJson().dump(1) + "\n");
  return tree;
}

RecordingSrlProvider::RecordingSrlProvider(std::unique_ptr<SrlProvider> inner,
                                           std::filesystem::path dir)
    : inner_(std::move(inner)), dir_(std::move(dir)) {}

std::vector<QAPair> RecordingSrlProvider::Analyze(std::string_view sentence_id,
                                                  std::string_view text) {
  auto qa = inner_->Analyze(sentence_id, text);
  json arr = json::array();
  for (const auto& q : qa) arr.push_back(QAPairToJson(q));
  WriteFile(FixturePath(dir_, sentence_id), arr.dump(1) + "\n");
  return qa;
}

// --- remote --------------------------------------------------------------

HttpProviderClient::HttpProviderClient(std::string base_url, int timeout_s)
    : base_url_(std::move(base_url)), timeout_s_(timeout_s) {
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
  if (base_url_.empty()) throw ConfigError("provider URL is empty");
}

json HttpProviderClient::Post(const std::string& path, const json& body) const {
  httplib::Client cli(base_url_);
  cli.set_connection_timeout(timeout_s_, 0);
  cli.set_read_timeout(timeout_s_, 0);
  auto res = cli.Post(path, body.dump(), "application/json");
  if (!res) {
    throw ProviderError("provider " + base_url_ + path + " unreachable: " +
                        httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw ProviderError("provider " + base_url_ + path + " returned HTTP " +
                        std::to_string(res->status));
  }
  try {
    return json::parse(res->body);
  } catch (const json::exception& e) {
    throw ProviderError("provider " + base_url_ + path +
                        " returned invalid JSON: " + e.what());
  }
}

std::string HttpSegmenter::id() const { return "http:" + client_.base_url(); }

std::vector<CharSpan> HttpSegmenter::Segment(std::string_view text) {
  json res = client_.Post("/segment", json{{"text", text}});
  std::vector<CharSpan> out;
  for (const auto& s : res.at("spans")) {
    out.push_back({s[0].get<std::size_t>(), s[1].get<std::size_t>()});
  }
  return out;
}

std::string HttpParseProvider::id() const { return "http:" + client_.base_url(); }

ParseTree HttpParseProvider::Parse(std::string_view sentence_id,
                                   std::string_view text) {
  json res = client_.Post("/parse",
                          json{{"sentence_id", sentence_id}, {"text", text}});
  try {
    ParseTree tree = ParseTree::FromJson(res);
    tree.AlignTo(text);
    return tree;
  } catch (const json::exception& e) {
    throw ProviderError(std::string("malformed parse response: ") + e.what());
  } catch (const ValidationError& e) {
    throw ProviderError(std::string("malformed parse response: ") + e.what());
  }
}

std::string HttpSrlProvider::id() const { return "http:" + client_.base_url(); }

std::vector<QAPair> HttpSrlProvider::Analyze(std::string_view sentence_id,
                                             std::string_view text) {
  json res = client_.Post("/srl",
                          json{{"sentence_id", sentence_id}, {"text", text}});
  std::vector<QAPair> out;
  for (const auto& j : res.at("qa")) out.push_back(QAPairFromJson(j));
  return out;
}

std::vector<Vector> HttpEmbeddingProvider::Embed(
    std::span<const std::string> texts) {
  json req{{"model", model_},
           {"texts", std::vector<std::string>(texts.begin(), texts.end())}};
  json res = client_.Post("/embed", req);
  auto vectors = res.at("vectors").get<std::vector<Vector>>();
  if (vectors.size() != texts.size()) {
    throw ProviderError("embedding service returned wrong vector count");
  }
  for (auto& v : vectors) NormalizeInPlace(v);
  return vectors;
}

std::vector<NliScores> HttpNliProvider::Score(
    std::span<const std::pair<std::string, std::string>> pairs) {
  json arr = json::array();
  for (const auto& [p, h] : pairs) arr.push_back({p, h});
  json res = client_.Post("/nli", json{{"model", model_}, {"pairs", arr}});
  std::vector<NliScores> out;
  for (const auto& s : res.at("scores")) {
    out.push_back(ValidateNli(
        {s[0].get<double>(), s[1].get<double>(), s[2].get<double>()}));
  }
  if (out.size() != pairs.size()) {
    throw ProviderError("NLI service returned wrong score count");
  }
  return out;
}

}  // namespace barcode
