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
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include <spdlog/spdlog.h>

namespace barcode {

using nlohmann::json;
using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kManifest = "manifest.json";
constexpr const char* kStagesDir = "stages";

std::string HttpUrl(const Config& cfg, const std::string& what) {
  std::string url = cfg.GetString("providers.url");
  if (url.empty()) {
    throw ConfigError("providers." + what + " = \"http\" needs providers.url");
  }
  return url;
}

std::string HashJson(const json& j) { return Sha256Hex(j.dump()); }

std::string FileHashOrEmpty(const fs::path& p) {
  return fs::exists(p) ? Sha256File(p) : std::string();
}

ordered_json ProviderIds(const ProviderSet& p) {
  ordered_json j;
  j["segmenter"] = p.segmenter ? p.segmenter->id() : "";
  j["parser"] = p.parser ? p.parser->id() : "";
  j["srl"] = p.srl ? p.srl->id() : "none";
  j["embedding"] = p.embedder ? p.embedder->id() : "";
  j["nli"] = p.nli ? p.nli->id() : "";
  return j;
}

std::string UtcNow() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bio::LabelModelOptions LabelOptions(const Config& cfg) {
  bio::LabelModelOptions o;
  o.lr = cfg.GetDouble("bio.lr");
  o.epochs = static_cast<int>(cfg.GetInt("bio.epochs"));
  o.seed = static_cast<std::uint64_t>(cfg.GetInt("general.seed"));
  o.prior = cfg.GetDouble("bio.prior");
  o.learn_prior = cfg.GetBool("bio.learn_prior");
  o.accuracy_mean = cfg.GetDouble("bio.accuracy_mean");
  o.accuracy_strength = cfg.GetDouble("bio.accuracy_strength");
  return o;
}

SvmParams SvmFromConfig(const Config& cfg) {
  SvmParams p;
  p.c = cfg.GetDouble("classifier.c");
  p.gamma = cfg.GetDouble("classifier.gamma");
  p.degree = static_cast<int>(cfg.GetInt("classifier.degree"));
  p.coef0 = cfg.GetDouble("classifier.coef0");
  p.seed = static_cast<std::uint64_t>(cfg.GetInt("general.seed"));
  return p;
}

void WriteJsonl(const fs::path& path, const std::vector<ordered_json>& rows) {
  std::ostringstream out;
  for (const auto& r : rows) out << r.dump() << '\n';
  WriteFile(path, out.str());
}

}  // namespace

ProviderSet MakeProviders(const Config& cfg) {
  ProviderSet p;
  const std::string seg = cfg.GetString("providers.segmenter");
  if (seg == "http") {
    p.segmenter = std::make_unique<HttpSegmenter>(HttpUrl(cfg, "segmenter"));
  } else {
    p.segmenter = std::make_unique<BuiltinSegmenter>();
  }

  const std::string parse = cfg.GetString("providers.parse");
  if (parse == "http") {
    p.parser = std::make_unique<HttpParseProvider>(HttpUrl(cfg, "parse"));
  } else {
    p.parser = std::make_unique<FixtureParseProvider>(cfg.GetPath("providers.parse_dir"));
  }

  const std::string srl = cfg.GetString("providers.srl");
  if (srl == "http") {
    p.srl = std::make_unique<HttpSrlProvider>(HttpUrl(cfg, "srl"));
  } else if (srl == "fixture") {
    p.srl = std::make_unique<FixtureSrlProvider>(cfg.GetPath("providers.srl_dir"));
  }

  const std::string emb = cfg.GetString("providers.embedding");
  if (emb == "http") {
    p.embedder = std::make_unique<HttpEmbeddingProvider>(
        HttpUrl(cfg, "embedding"), cfg.GetString("providers.embedding_model"));
  } else if (emb == "fixture") {
    fs::path file = cfg.GetPath("providers.embedding_file");
    if (file.empty()) throw ConfigError("providers.embedding = \"fixture\" needs embedding_file");
    p.embedder = std::make_unique<FixtureEmbeddingProvider>(file);
  } else {
    p.embedder = std::make_unique<HashedLexicalEncoder>(
        static_cast<int>(cfg.GetInt("providers.embedding_dim")));
  }

  const std::string nli = cfg.GetString("providers.nli");
  if (nli == "http") {
    p.nli = std::make_unique<HttpNliProvider>(HttpUrl(cfg, "nli"),
                                              cfg.GetString("providers.nli_model"));
  } else if (nli == "fixture") {
    fs::path file = cfg.GetPath("providers.nli_file");
    if (file.empty()) throw ConfigError("providers.nli = \"fixture\" needs nli_file");
    p.nli = std::make_unique<FixtureNliProvider>(file);
  } else {
    p.nli = std::make_unique<LexicalNli>();
  }
  return p;
}

// --- builder ----------------------------------------------------------------

BundleBuilder::BundleBuilder(fs::path index_dir, const Config& cfg, ProviderSet& providers)
    : dir_(std::move(index_dir)), cfg_(cfg), providers_(providers) {
  fs::create_directories(dir_ / kStagesDir);
}

std::string BundleBuilder::Upstream(const std::string& stage) const {
  const auto& stages = BuildStages();
  auto it = std::find(stages.begin(), stages.end(), stage);
  if (it == stages.begin()) return "";
  fs::path marker = dir_ / kStagesDir / (*(it - 1) + ".done");
  if (!fs::exists(marker)) {
    throw StoreError("stage '" + stage + "' needs stage '" + *(it - 1) + "' to finish first");
  }
  return json::parse(ReadFile(marker)).at("fingerprint").get<std::string>();
}

bool BundleBuilder::UpToDate(const std::string& stage, const std::string& fingerprint) const {
  if (force) return false;
  fs::path marker = dir_ / kStagesDir / (stage + ".done");
  if (!fs::exists(marker)) return false;
  try {
    return json::parse(ReadFile(marker)).at("fingerprint") == fingerprint;
  } catch (const json::exception&) {
    return false;
  }
}

void BundleBuilder::Invalidate(const std::string& stage) {
  fs::remove(dir_ / kManifest);
  const auto& stages = BuildStages();
  auto it = std::find(stages.begin(), stages.end(), stage);
  for (; it != stages.end(); ++it) fs::remove(dir_ / kStagesDir / (*it + ".done"));
}

void BundleBuilder::MarkDone(const std::string& stage, const std::string& fingerprint,
                             const ordered_json& summary) {
  ordered_json j;
  j["stage"] = stage;
  j["fingerprint"] = fingerprint;
  j["summary"] = summary;
  WriteFile(dir_ / kStagesDir / (stage + ".done"), j.dump(2) + "\n");
}

StageResult BundleBuilder::Ingest(const fs::path& articles_jsonl) {
  StageResult r{"ingest", false, "", {}};
  json fp{{"input", Sha256File(articles_jsonl)}, {"segmenter", providers_.segmenter->id()}};
  r.fingerprint = HashJson(fp);
  if (UpToDate(r.stage, r.fingerprint)) {
    r.skipped = true;
    return r;
  }
  Invalidate(r.stage);
  auto report = corpus::Ingest(corpus::ReadArticlesJsonl(articles_jsonl), dir_,
                               *providers_.segmenter);
  r.summary = {{"articles", report.stats.n_articles},
               {"sentences", report.stats.n_sentences},
               {"skipped_empty", report.skipped_empty}};
  MarkDone(r.stage, r.fingerprint, r.summary);
  return r;
}

StageResult BundleBuilder::Extract() {
  StageResult r{"extract", false, "", {}};
  fs::path patterns = cfg_.GetPath("extraction.patterns");
  json fp{{"upstream", Upstream(r.stage)},
          {"patterns", Sha256File(patterns)},
          {"parser", providers_.parser->id()},
          {"srl", providers_.srl ? providers_.srl->id() : "none"}};
  r.fingerprint = HashJson(fp);
  if (UpToDate(r.stage, r.fingerprint)) {
    r.skipped = true;
    return r;
  }
  Invalidate(r.stage);
  auto store = corpus::CorpusStore::Open(dir_);
  auto table = extract::ExtractAll(store.sentences(), *providers_.parser, providers_.srl.get(),
                                   extract::LoadPhrasePatterns(patterns));
  extract::WritePhraseTable(table, dir_);
  const auto& s = table.summary;
  r.summary = {{"sentences", s.sentences},
               {"skipped", s.skipped},
               {"phrases", s.phrases},
               {"qasrl_kept", s.qasrl.kept},
               {"qasrl_dropped_when_who", s.qasrl.dropped_when_who},
               {"qasrl_dropped_not_verb_final", s.qasrl.dropped_not_verb_final},
               {"qasrl_dropped_unaligned", s.qasrl.dropped_unaligned}};
  MarkDone(r.stage, r.fingerprint, r.summary);
  return r;
}

StageResult BundleBuilder::ScoreBio() {
  StageResult r{"bio", false, "", {}};
  fs::path lex = cfg_.GetPath("bio.lexicon_dir");
  fs::path clausal = cfg_.GetPath("bio.clausal_patterns");
  json fp{{"upstream", Upstream(r.stage)},
          {"problems", FileHashOrEmpty(lex / "problems.tsv")},
          {"aux", FileHashOrEmpty(lex / "aux_verbs.txt")},
          {"non_bio", FileHashOrEmpty(lex / "non_bio_verbs.txt")},
          {"clausal", FileHashOrEmpty(clausal)},
          {"settings", cfg_.Get("bio")},
          {"seed", cfg_.Get("general.seed")}};
  r.fingerprint = HashJson(fp);
  if (UpToDate(r.stage, r.fingerprint)) {
    r.skipped = true;
    return r;
  }
  Invalidate(r.stage);
  auto store = corpus::CorpusStore::Open(dir_);
  auto parses = extract::ReadParses(dir_, store.sentences());
  auto resources =
      bio::LfResources::Load(lex, static_cast<std::size_t>(cfg_.GetInt("bio.window")));
  std::vector<bio::ClausalPattern> extra;
  if (fs::exists(clausal)) extra = bio::LoadClausalPatterns(clausal);
  auto run = bio::RunBioFilter(store.sentences(), parses, resources, extra, LabelOptions(cfg_));

  fs::create_directories(dir_ / "bio");
  std::vector<ordered_json> rows;
  for (std::size_t i = 0; i < run.candidates.size(); ++i) {
    ordered_json row = bio::CandidateToJson(run.candidates[i]);
    ordered_json votes = ordered_json::array();
    if (i < run.matrix.rows.size()) {
      for (auto v : run.matrix.rows[i]) votes.push_back(bio::VoteName(v));
    }
    row["votes"] = votes;
    rows.push_back(std::move(row));
  }
  WriteJsonl(dir_ / "bio" / "candidates.jsonl", rows);
  WriteFile(dir_ / "bio" / "label_model.json", run.model.ToJson().dump(2) + "\n");
  bio::WriteScores(run.scores, dir_ / "bio" / "scores.tsv");
  double tau = cfg_.GetDouble("bio.tau");
  r.summary["candidates"] = run.candidates.size();
  r.summary["scored_sentences"] = run.scores.size();
  r.summary["tau"] = tau;
  r.summary["retained"] = bio::Filter(run.scores, tau).size();
  MarkDone(r.stage, r.fingerprint, r.summary);
  return r;
}

StageResult BundleBuilder::Embed() {
  StageResult r{"embed", false, "", {}};
  json fp{{"upstream", Upstream(r.stage)}, {"embedding", providers_.embedder->id()}};
  r.fingerprint = HashJson(fp);
  if (UpToDate(r.stage, r.fingerprint)) {
    r.skipped = true;
    return r;
  }
  Invalidate(r.stage);
  auto phrases = extract::ReadPhrases(dir_);
  auto index = BuildEmbeddingIndex(phrases, *providers_.embedder,
                                   static_cast<std::size_t>(cfg_.GetInt("providers.batch")));
  index.Write(dir_);
  r.summary = {{"rows", index.size()}, {"dim", index.dim()}, {"model", index.model_id()}};
  MarkDone(r.stage, r.fingerprint, r.summary);
  return r;
}

RelevanceClassifier TrainClassifier(const Config& cfg, EmbeddingProvider& emb, NliProvider& nli) {
  auto rows = ReadLabeledPairs(cfg.GetPath("classifier.labeled_pairs"));
  auto data = FeaturizeLabeledPairs(rows, emb, nli, cfg.GetBool("ranking.bidirectional_nli"));
  return TrainWithHoldout(data, SvmFromConfig(cfg), cfg.GetDouble("classifier.holdout"));
}

StageResult BundleBuilder::Classifier() {
  StageResult r{"classifier", false, "", {}};
  fs::path model = cfg_.GetPath("classifier.model");
  bool have_model = !model.empty() && fs::exists(model);
  json fp{{"upstream", Upstream(r.stage)}};
  if (have_model) {
    fp["model"] = Sha256File(model);
  } else {
    fp["labeled_pairs"] = Sha256File(cfg_.GetPath("classifier.labeled_pairs"));
    fp["settings"] = cfg_.Get("classifier");
    fp["seed"] = cfg_.Get("general.seed");
    fp["embedding"] = providers_.embedder->id();
    fp["nli"] = providers_.nli->id();
  }
  r.fingerprint = HashJson(fp);
  if (UpToDate(r.stage, r.fingerprint)) {
    r.skipped = true;
    return r;
  }
  Invalidate(r.stage);
  if (have_model) {
    // A model is only valid with the feature providers it was trained on.
    json meta = json::parse(ReadFile(model));
    if (meta.contains("features_from")) {
      json now{{"embedding", providers_.embedder->id()}, {"nli", providers_.nli->id()}};
      if (meta["features_from"] != now) {
        throw ConfigError(model.string() + " was trained on " + meta["features_from"].dump() +
                          " features but the providers are " + now.dump());
      }
    }
  }
  RelevanceClassifier clf = have_model
                                ? RelevanceClassifier::Load(model)
                                : TrainClassifier(cfg_, *providers_.embedder, *providers_.nli);
  clf.Save(dir_ / "classifier.json");
  r.summary = {{"source", have_model ? model.filename().string() : "trained"},
               {"support_vectors", clf.num_support_vectors()},
               {"holdout_precision", clf.report().holdout_precision}};
  MarkDone(r.stage, r.fingerprint, r.summary);
  return r;
}

BuildReport BundleBuilder::BuildAll(const std::optional<fs::path>& articles_jsonl) {
  BuildReport rep;
  auto log = [&](StageResult s) {
    spdlog::info("stage {}: {}", s.stage, s.skipped ? "up to date" : "done");
    rep.stages.push_back(std::move(s));
  };
  if (articles_jsonl) {
    log(Ingest(*articles_jsonl));
  } else {
    fs::path marker = dir_ / kStagesDir / "ingest.done";
    if (!fs::exists(marker)) throw StoreError("no corpus ingested in " + dir_.string());
    log({"ingest", true, json::parse(ReadFile(marker)).at("fingerprint").get<std::string>(), {}});
  }
  log(Extract());
  log(ScoreBio());
  log(Embed());
  log(Classifier());
  // The snapshot is part of the sealed content.
  json snapshot = cfg_.Snapshot();
  snapshot["providers_resolved"] = ProviderIds(providers_);
  WriteFile(dir_ / "config.json", snapshot.dump(2) + "\n");
  rep.content_hash = Seal(dir_).content_hash;
  return rep;
}

// --- manifest ---------------------------------------------------------------

ordered_json Manifest::ToJson() const {
  ordered_json j;
  j["format"] = format;
  j["content_hash"] = content_hash;
  j["sealed_at"] = sealed_at;
  j["providers"] = providers;
  j["stages"] = stages;
  j["files"] = files;
  return j;
}

Manifest Manifest::FromJson(const json& j) {
  Manifest m;
  m.format = j.at("format").get<int>();
  m.content_hash = j.at("content_hash").get<std::string>();
  m.sealed_at = j.value("sealed_at", "");
  m.providers = j.at("providers");
  m.stages = j.at("stages").get<std::map<std::string, std::string>>();
  m.files = j.at("files").get<std::map<std::string, std::string>>();
  return m;
}

namespace {

std::map<std::string, std::string> HashBundleFiles(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::string rel = fs::relative(e.path(), dir).generic_string();
    if (rel == kManifest || rel.rfind(std::string(kStagesDir) + "/", 0) == 0) continue;
    files[rel] = Sha256File(e.path());
  }
  return files;
}

std::string ContentHash(const Manifest& m) {
  json j{{"format", m.format}, {"providers", m.providers}, {"stages", m.stages},
         {"files", m.files}};
  return Sha256Hex(j.dump());
}

}  // namespace

Manifest Seal(const fs::path& index_dir) {
  Manifest m;
  for (const auto& stage : BuildStages()) {
    fs::path marker = index_dir / kStagesDir / (stage + ".done");
    if (!fs::exists(marker)) throw StoreError("cannot seal: stage '" + stage + "' not done");
    m.stages[stage] = json::parse(ReadFile(marker)).at("fingerprint").get<std::string>();
  }
  fs::path cfg = index_dir / "config.json";
  if (!fs::exists(cfg)) throw StoreError("cannot seal: config.json missing");
  m.providers = json::parse(ReadFile(cfg)).value("providers_resolved", json::object());
  m.files = HashBundleFiles(index_dir);
  m.content_hash = ContentHash(m);
  m.sealed_at = UtcNow();
  WriteFile(index_dir / kManifest, m.ToJson().dump(2) + "\n");
  return m;
}

bool IsSealed(const fs::path& index_dir) { return fs::exists(index_dir / kManifest); }

Manifest VerifyBundle(const fs::path& index_dir) {
  if (!IsSealed(index_dir)) {
    throw StoreError("bundle " + index_dir.string() + " is not sealed");
  }
  Manifest m;
  try {
    m = Manifest::FromJson(json::parse(ReadFile(index_dir / kManifest)));
  } catch (const json::exception& e) {
    throw StoreError(std::string("unreadable manifest: ") + e.what());
  }
  if (ContentHash(m) != m.content_hash) throw StoreError("manifest mismatch: content hash");
  for (const auto& [rel, sha] : m.files) {
    fs::path p = index_dir / rel;
    if (!fs::exists(p)) throw StoreError("manifest mismatch: missing " + rel);
    if (Sha256File(p) != sha) throw StoreError("manifest mismatch: " + rel + " changed");
  }
  return m;
}

// --- engine -----------------------------------------------------------------

std::unique_ptr<Engine> Engine::Open(const fs::path& index_dir, const Config& cfg) {
  return Open(index_dir, cfg, MakeProviders(cfg));
}

std::unique_ptr<Engine> Engine::Open(const fs::path& index_dir, const Config& cfg,
                                     ProviderSet providers) {
  std::unique_ptr<Engine> e(new Engine());
  e->dir_ = index_dir;
  e->cfg_ = cfg;
  e->manifest_ = VerifyBundle(index_dir);
  e->build_config_ = json::parse(ReadFile(index_dir / "config.json"));
  e->providers_ = std::move(providers);
  if (!e->providers_.embedder || !e->providers_.nli) {
    throw ConfigError("engine needs embedding and NLI providers");
  }
  e->corpus_ = corpus::CorpusStore::Open(index_dir);
  e->phrases_ = extract::ReadPhrases(index_dir);
  for (std::size_t i = 0; i < e->phrases_.size(); ++i) {
    e->phrases_by_sentence_.emplace(e->phrases_[i].sentence_id, i);
  }
  e->index_ = EmbeddingIndex::Read(index_dir);
  if (e->index_.model_id() != e->providers_.embedder->id()) {
    throw ConfigError("index was embedded with '" + e->index_.model_id() +
                      "' but the query embedder is '" + e->providers_.embedder->id() + "'");
  }
  for (const auto& s : bio::ReadScores(index_dir / "bio" / "scores.tsv")) {
    e->bio_[s.sentence_id] = s.score;
  }
  e->classifier_ = RelevanceClassifier::Load(index_dir / "classifier.json");
  RankerOptions opt;
  opt.shortlist_n = static_cast<std::size_t>(cfg.GetInt("ranking.shortlist_n"));
  opt.tau = cfg.GetDouble("bio.tau");
  opt.bidirectional_nli = cfg.GetBool("ranking.bidirectional_nli");
  opt.nli_batch = static_cast<std::size_t>(cfg.GetInt("providers.batch"));
  e->ranker_ = std::make_unique<BarcodeRanker>(e->corpus_, e->phrases_, e->index_, &e->bio_,
                                               e->classifier_, *e->providers_.embedder,
                                               *e->providers_.nli, opt);
  e->baseline_ = std::make_unique<Bm25Ranker>(e->corpus_, &e->bio_, opt.tau);
  return e;
}

RankResponse Engine::Query(const barcode::Query& q) { return ranker_->Rank(q); }
RankResponse Engine::Baseline(const barcode::Query& q) { return baseline_->Rank(q); }

std::optional<double> Engine::BioScore(const std::string& sentence_id) const {
  auto it = bio_.find(sentence_id);
  if (it == bio_.end()) return std::nullopt;
  return it->second;
}

std::vector<const extract::CandidatePhrase*> Engine::PhrasesOf(
    const std::string& sentence_id) const {
  std::vector<const extract::CandidatePhrase*> out;
  auto [lo, hi] = phrases_by_sentence_.equal_range(sentence_id);
  for (auto it = lo; it != hi; ++it) out.push_back(&phrases_[it->second]);
  return out;
}

}  // namespace barcode
