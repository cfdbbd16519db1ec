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

#include "barcode/corpus.h"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include <spdlog/spdlog.h>

namespace barcode::corpus {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json ArticleToJson(const Article& a) {
  ordered_json j;
  j["article_id"] = a.article_id;
  j["title"] = a.title;
  j["organism"] = a.organism;
  j["source_url"] = a.source_url;
  j["text"] = a.text;
  return j;
}

Article ArticleFromJson(const json& j) {
  Article a;
  a.article_id = j.at("article_id").get<std::string>();
  a.title = j.value("title", "");
  a.organism = j.value("organism", "");
  if (a.organism.empty()) a.organism = a.title;
  a.source_url = j.value("source_url", "");
  a.text = j.value("text", "");
  return a;
}

ordered_json SentenceToJson(const SentenceRecord& s) {
  ordered_json j;
  j["sentence_id"] = s.sentence_id;
  j["article_id"] = s.article_id;
  j["organism"] = s.organism;
  j["text"] = s.text;
  j["char_offset"] = s.char_offset;
  return j;
}

SentenceRecord SentenceFromJson(const json& j) {
  SentenceRecord s;
  s.sentence_id = j.at("sentence_id").get<std::string>();
  s.article_id = j.at("article_id").get<std::string>();
  s.organism = j.value("organism", "");
  s.text = j.at("text").get<std::string>();
  s.char_offset = j.at("char_offset").get<std::size_t>();
  return s;
}

std::string MakeSentenceId(const std::string& article_id, std::size_t index) {
  return article_id + "#" + std::to_string(index);
}

std::vector<SentenceRecord> Segment(const Article& article,
                                    SegmentationProvider& segmenter) {
  std::vector<SentenceRecord> out;
  std::size_t last_end = 0;
  for (const CharSpan& span : segmenter.Segment(article.text)) {
    if (span.empty()) continue;
    if (span.start < last_end || span.end > article.text.size()) {
      throw ProviderError("segmenter returned non-monotone spans for " +
                          article.article_id);
    }
    SentenceRecord s;
    s.article_id = article.article_id;
    s.sentence_id = MakeSentenceId(article.article_id, out.size());
    s.organism = article.organism.empty() ? article.title : article.organism;
    s.text = article.text.substr(span.start, span.size());
    s.char_offset = span.start;
    out.push_back(std::move(s));
    last_end = span.end;
  }
  return out;
}

std::vector<Article> ReadArticlesJsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw StoreError("cannot open " + path.string());
  std::vector<Article> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (Trim(line).empty()) continue;
    try {
      out.push_back(ArticleFromJson(json::parse(line)));
    } catch (const json::exception& e) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                            ": " + e.what());
    }
  }
  return out;
}

IngestReport Ingest(const std::vector<Article>& articles,
                    const std::filesystem::path& index_dir,
                    SegmentationProvider& segmenter) {
  std::unordered_set<std::string> seen;
  for (const auto& a : articles) {
    if (a.article_id.empty()) throw ValidationError("article with empty article_id");
    if (!seen.insert(a.article_id).second) {
      throw ValidationError("duplicate article_id: " + a.article_id);
    }
  }

  IngestReport report;
  std::ostringstream articles_out, sentences_out;
  for (const auto& a : articles) {
    if (Trim(a.text).empty()) {
      ++report.skipped_empty;
      spdlog::warn("skipping article {} with empty text", a.article_id);
      continue;
    }
    Article stored = a;
    if (stored.organism.empty()) stored.organism = stored.title;
    articles_out << ArticleToJson(stored).dump() << '\n';
    ++report.stats.n_articles;
    for (const auto& s : Segment(stored, segmenter)) {
      sentences_out << SentenceToJson(s).dump() << '\n';
      ++report.stats.n_sentences;
    }
  }

  auto dir = index_dir / "corpus";
  std::filesystem::create_directories(dir);
  WriteFile(dir / "articles.jsonl", articles_out.str());
  WriteFile(dir / "sentences.jsonl", sentences_out.str());
  ordered_json stats;
  stats["n_articles"] = report.stats.n_articles;
  stats["n_sentences"] = report.stats.n_sentences;
  stats["segmenter"] = segmenter.id();
  WriteFile(dir / "stats.json", stats.dump(2) + "\n");
  return report;
}

CorpusStore CorpusStore::Open(const std::filesystem::path& index_dir) {
  auto dir = index_dir / "corpus";
  CorpusStore store;
  auto read_jsonl = [](const std::filesystem::path& p, auto&& fn) {
    std::ifstream in(p);
    if (!in) throw StoreError("missing corpus file " + p.string());
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty()) fn(json::parse(line));
    }
  };
  read_jsonl(dir / "articles.jsonl", [&](const json& j) {
    store.article_index_[j.at("article_id").get<std::string>()] =
        store.articles_.size();
    store.articles_.push_back(ArticleFromJson(j));
  });
  read_jsonl(dir / "sentences.jsonl", [&](const json& j) {
    auto s = SentenceFromJson(j);
    store.sentence_index_[s.sentence_id] = store.sentences_.size();
    store.sentences_.push_back(std::move(s));
  });
  json stats = json::parse(ReadFile(dir / "stats.json"));
  store.stats_.n_articles = stats.at("n_articles").get<std::size_t>();
  store.stats_.n_sentences = stats.at("n_sentences").get<std::size_t>();
  store.segmenter_id_ = stats.value("segmenter", "");
  if (store.stats_.n_articles != store.articles_.size() ||
      store.stats_.n_sentences != store.sentences_.size()) {
    throw StoreError("corpus stats.json disagrees with corpus contents");
  }
  return store;
}

CorpusStore CorpusStore::FromRecords(std::vector<Article> articles,
                                     std::vector<SentenceRecord> sentences) {
  CorpusStore store;
  store.articles_ = std::move(articles);
  store.sentences_ = std::move(sentences);
  for (std::size_t i = 0; i < store.articles_.size(); ++i) {
    if (!store.article_index_.emplace(store.articles_[i].article_id, i).second) {
      throw ValidationError("duplicate article_id: " + store.articles_[i].article_id);
    }
  }
  for (std::size_t i = 0; i < store.sentences_.size(); ++i) {
    if (!store.sentence_index_.emplace(store.sentences_[i].sentence_id, i).second) {
      throw ValidationError("duplicate sentence_id: " + store.sentences_[i].sentence_id);
    }
  }
  store.stats_ = {store.articles_.size(), store.sentences_.size()};
  return store;
}

const SentenceRecord* CorpusStore::FindSentence(const std::string& id) const {
  auto it = sentence_index_.find(id);
  return it == sentence_index_.end() ? nullptr : &sentences_[it->second];
}

const Article* CorpusStore::FindArticle(const std::string& id) const {
  auto it = article_index_.find(id);
  return it == article_index_.end() ? nullptr : &articles_[it->second];
}

}  // namespace barcode::corpus
