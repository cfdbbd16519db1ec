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

#ifndef BARCODE_CORPUS_H_
#define BARCODE_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "barcode/providers.h"
#include "json.hpp"

namespace barcode::corpus {

struct Article {
  std::string article_id;
  std::string title;
  std::string organism;  // defaults to title when absent
  std::string source_url;
  std::string text;
};

struct SentenceRecord {
  std::string sentence_id;  // article_id + "#" + index
  std::string article_id;
  std::string organism;
  std::string text;
  std::size_t char_offset = 0;

  friend bool operator==(const SentenceRecord&, const SentenceRecord&) = default;
};

struct CorpusStats {
  std::size_t n_articles = 0;
  std::size_t n_sentences = 0;
};

nlohmann::ordered_json ArticleToJson(const Article& a);
Article ArticleFromJson(const nlohmann::json& j);
nlohmann::ordered_json SentenceToJson(const SentenceRecord& s);
SentenceRecord SentenceFromJson(const nlohmann::json& j);

std::string MakeSentenceId(const std::string& article_id, std::size_t index);

// Sentences of one article, ids contiguous from 0, offsets increasing.
std::vector<SentenceRecord> Segment(const Article& article,
                                    SegmentationProvider& segmenter);

std::vector<Article> ReadArticlesJsonl(const std::filesystem::path& path);

struct IngestReport {
  CorpusStats stats;
  std::size_t skipped_empty = 0;
};

// Read-only view over `<index_dir>/corpus/`.
class CorpusStore {
 public:
  static CorpusStore Open(const std::filesystem::path& index_dir);
  // In-memory store; duplicate ids are a ValidationError.
  static CorpusStore FromRecords(std::vector<Article> articles,
                                 std::vector<SentenceRecord> sentences);

  const std::vector<Article>& articles() const { return articles_; }
  const std::vector<SentenceRecord>& sentences() const { return sentences_; }
  const CorpusStats& stats() const { return stats_; }
  const std::string& segmenter_id() const { return segmenter_id_; }

  const SentenceRecord* FindSentence(const std::string& sentence_id) const;
  const Article* FindArticle(const std::string& article_id) const;

 private:
  std::vector<Article> articles_;
  std::vector<SentenceRecord> sentences_;
  CorpusStats stats_;
  std::string segmenter_id_;
  std::unordered_map<std::string, std::size_t> sentence_index_;
  std::unordered_map<std::string, std::size_t> article_index_;
};

// Segments and persists the corpus. Duplicate article ids are rejected
// (ValidationError naming the id); articles with blank text are skipped and
// counted. Re-ingesting identical input rewrites identical bytes.
IngestReport Ingest(const std::vector<Article>& articles,
                    const std::filesystem::path& index_dir,
                    SegmentationProvider& segmenter);

}  // namespace barcode::corpus

#endif  // BARCODE_CORPUS_H_
