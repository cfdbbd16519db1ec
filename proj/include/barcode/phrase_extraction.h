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

#ifndef BARCODE_PHRASE_EXTRACTION_H_
#define BARCODE_PHRASE_EXTRACTION_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "barcode/corpus.h"
#include "barcode/dep_pattern.h"
#include "barcode/providers.h"

namespace barcode::extract {

enum class Method { kQasrl, kDep, kBoth };

std::string MethodName(Method m);
Method MethodFromName(const std::string& name);

// "[verb-lemma] [object]" matching unit. `span` is in sentence-local
// character offsets.
struct CandidatePhrase {
  std::string phrase_id;
  std::string sentence_id;
  std::string text;
  Method method = Method::kDep;
  std::string verb_lemma;
  CharSpan span;
  std::vector<int> pattern_ids;  // dependency patterns that produced it

  friend bool operator==(const CandidatePhrase&, const CandidatePhrase&) = default;
};

nlohmann::ordered_json PhraseToJson(const CandidatePhrase& p);
CandidatePhrase PhraseFromJson(const nlohmann::json& j);

struct QasrlCounts {
  std::size_t kept = 0;
  std::size_t dropped_when_who = 0;
  std::size_t dropped_not_verb_final = 0;
  std::size_t dropped_unaligned = 0;
};

// Converts QA pairs into "[verb lemma] [answer]" phrases. When/Who
// questions and questions whose last token is not the QA verb are dropped.
std::vector<CandidatePhrase> QasrlToPhrases(const corpus::SentenceRecord& sentence,
                                            const std::vector<QAPair>& qa,
                                            QasrlCounts* counts = nullptr);

// Dependency-pattern phrases: anchor verb lemma followed by the surface
// forms of the other matched tokens in sentence order. Pattern ids are
// recorded on the phrase. Phrases are not yet deduplicated.
std::vector<CandidatePhrase> MatchPatterns(const corpus::SentenceRecord& sentence,
                                           const ParseTree& tree,
                                           const std::vector<DependencyPattern>& patterns);

// Loads the phrase pattern file and checks every anchor is constrained to
// POS=VERB.
std::vector<DependencyPattern> LoadPhrasePatterns(const std::filesystem::path& path);

// Merges exact-duplicate texts within a sentence (QASRL+DEP -> BOTH, the
// shorter span wins) and assigns ids "<sentence_id>:<n>" in span order.
std::vector<CandidatePhrase> MergeSentencePhrases(
    const std::string& sentence_id, std::vector<CandidatePhrase> phrases);

struct ExtractionSummary {
  std::size_t sentences = 0;
  std::size_t skipped = 0;
  std::size_t phrases = 0;
  QasrlCounts qasrl;
};

struct PhraseTable {
  std::vector<CandidatePhrase> phrases;
  // Parsed trees keyed by sentence id, reused by the bio-inspiration stage.
  std::map<std::string, ParseTree> parses;
  ExtractionSummary summary;
};

// Runs both extractors on every sentence. A provider failure skips the
// sentence and logs its id. `srl` may be null (dependency patterns only).
PhraseTable ExtractAll(const std::vector<corpus::SentenceRecord>& sentences,
                       ParseProvider& parser, SrlProvider* srl,
                       const std::vector<DependencyPattern>& patterns);

void WritePhraseTable(const PhraseTable& table, const std::filesystem::path& index_dir);
std::vector<CandidatePhrase> ReadPhrases(const std::filesystem::path& index_dir);
std::map<std::string, ParseTree> ReadParses(
    const std::filesystem::path& index_dir,
    const std::vector<corpus::SentenceRecord>& sentences);

}  // namespace barcode::extract

#endif  // BARCODE_PHRASE_EXTRACTION_H_
