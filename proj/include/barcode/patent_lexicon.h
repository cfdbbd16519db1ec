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

#ifndef BARCODE_PATENT_LEXICON_H_
#define BARCODE_PATENT_LEXICON_H_

// "Known problems" mined from patent claims: verb-noun pairs that follow
// "for [verb]-ing [noun]" in claim sentences, ranked by frequency.

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "barcode/common.h"

namespace barcode::lexicon {

struct ProblemPair {
  std::string verb_lemma;
  std::string noun_lemma;
  std::size_t count = 1;

  friend bool operator==(const ProblemPair&, const ProblemPair&) = default;
};

using PairKey = std::pair<std::string, std::string>;
using PairCounts = std::map<PairKey, std::size_t>;

// One pair (count 1) per "for" + gerund occurrence. The object is the first
// noun after the gerund; the search stops at a preposition, punctuation, a
// conjunction or another verb.
std::vector<ProblemPair> ExtractProblemPairs(std::string_view claim_sentence);

// Counts pairs over a stream of claim sentences, one per line.
PairCounts CountProblemPairs(std::istream& claims);
void AddPairs(PairCounts& counts, const std::vector<ProblemPair>& pairs);

class ProblemLexicon {
 public:
  ProblemLexicon() = default;
  // `ranked` must already be in lexicon order (count desc, then verb, noun).
  explicit ProblemLexicon(std::vector<ProblemPair> ranked);

  const std::vector<ProblemPair>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool Contains(const std::string& verb, const std::string& noun) const;
  // sha256 over the TSV serialization.
  const std::string& source_hash() const { return source_hash_; }

  // Nouns paired with `verb`, or null.
  const std::set<std::string>* NounsFor(const std::string& verb) const;

 private:
  std::vector<ProblemPair> entries_;
  std::map<std::string, std::set<std::string>> by_verb_;
  std::string source_hash_;
};

// The `top_n` most frequent pairs; ties broken lexicographically.
ProblemLexicon BuildLexicon(const PairCounts& counts, std::size_t top_n = 2000);

std::string LexiconToTsv(const ProblemLexicon& lex);
void WriteLexicon(const ProblemLexicon& lex, const std::filesystem::path& path);
ProblemLexicon ReadLexicon(const std::filesystem::path& path);

// A lexicon pair whose verb and noun lemmas occur within `window` tokens of
// each other, in either order.
std::optional<ProblemPair> FindKnownProblem(const std::vector<std::string>& lemmas,
                                            const ProblemLexicon& lex,
                                            std::size_t window);
bool ContainsKnownProblem(const std::vector<std::string>& lemmas,
                          const ProblemLexicon& lex, std::size_t window);

}  // namespace barcode::lexicon

#endif  // BARCODE_PATENT_LEXICON_H_
