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

#include "barcode/patent_lexicon.h"

#include <algorithm>
#include <sstream>

#include "barcode/common.h"
#include "barcode/text.h"

namespace barcode::lexicon {

namespace {

bool EndsObjectSearch(const text::TaggedToken& t) {
  return t.pos == "ADP" || t.pos == "PUNCT" || t.pos == "CCONJ" ||
         t.pos == "VERB" || t.pos == "SCONJ" || t.pos == "AUX";
}

bool RankBefore(const ProblemPair& a, const ProblemPair& b) {
  if (a.count != b.count) return a.count > b.count;
  if (a.verb_lemma != b.verb_lemma) return a.verb_lemma < b.verb_lemma;
  return a.noun_lemma < b.noun_lemma;
}

}  // namespace

std::vector<ProblemPair> ExtractProblemPairs(std::string_view claim_sentence) {
  auto toks = text::Tag(claim_sentence);
  std::vector<ProblemPair> out;
  for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
    if (ToLower(toks[i].text) != "for") continue;
    const auto& gerund = toks[i + 1];
    if (gerund.pos != "VERB" || gerund.tag != "VBG") continue;
    // An adjective closing the phrase is read as a nominal head
    // ("for collecting liquid from").
    std::optional<std::size_t> object, last_adj;
    for (std::size_t j = i + 2; j < toks.size() && !object; ++j) {
      if (toks[j].pos == "NOUN") {
        object = j;
      } else if (EndsObjectSearch(toks[j])) {
        break;
      } else {
        last_adj = toks[j].pos == "ADJ" ? std::optional<std::size_t>(j) : std::nullopt;
      }
    }
    if (!object) object = last_adj;
    if (object) {
      out.push_back({text::LemmatizeVerb(ToLower(gerund.text)),
                     text::LemmatizeNoun(ToLower(toks[*object].text)), 1});
    }
  }
  return out;
}

void AddPairs(PairCounts& counts, const std::vector<ProblemPair>& pairs) {
  for (const auto& p : pairs) counts[{p.verb_lemma, p.noun_lemma}] += p.count;
}

PairCounts CountProblemPairs(std::istream& claims) {
  PairCounts counts;
  std::string line;
  while (std::getline(claims, line)) {
    if (!Trim(line).empty()) AddPairs(counts, ExtractProblemPairs(line));
  }
  return counts;
}

ProblemLexicon::ProblemLexicon(std::vector<ProblemPair> ranked)
    : entries_(std::move(ranked)) {
  for (const auto& p : entries_) by_verb_[p.verb_lemma].insert(p.noun_lemma);
  source_hash_ = Sha256Hex(LexiconToTsv(*this));
}

bool ProblemLexicon::Contains(const std::string& verb, const std::string& noun) const {
  auto* nouns = NounsFor(verb);
  return nouns && nouns->count(noun);
}

const std::set<std::string>* ProblemLexicon::NounsFor(const std::string& verb) const {
  auto it = by_verb_.find(verb);
  return it == by_verb_.end() ? nullptr : &it->second;
}

ProblemLexicon BuildLexicon(const PairCounts& counts, std::size_t top_n) {
  if (top_n == 0) throw ValidationError("top_n must be >= 1");
  std::vector<ProblemPair> all;
  all.reserve(counts.size());
  for (const auto& [key, n] : counts) all.push_back({key.first, key.second, n});
  std::sort(all.begin(), all.end(), RankBefore);
  if (all.size() > top_n) all.resize(top_n);
  return ProblemLexicon(std::move(all));
}

std::string LexiconToTsv(const ProblemLexicon& lex) {
  std::ostringstream out;
  for (const auto& p : lex.entries()) {
    out << p.verb_lemma << '\t' << p.noun_lemma << '\t' << p.count << '\n';
  }
  return out.str();
}

void WriteLexicon(const ProblemLexicon& lex, const std::filesystem::path& path) {
  WriteFile(path, LexiconToTsv(lex));
}

ProblemLexicon ReadLexicon(const std::filesystem::path& path) {
  std::vector<ProblemPair> pairs;
  for (const auto& line : ReadLines(path)) {
    auto f = Split(line, '\t');
    if (f.size() != 3) {
      throw StoreError(path.string() + ": expected verb<TAB>noun<TAB>count, got '" +
                       line + "'");
    }
    std::size_t n = 0;
    try {
      n = std::stoul(f[2]);
    } catch (const std::exception&) {
      throw StoreError(path.string() + ": bad count '" + f[2] + "'");
    }
    if (n == 0) throw StoreError(path.string() + ": count must be >= 1");
    pairs.push_back({ToLower(f[0]), ToLower(f[1]), n});
  }
  std::stable_sort(pairs.begin(), pairs.end(), RankBefore);
  return ProblemLexicon(std::move(pairs));
}

std::optional<ProblemPair> FindKnownProblem(const std::vector<std::string>& lemmas,
                                            const ProblemLexicon& lex,
                                            std::size_t window) {
  if (window == 0) throw ValidationError("window must be >= 1");
  const std::size_t n = lemmas.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto* nouns = lex.NounsFor(lemmas[i]);
    if (!nouns) continue;
    std::size_t lo = i >= window ? i - window : 0;
    std::size_t hi = std::min(n - 1, i + window);
    for (std::size_t j = lo; j <= hi; ++j) {
      if (j != i && nouns->count(lemmas[j])) {
        for (const auto& p : lex.entries()) {
          if (p.verb_lemma == lemmas[i] && p.noun_lemma == lemmas[j]) return p;
        }
      }
    }
  }
  return std::nullopt;
}

bool ContainsKnownProblem(const std::vector<std::string>& lemmas,
                          const ProblemLexicon& lex, std::size_t window) {
  return FindKnownProblem(lemmas, lex, window).has_value();
}

}  // namespace barcode::lexicon
