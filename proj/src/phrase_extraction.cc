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

#include "barcode/phrase_extraction.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "barcode/text.h"

namespace barcode::extract {

using nlohmann::json;
using nlohmann::ordered_json;

std::string MethodName(Method m) {
  switch (m) {
    case Method::kQasrl: return "QASRL";
    case Method::kDep: return "DEP";
    case Method::kBoth: return "BOTH";
  }
  return "";
}

Method MethodFromName(const std::string& name) {
  if (name == "QASRL") return Method::kQasrl;
  if (name == "DEP") return Method::kDep;
  if (name == "BOTH") return Method::kBoth;
  throw ValidationError("unknown extraction method '" + name + "'");
}

ordered_json PhraseToJson(const CandidatePhrase& p) {
  ordered_json j;
  j["phrase_id"] = p.phrase_id;
  j["sentence_id"] = p.sentence_id;
  j["text"] = p.text;
  j["method"] = MethodName(p.method);
  j["verb_lemma"] = p.verb_lemma;
  j["span"] = {p.span.start, p.span.end};
  if (!p.pattern_ids.empty()) j["patterns"] = p.pattern_ids;
  return j;
}

CandidatePhrase PhraseFromJson(const json& j) {
  CandidatePhrase p;
  p.phrase_id = j.at("phrase_id").get<std::string>();
  p.sentence_id = j.at("sentence_id").get<std::string>();
  p.text = j.at("text").get<std::string>();
  p.method = MethodFromName(j.at("method").get<std::string>());
  p.verb_lemma = j.value("verb_lemma", "");
  p.span = {j.at("span")[0].get<std::size_t>(), j.at("span")[1].get<std::size_t>()};
  if (j.contains("patterns")) p.pattern_ids = j["patterns"].get<std::vector<int>>();
  return p;
}

namespace {

bool IsWordChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '-' || c == '\'';
}

// Whole-word occurrences of `needle` in `hay` (case-insensitive).
std::vector<std::size_t> FindWord(std::string_view hay, std::string_view needle) {
  std::vector<std::size_t> out;
  if (needle.empty()) return out;
  std::string h = ToLower(hay), n = ToLower(needle);
  for (std::size_t pos = h.find(n); pos != std::string::npos;
       pos = h.find(n, pos + 1)) {
    bool left_ok = pos == 0 || !IsWordChar(h[pos - 1]);
    std::size_t end = pos + n.size();
    bool right_ok = end >= h.size() || !IsWordChar(h[end]);
    if (left_ok && right_ok) out.push_back(pos);
  }
  return out;
}

std::vector<std::string> QuestionWords(std::string_view question) {
  std::vector<std::string> words;
  for (auto& t : text::Tokenize(question)) {
    if (std::isalnum(static_cast<unsigned char>(t.text[0]))) {
      words.push_back(ToLower(t.text));
    }
  }
  return words;
}

}  // namespace

std::vector<CandidatePhrase> QasrlToPhrases(const corpus::SentenceRecord& sentence,
                                            const std::vector<QAPair>& qa,
                                            QasrlCounts* counts) {
  QasrlCounts local;
  QasrlCounts& c = counts ? *counts : local;
  std::vector<CandidatePhrase> out;
  for (const auto& pair : qa) {
    auto words = QuestionWords(pair.question);
    if (words.empty()) {
      ++c.dropped_not_verb_final;
      continue;
    }
    if (words.front() == "when" || words.front() == "who" ||
        words.front() == "whom") {
      ++c.dropped_when_who;
      continue;
    }
    const std::string& last = words.back();
    std::string verb_lemma = ToLower(pair.verb_lemma.empty()
                                         ? text::LemmatizeVerb(pair.verb)
                                         : pair.verb_lemma);
    bool verb_final = last == ToLower(pair.verb) ||
                      text::LemmatizeVerb(last) == verb_lemma;
    if (!verb_final) {
      ++c.dropped_not_verb_final;
      continue;
    }
    std::string answer = Trim(pair.answer);
    auto answer_hits = FindWord(sentence.text, answer);
    if (answer.empty() || answer_hits.empty()) {
      ++c.dropped_unaligned;
      continue;
    }
    CharSpan span{answer_hits.front(), answer_hits.front() + answer.size()};
    // Extend over the nearest occurrence of the verb.
    auto verb_hits = FindWord(sentence.text, pair.verb);
    if (!verb_hits.empty()) {
      std::size_t best = verb_hits.front();
      auto dist = [&](std::size_t v) {
        return v > span.start ? v - span.start : span.start - v;
      };
      for (auto v : verb_hits) {
        if (dist(v) < dist(best)) best = v;
      }
      span.start = std::min(span.start, best);
      span.end = std::max(span.end, best + pair.verb.size());
    }
    CandidatePhrase p;
    p.sentence_id = sentence.sentence_id;
    p.text = text::NormalizeSpaces(verb_lemma + " " + answer);
    p.method = Method::kQasrl;
    p.verb_lemma = verb_lemma;
    p.span = span;
    out.push_back(std::move(p));
    ++c.kept;
  }
  return out;
}

std::vector<CandidatePhrase> MatchPatterns(
    const corpus::SentenceRecord& sentence, const ParseTree& tree,
    const std::vector<DependencyPattern>& patterns) {
  std::vector<CandidatePhrase> out;
  for (const auto& pattern : patterns) {
    for (const auto& m : MatchPattern(pattern, tree)) {
      const Token& anchor = tree[m[0]];
      std::vector<int> rest(m.begin() + 1, m.end());
      std::sort(rest.begin(), rest.end());
      std::string phrase = ToLower(anchor.lemma);
      CharSpan span = anchor.span;
      for (int t : rest) {
        phrase += " " + tree[t].text;
        span.start = std::min(span.start, tree[t].span.start);
        span.end = std::max(span.end, tree[t].span.end);
      }
      CandidatePhrase p;
      p.sentence_id = sentence.sentence_id;
      p.text = text::NormalizeSpaces(phrase);
      p.method = Method::kDep;
      p.verb_lemma = ToLower(anchor.lemma);
      p.span = span;
      p.pattern_ids = {pattern.pattern_id};
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::vector<DependencyPattern> LoadPhrasePatterns(const std::filesystem::path& path) {
  auto patterns = LoadPatternFile(path);
  for (const auto& p : patterns) {
    bool verb_anchor = std::any_of(
        p.nodes[0].attrs.begin(), p.nodes[0].attrs.end(), [](const AttrConstraint& c) {
          return c.attr == TokenAttr::kPos && !c.negate && c.values.size() == 1 &&
                 c.values[0] == "VERB";
        });
    if (!verb_anchor) {
      throw ConfigError("pattern " + std::to_string(p.pattern_id) +
                        ": anchor node must be constrained to POS=VERB");
    }
  }
  return patterns;
}

std::vector<CandidatePhrase> MergeSentencePhrases(
    const std::string& sentence_id, std::vector<CandidatePhrase> phrases) {
  std::map<std::string, CandidatePhrase> by_text;
  for (auto& p : phrases) {
    auto it = by_text.find(p.text);
    if (it == by_text.end()) {
      by_text.emplace(p.text, std::move(p));
      continue;
    }
    CandidatePhrase& kept = it->second;
    if (kept.method != p.method) kept.method = Method::kBoth;
    if (p.span.size() < kept.span.size() ||
        (p.span.size() == kept.span.size() && p.span.start < kept.span.start)) {
      kept.span = p.span;
    }
    for (int id : p.pattern_ids) {
      if (std::find(kept.pattern_ids.begin(), kept.pattern_ids.end(), id) ==
          kept.pattern_ids.end()) {
        kept.pattern_ids.push_back(id);
      }
    }
    std::sort(kept.pattern_ids.begin(), kept.pattern_ids.end());
  }
  std::vector<CandidatePhrase> out;
  for (auto& [_, p] : by_text) out.push_back(std::move(p));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.span.start != b.span.start) return a.span.start < b.span.start;
    if (a.span.end != b.span.end) return a.span.end < b.span.end;
    return a.text < b.text;
  });
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].phrase_id = sentence_id + ":" + std::to_string(i);
  }
  return out;
}

PhraseTable ExtractAll(const std::vector<corpus::SentenceRecord>& sentences,
                       ParseProvider& parser, SrlProvider* srl,
                       const std::vector<DependencyPattern>& patterns) {
  PhraseTable table;
  for (const auto& s : sentences) {
    ++table.summary.sentences;
    std::vector<CandidatePhrase> found;
    try {
      ParseTree tree = parser.Parse(s.sentence_id, s.text);
      std::vector<QAPair> qa;
      if (srl) qa = srl->Analyze(s.sentence_id, s.text);
      found = MatchPatterns(s, tree, patterns);
      auto from_qa = QasrlToPhrases(s, qa, &table.summary.qasrl);
      found.insert(found.end(), from_qa.begin(), from_qa.end());
      table.parses.emplace(s.sentence_id, std::move(tree));
    } catch (const ProviderError& e) {
      ++table.summary.skipped;
      spdlog::warn("extract: skipping sentence {}: {}", s.sentence_id, e.what());
      continue;
    }
    for (auto& p : MergeSentencePhrases(s.sentence_id, std::move(found))) {
      table.phrases.push_back(std::move(p));
    }
  }
  table.summary.phrases = table.phrases.size();
  return table;
}

void WritePhraseTable(const PhraseTable& table, const std::filesystem::path& index_dir) {
  std::ostringstream phrases, parses;
  for (const auto& p : table.phrases) phrases << PhraseToJson(p).dump() << '\n';
  for (const auto& [id, tree] : table.parses) {
    json row = tree.ToJson();
    row["sentence_id"] = id;
    parses << row.dump() << '\n';
  }
  WriteFile(index_dir / "phrases.jsonl", phrases.str());
  WriteFile(index_dir / "parses.jsonl", parses.str());
}

std::vector<CandidatePhrase> ReadPhrases(const std::filesystem::path& index_dir) {
  std::ifstream in(index_dir / "phrases.jsonl");
  if (!in) throw StoreError("missing " + (index_dir / "phrases.jsonl").string());
  std::vector<CandidatePhrase> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(PhraseFromJson(json::parse(line)));
  }
  return out;
}

std::map<std::string, ParseTree> ReadParses(
    const std::filesystem::path& index_dir,
    const std::vector<corpus::SentenceRecord>& sentences) {
  std::map<std::string, const corpus::SentenceRecord*> by_id;
  for (const auto& s : sentences) by_id[s.sentence_id] = &s;
  std::ifstream in(index_dir / "parses.jsonl");
  if (!in) throw StoreError("missing " + (index_dir / "parses.jsonl").string());
  std::map<std::string, ParseTree> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json row = json::parse(line);
    std::string id = row.at("sentence_id").get<std::string>();
    ParseTree tree = ParseTree::FromJson(row);
    if (auto it = by_id.find(id); it != by_id.end()) tree.AlignTo(it->second->text);
    out.emplace(std::move(id), std::move(tree));
  }
  return out;
}

}  // namespace barcode::extract
