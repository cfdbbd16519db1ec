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

#ifndef BARCODE_TEXT_H_
#define BARCODE_TEXT_H_

// Rule-based text processing that needs no model files: sentence
// segmentation, tokenization, a coarse POS tagger and a lemmatizer. These
// back the builtin providers and the patent-claim miner.

#include <string>
#include <string_view>
#include <vector>

#include "barcode/common.h"

namespace barcode::text {

inline constexpr std::string_view kSegmenterVersion = "builtin-rules-v1";

// Sentence spans over `text`, trimmed of surrounding whitespace. A text with
// no boundary yields a single span. Empty/blank text yields none.
std::vector<CharSpan> SegmentSentences(std::string_view text);

struct RawToken {
  std::string text;
  CharSpan span;
};

// Words keep internal apostrophes, hyphens and decimal points; every other
// non-space character is its own token.
std::vector<RawToken> Tokenize(std::string_view text);

struct TaggedToken {
  std::string text;
  std::string lemma;
  std::string pos;  // Universal POS: NOUN VERB ADJ ADV ADP DET PRON ...
  std::string tag;  // Penn-style fine tag where the rules can tell (VBG, PRP)
  CharSpan span;
};

// Coarse tagger: closed-class lexicons, suffix rules, NOUN as the open-class
// default. Good enough for "for [verb]-ing [noun]" mining, not for parsing.
std::vector<TaggedToken> Tag(std::string_view text);

// Verb lemma for an inflected form (-ing, -ed, -s, irregulars).
std::string LemmatizeVerb(std::string_view word);
// Singular form for a plural noun.
std::string LemmatizeNoun(std::string_view word);

bool IsStopword(std::string_view lower_word);

// Lowercased content lemmas (stopwords and punctuation dropped). Used by the
// lexical encoder, lexical NLI and BM25 so all three agree on terms.
std::vector<std::string> ContentLemmas(std::string_view text);

// Lowercase, collapse runs of whitespace to one space, trim.
std::string NormalizeSpaces(std::string_view s);

}  // namespace barcode::text

#endif  // BARCODE_TEXT_H_
