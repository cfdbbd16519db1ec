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

#include "barcode/text.h"

#include "doctest.h"

namespace barcode::text {
namespace {

std::vector<std::string> Pieces(std::string_view s) {
  std::vector<std::string> out;
  for (const auto& span : SegmentSentences(s)) {
    out.emplace_back(s.substr(span.start, span.size()));
  }
  return out;
}

TEST_CASE("segmentation") {
  CHECK(Pieces("A. B.") == std::vector<std::string>{"A.", "B."});
  CHECK(Pieces("no final period") == std::vector<std::string>{"no final period"});
  CHECK(Pieces("   ").empty());
  CHECK(Pieces("It lives e.g. in deserts. It drinks fog.").size() == 2);
  CHECK(Pieces("The body is angled at 45.5 degrees. Wings are hard.").size() == 2);
  CHECK(Pieces("One.\n\ntwo") == std::vector<std::string>{"One.", "two"});
}

TEST_CASE("tokenization keeps internal punctuation") {
  auto toks = Tokenize("longer-legged horses, the pelican's body 3.5 m");
  std::vector<std::string> words;
  for (const auto& t : toks) words.push_back(t.text);
  CHECK(words == std::vector<std::string>{"longer-legged", "horses", ",", "the",
                                          "pelican", "'s", "body", "3.5", "m"});
  CHECK(toks[1].span == CharSpan{14, 20});
}

TEST_CASE("verb lemmas") {
  CHECK(LemmatizeVerb("traps") == "trap");
  CHECK(LemmatizeVerb("catches") == "catch");
  CHECK(LemmatizeVerb("collecting") == "collect");
  CHECK(LemmatizeVerb("reducing") == "reduce");
  CHECK(LemmatizeVerb("trapping") == "trap");
  CHECK(LemmatizeVerb("covered") == "cover");
  CHECK(LemmatizeVerb("emitted") == "emit");
  CHECK(LemmatizeVerb("discovered") == "discover");
  CHECK(LemmatizeVerb("buries") == "bury");
  CHECK(LemmatizeVerb("kept") == "keep");
  CHECK(LemmatizeVerb("detected") == "detect");
  CHECK(LemmatizeVerb("guiding") == "guide");
}

TEST_CASE("noun lemmas") {
  CHECK(LemmatizeNoun("droplets") == "droplet");
  CHECK(LemmatizeNoun("bodies") == "body");
  CHECK(LemmatizeNoun("glasses") == "glass");
  CHECK(LemmatizeNoun("moisture") == "moisture");
}

TEST_CASE("tagger basics") {
  auto t = Tag("a lens for focusing light");
  REQUIRE(t.size() == 5);
  CHECK(t[2].pos == "ADP");
  CHECK(t[3].pos == "VERB");
  CHECK(t[3].tag == "VBG");
  CHECK(t[4].pos == "NOUN");
  CHECK(Tag("It")[0].tag == "PRP");
}

TEST_CASE("content lemmas and normalization") {
  CHECK(ContentLemmas("The beetle catches fog droplets") ==
        std::vector<std::string>{"beetle", "catch", "fog", "droplet"});
  CHECK(NormalizeSpaces("  Trap   Moisture ") == "trap moisture");
}

}  // namespace
}  // namespace barcode::text
