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

#include <algorithm>
#include <cctype>
#include <unordered_map>
#include <unordered_set>

namespace barcode::text {
namespace {

using WordSet = std::unordered_set<std::string_view>;

bool IsAlpha(unsigned char c) { return std::isalpha(c) != 0 || c >= 0x80; }
bool IsDigit(unsigned char c) { return std::isdigit(c) != 0; }
bool IsSpace(unsigned char c) { return std::isspace(c) != 0; }

const WordSet& Abbreviations() {
  static const WordSet kSet = {
      "e.g", "i.e", "etc", "dr", "mr", "mrs", "ms", "st", "vs", "fig",
      "al", "approx", "ca", "cf", "sp", "spp", "var", "subsp", "no",
      "jr", "sr", "prof", "mt", "ft", "inc", "ltd", "co", "gen", "c"};
  return kSet;
}

const std::unordered_map<std::string_view, std::string_view>& Irregulars() {
  static const std::unordered_map<std::string_view, std::string_view> kMap = {
      {"is", "be"}, {"are", "be"}, {"was", "be"}, {"were", "be"},
      {"been", "be"}, {"being", "be"}, {"am", "be"}, {"'s", "be"},
      {"has", "have"}, {"had", "have"}, {"having", "have"},
      {"does", "do"}, {"did", "do"}, {"done", "do"},
      {"caught", "catch"}, {"made", "make"}, {"kept", "keep"},
      {"gave", "give"}, {"given", "give"}, {"took", "take"},
      {"taken", "take"}, {"got", "get"}, {"gotten", "get"},
      {"went", "go"}, {"gone", "go"}, {"came", "come"}, {"saw", "see"},
      {"seen", "see"}, {"found", "find"}, {"held", "hold"},
      {"brought", "bring"}, {"thought", "think"}, {"built", "build"},
      {"grew", "grow"}, {"grown", "grow"}, {"flew", "fly"},
      {"flown", "fly"}, {"ate", "eat"}, {"eaten", "eat"}, {"led", "lead"},
      {"left", "leave"}, {"fed", "feed"}, {"bred", "breed"}, {"ran", "run"},
      {"swam", "swim"}, {"swum", "swim"}, {"dove", "dive"}, {"hid", "hide"},
      {"hidden", "hide"}, {"lain", "lie"}, {"laid", "lay"},
      {"began", "begin"}, {"begun", "begin"}, {"became", "become"},
      {"bore", "bear"}, {"borne", "bear"}, {"fell", "fall"},
      {"fallen", "fall"}, {"felt", "feel"}, {"fought", "fight"},
      {"froze", "freeze"}, {"frozen", "freeze"}, {"hung", "hang"},
      {"knew", "know"}, {"known", "know"}, {"lost", "lose"},
      {"meant", "mean"}, {"met", "meet"}, {"rose", "rise"},
      {"risen", "rise"}, {"said", "say"}, {"sent", "send"},
      {"shook", "shake"}, {"shaken", "shake"}, {"shot", "shoot"},
      {"slept", "sleep"}, {"sold", "sell"}, {"spent", "spend"},
      {"stood", "stand"}, {"stuck", "stick"}, {"stung", "sting"},
      {"struck", "strike"}, {"taught", "teach"}, {"told", "tell"},
      {"threw", "throw"}, {"thrown", "throw"}, {"woke", "wake"},
      {"wore", "wear"}, {"worn", "wear"}, {"won", "win"},
      {"wrote", "write"}, {"written", "write"}, {"sought", "seek"},
      {"dug", "dig"}, {"clung", "cling"}, {"spun", "spin"},
      {"bitten", "bite"}, {"drew", "draw"}, {"drawn", "draw"},
      {"drank", "drink"}, {"drove", "drive"}, {"driven", "drive"},
      {"children", "child"}, {"feet", "foot"}, {"teeth", "tooth"},
      {"mice", "mouse"}, {"geese", "goose"}, {"men", "man"},
      {"women", "woman"}, {"people", "person"}, {"larvae", "larva"},
      {"antennae", "antenna"}, {"fungi", "fungus"}, {"nuclei", "nucleus"},
      {"bacteria", "bacterium"}, {"data", "datum"}, {"species", "species"},
      {"leaves", "leaf"}, {"wolves", "wolf"}, {"halves", "half"},
      {"lives", "life"}, {"knives", "knife"}, {"shelves", "shelf"},
      {"calves", "calf"}, {"hooves", "hoof"}};
  return kMap;
}

// Base forms used to disambiguate -ing/-ed stripping (collect+ing vs
// reduc(e)+ing vs run(n)+ing).
const WordSet& VerbBases() {
  static const WordSet kSet = {
      "absorb", "accelerate", "accommodate", "accumulate", "achieve",
      "activate", "adapt", "add", "adhere", "adjust", "affect", "aid",
      "align", "allow", "alter", "amplify", "analyze", "anchor", "apply",
      "arrange", "assemble", "assist", "attach", "attack", "attract",
      "avoid", "balance", "bear", "become", "begin", "bend", "bind", "bite",
      "blend", "block", "blow", "boost", "break", "breathe", "breed",
      "bring", "build", "burn", "bury", "calculate", "camouflage", "capture",
      "carry", "catch", "cause", "change", "channel", "charge", "check",
      "circulate", "clean", "clear", "climb", "close", "coat", "collapse",
      "collect", "combine", "communicate", "compress", "compute", "concentrate",
      "condense", "conduct", "connect", "conserve", "consume", "contain",
      "control", "convert", "convey", "cool", "coordinate", "cover",
      "create", "cross", "crush", "cure", "cushion", "cut", "damage",
      "dampen", "dance", "decode", "decompose", "decrease", "defend",
      "deflect", "deform", "deliver", "deploy", "deposit", "describe",
      "design", "detect", "determine", "deter", "develop", "digest",
      "dilute", "direct", "discharge", "discover", "disperse", "display",
      "dispose", "dissipate", "dissolve", "distribute", "dive", "divide",
      "draw", "drink", "drive", "drop", "dry", "eat", "eject", "elevate",
      "eliminate", "emit", "enable", "encode", "encourage", "engage",
      "enhance", "enlarge", "ensure", "enter", "escape", "evaporate",
      "exchange", "exclude", "expand", "expel", "explain", "expose",
      "extend", "extract", "face", "facilitate", "fasten", "feed", "feel",
      "fight", "fill", "filter", "find", "fix", "flatten", "flex", "float",
      "flow", "fly", "focus", "fold", "follow", "force", "form", "fortify",
      "freeze", "fuse", "gain", "gather", "generate", "give", "glide",
      "grasp", "grip", "grind", "grow", "guard", "guide", "handle", "harden",
      "harvest", "heal", "heat", "help", "hide", "hold", "hunt", "identify",
      "ignite", "illuminate", "improve", "increase", "indicate", "induce",
      "inflate", "inhibit", "inject", "insert", "inspect", "insulate",
      "interact", "introduce", "isolate", "join", "keep", "kill", "lay",
      "let", "lift", "limit", "link", "live", "load", "locate", "lock",
      "lose", "lower", "lubricate", "maintain", "make", "manage",
      "maneuver", "manufacture", "measure", "melt", "migrate", "minimize",
      "mix", "modify", "modulate", "monitor", "mount", "move", "navigate",
      "neutralize", "obtain", "occur", "open", "operate", "optimize",
      "orient", "oscillate", "pack", "perform", "permit", "pierce", "place",
      "position", "power", "predict", "prepare", "preserve", "press",
      "prevent", "process", "produce", "propel", "protect", "provide",
      "pull", "pump", "purify", "push", "raise", "reach", "read", "receive",
      "recognize", "record", "recover", "recycle", "reduce", "reflect",
      "refract", "regenerate", "regulate", "reinforce", "release", "remove",
      "renew", "repair", "repel", "replace", "reproduce", "resist",
      "respond", "restore", "retain", "retract", "return", "reuse", "rise",
      "rotate", "run", "save", "scatter", "seal", "secure", "see", "select",
      "sense", "separate", "serve", "shape", "share", "shed", "shield",
      "shift", "shine", "shrink", "sink", "slide", "slip", "slow", "smell",
      "soften", "solve", "sort", "spin", "split", "spread", "squeeze",
      "stabilize", "stay", "steer", "stick", "stiffen", "stimulate",
      "stir", "stop", "store", "strengthen", "stretch", "strike", "submit",
      "suck", "supply", "support", "suppress", "survive", "suspend",
      "sustain", "swim", "switch", "take", "tear", "tilt", "transfer",
      "transform", "transmit", "transport", "trap", "travel", "treat",
      "trigger", "turn", "twist", "use", "utilize", "vary", "ventilate",
      "vibrate", "walk", "warm", "wash", "waterproof", "weld", "wet",
      "wind", "withstand", "write", "rate", "locate", "imitate", "emulate",
      "ride", "come", "go", "have", "do", "be", "say", "get", "put",
      "set", "hit", "bet", "quit", "wed", "shut", "plan", "stir", "ship",
      "scan", "grab", "wrap", "tap", "trim", "plug", "clip", "spot",
      "admit", "commit", "occur", "prefer", "refer", "transfer", "control",
      "equip", "propel", "repel", "expel", "compel", "rebel"};
  return kSet;
}

const WordSet& NotGerunds() {
  static const WordSet kSet = {
      "thing", "something", "anything", "nothing", "everything", "during",
      "string", "ceiling", "king", "ring", "spring", "wing", "sing",
      "bring", "swing", "sting", "sling", "morning", "evening", "nothing",
      "pudding", "herring", "darling", "sibling", "seedling", "duckling",
      "fledgling", "nestling", "yearling", "starling", "sapling", "viking"};
  return kSet;
}

const std::unordered_map<std::string_view, std::string_view>& ClosedClass() {
  // word -> "POS/TAG"
  static const std::unordered_map<std::string_view, std::string_view> kMap = {
      {"a", "DET/DT"}, {"an", "DET/DT"}, {"the", "DET/DT"},
      {"this", "DET/DT"}, {"these", "DET/DT"}, {"those", "DET/DT"},
      {"some", "DET/DT"}, {"any", "DET/DT"}, {"each", "DET/DT"},
      {"every", "DET/DT"}, {"no", "DET/DT"}, {"all", "DET/DT"},
      {"both", "DET/DT"}, {"either", "DET/DT"}, {"neither", "DET/DT"},
      {"another", "DET/DT"}, {"such", "DET/DT"}, {"said", "DET/DT"},
      {"i", "PRON/PRP"}, {"you", "PRON/PRP"}, {"he", "PRON/PRP"},
      {"she", "PRON/PRP"}, {"it", "PRON/PRP"}, {"we", "PRON/PRP"},
      {"they", "PRON/PRP"}, {"me", "PRON/PRP"}, {"him", "PRON/PRP"},
      {"us", "PRON/PRP"}, {"them", "PRON/PRP"},
      {"itself", "PRON/PRP"}, {"themselves", "PRON/PRP"},
      {"himself", "PRON/PRP"}, {"herself", "PRON/PRP"},
      {"my", "PRON/PRP$"}, {"your", "PRON/PRP$"}, {"his", "PRON/PRP$"},
      {"her", "PRON/PRP$"}, {"its", "PRON/PRP$"}, {"our", "PRON/PRP$"},
      {"their", "PRON/PRP$"}, {"who", "PRON/WP"}, {"whom", "PRON/WP"},
      {"what", "PRON/WP"}, {"whose", "PRON/WP$"}, {"which", "PRON/WDT"},
      {"that", "SCONJ/IN"},
      {"of", "ADP/IN"}, {"in", "ADP/IN"}, {"on", "ADP/IN"},
      {"at", "ADP/IN"}, {"by", "ADP/IN"}, {"for", "ADP/IN"},
      {"with", "ADP/IN"}, {"from", "ADP/IN"}, {"into", "ADP/IN"},
      {"onto", "ADP/IN"}, {"upon", "ADP/IN"}, {"over", "ADP/IN"},
      {"under", "ADP/IN"}, {"through", "ADP/IN"}, {"across", "ADP/IN"},
      {"along", "ADP/IN"}, {"among", "ADP/IN"}, {"between", "ADP/IN"},
      {"during", "ADP/IN"}, {"without", "ADP/IN"}, {"within", "ADP/IN"},
      {"about", "ADP/IN"}, {"against", "ADP/IN"}, {"toward", "ADP/IN"},
      {"towards", "ADP/IN"}, {"via", "ADP/IN"}, {"per", "ADP/IN"},
      {"above", "ADP/IN"}, {"below", "ADP/IN"}, {"near", "ADP/IN"},
      {"off", "ADP/IN"}, {"out", "ADP/RP"}, {"up", "ADP/RP"},
      {"down", "ADP/RP"}, {"like", "ADP/IN"}, {"since", "ADP/IN"},
      {"until", "ADP/IN"}, {"after", "ADP/IN"}, {"before", "ADP/IN"},
      {"around", "ADP/IN"}, {"behind", "ADP/IN"}, {"beyond", "ADP/IN"},
      {"inside", "ADP/IN"}, {"outside", "ADP/IN"}, {"beneath", "ADP/IN"},
      {"and", "CCONJ/CC"}, {"or", "CCONJ/CC"}, {"but", "CCONJ/CC"},
      {"nor", "CCONJ/CC"}, {"yet", "CCONJ/CC"},
      {"if", "SCONJ/IN"}, {"because", "SCONJ/IN"}, {"while", "SCONJ/IN"},
      {"although", "SCONJ/IN"}, {"though", "SCONJ/IN"},
      {"whereas", "SCONJ/IN"}, {"when", "SCONJ/WRB"},
      {"where", "SCONJ/WRB"}, {"whether", "SCONJ/IN"},
      {"unless", "SCONJ/IN"}, {"as", "SCONJ/IN"}, {"than", "SCONJ/IN"},
      {"is", "AUX/VBZ"}, {"are", "AUX/VBP"}, {"was", "AUX/VBD"},
      {"were", "AUX/VBD"}, {"be", "AUX/VB"}, {"been", "AUX/VBN"},
      {"being", "AUX/VBG"}, {"am", "AUX/VBP"}, {"has", "AUX/VBZ"},
      {"have", "AUX/VBP"}, {"had", "AUX/VBD"}, {"do", "AUX/VBP"},
      {"does", "AUX/VBZ"}, {"did", "AUX/VBD"}, {"can", "AUX/MD"},
      {"could", "AUX/MD"}, {"may", "AUX/MD"}, {"might", "AUX/MD"},
      {"must", "AUX/MD"}, {"shall", "AUX/MD"}, {"should", "AUX/MD"},
      {"will", "AUX/MD"}, {"would", "AUX/MD"},
      {"not", "PART/RB"}, {"to", "PART/TO"},
      {"one", "NUM/CD"}, {"two", "NUM/CD"}, {"three", "NUM/CD"},
      {"four", "NUM/CD"}, {"five", "NUM/CD"}, {"six", "NUM/CD"},
      {"seven", "NUM/CD"}, {"eight", "NUM/CD"}, {"nine", "NUM/CD"},
      {"ten", "NUM/CD"}, {"hundred", "NUM/CD"}, {"thousand", "NUM/CD"},
      {"also", "ADV/RB"}, {"very", "ADV/RB"}, {"too", "ADV/RB"},
      {"often", "ADV/RB"}, {"thereby", "ADV/RB"}, {"however", "ADV/RB"},
      {"then", "ADV/RB"}, {"thus", "ADV/RB"}, {"only", "ADV/RB"},
      {"even", "ADV/RB"}, {"still", "ADV/RB"}, {"just", "ADV/RB"},
      {"more", "ADV/RBR"}, {"most", "ADV/RBS"}, {"less", "ADV/RBR"},
      {"least", "ADV/RBS"}, {"well", "ADV/RB"}, {"almost", "ADV/RB"},
      {"always", "ADV/RB"}, {"never", "ADV/RB"}, {"here", "ADV/RB"},
      {"there", "ADV/RB"}, {"again", "ADV/RB"}, {"already", "ADV/RB"},
      {"away", "ADV/RB"}, {"so", "ADV/RB"}, {"therefore", "ADV/RB"},
      {"wherein", "ADV/WRB"}, {"whereby", "ADV/WRB"}};
  return kMap;
}

const WordSet& Adjectives() {
  static const WordSet kSet = {
      "small", "large", "big", "high", "low", "long", "short", "new", "old",
      "dense", "moist", "dry", "wet", "hot", "cold", "warm", "cool", "dim",
      "bright", "thin", "thick", "hard", "soft", "strong", "weak", "dark",
      "clear", "other", "same", "different", "first", "second", "third",
      "upper", "lower", "inner", "outer", "similar", "overall", "humid",
      "rigid", "fast", "slow", "heavy", "free", "open", "flat", "smooth",
      "rough", "sharp", "narrow", "wide", "broad", "deep", "shallow",
      "tiny", "huge", "fine", "main", "certain", "many", "much", "few",
      "several", "various", "further", "predetermined", "desired", "own",
      "adjacent", "opposite", "single", "multiple", "entire", "whole",
      "able", "stable", "porous", "liquid", "solid", "gaseous"};
  return kSet;
}

const WordSet& Stopwords() {
  static const WordSet kSet = {
      "a", "an", "the", "this", "that", "these", "those", "some", "any",
      "each", "every", "no", "all", "both", "either", "neither", "another",
      "such", "i", "you", "he", "she", "it", "we", "they", "me", "him",
      "her", "us", "them", "my", "your", "his", "its", "our", "their",
      "who", "whom", "what", "whose", "which", "of", "in", "on", "at", "by",
      "for", "with", "from", "into", "onto", "upon", "to", "and", "or",
      "but", "nor", "if", "as", "than", "be", "is", "are", "was", "were",
      "been", "being", "am", "have", "has", "had", "do", "does", "did",
      "can", "could", "may", "might", "must", "shall", "should", "will",
      "would", "not", "so", "also", "very", "too", "then", "thus", "there",
      "here", "itself", "themselves", "while", "when", "where", "because",
      "although", "though", "however", "thereby", "s", "'s", "whether",
      "about", "such", "only", "just", "even", "still", "more", "most"};
  return kSet;
}

bool IsVowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

bool IsDoubledConsonant(std::string_view s) {
  if (s.size() < 2) return false;
  char a = s[s.size() - 1], b = s[s.size() - 2];
  return a == b && !IsVowel(a) && a != 'l' && a != 's' && a != 'z' &&
         a != 'f';
}

bool EndsWith(std::string_view s, std::string_view suf) {
  return s.size() >= suf.size() && s.substr(s.size() - suf.size()) == suf;
}

// Stem left after removing -ing/-ed: pick between stem, stem+"e" and the
// undoubled stem using the verb base lexicon, else fall back on spelling
// rules.
std::string RestoreStem(std::string stem) {
  const auto& bases = VerbBases();
  if (bases.count(stem)) return stem;
  if (bases.count(stem + "e")) return stem + "e";
  if (IsDoubledConsonant(stem)) {
    std::string undoubled = stem.substr(0, stem.size() - 1);
    if (bases.count(undoubled)) return undoubled;
  }
  if (stem.size() >= 2 && EndsWith(stem, "i")) {
    // dying -> die, tying -> tie are rare; "ied" handled by caller.
  }
  if (IsDoubledConsonant(stem)) return stem.substr(0, stem.size() - 1);
  static constexpr std::string_view kAddE[] = {
      "c", "v", "dg", "iz", "yz", "ns", "rs", "ps", "ls", "us", "ur",
      "bl", "cl", "dl", "fl", "gl", "kl", "pl", "tl", "zl", "at", "ut",
      "ot", "ng", "rg", "ak", "ok", "uk", "id", "ud", "od", "ib", "ob",
      "ub", "am", "im", "om", "um", "in", "on", "un", "ir", "or", "as",
      "is", "os", "ip", "op", "up", "ic", "ac", "oc", "ev", "iv", "av"};
  for (auto suf : kAddE) {
    if (EndsWith(stem, suf)) {
      // "ng" only after a vowel-n sequence like "chang" (not "bring").
      if (suf == "ng" && stem.size() >= 3 && stem[stem.size() - 3] != 'a') {
        continue;
      }
      if ((suf == "in" || suf == "on" || suf == "un" || suf == "or" ||
           suf == "ir" || suf == "at" || suf == "ot" || suf == "ut" ||
           suf == "ip" || suf == "op" || suf == "up" || suf == "am" ||
           suf == "im" || suf == "om" || suf == "um" || suf == "id" ||
           suf == "od" || suf == "ud" || suf == "ak" || suf == "ok" ||
           suf == "uk" || suf == "ib" || suf == "ob" || suf == "ub" ||
           suf == "as" || suf == "is" || suf == "os" || suf == "ic" ||
           suf == "ac" || suf == "oc") &&
          stem.size() >= 3 && IsVowel(stem[stem.size() - 3])) {
        // Two vowels before the final consonant (heat, cool, boil): no e.
        continue;
      }
      return stem + "e";
    }
  }
  return stem;
}

}  // namespace

std::vector<CharSpan> SegmentSentences(std::string_view text) {
  std::vector<CharSpan> out;
  auto emit = [&](std::size_t b, std::size_t e) {
    while (b < e && IsSpace(text[b])) ++b;
    while (e > b && IsSpace(text[e - 1])) --e;
    if (e > b) out.push_back({b, e});
  };

  std::size_t start = 0;
  const std::size_t n = text.size();
  for (std::size_t i = 0; i < n; ++i) {
    char c = text[i];
    if (c == '\n' && i + 1 < n && text[i + 1] == '\n') {
      emit(start, i);
      start = i + 1;
      continue;
    }
    if (c != '.' && c != '!' && c != '?') continue;
    std::size_t end = i + 1;
    while (end < n && (text[end] == '"' || text[end] == '\'' ||
                       text[end] == ')' || text[end] == ']' ||
                       text[end] == '.' || text[end] == '!' ||
                       text[end] == '?')) {
      ++end;
    }
    if (end < n && !IsSpace(text[end])) continue;
    std::size_t next = end;
    while (next < n && IsSpace(text[next])) ++next;
    if (next < n) {
      unsigned char nc = text[next];
      bool opens = std::isupper(nc) || IsDigit(nc) || nc == '"' ||
                   nc == '\'' || nc == '(' || nc == '[';
      if (!opens) continue;
    }
    if (c == '.') {
      // Word immediately before the period.
      std::size_t w = i;
      while (w > start && !IsSpace(text[w - 1]) && text[w - 1] != '(') --w;
      std::string word = ToLower(text.substr(w, i - w));
      if (Abbreviations().count(word)) continue;
    }
    emit(start, end);
    start = end;
    i = end - 1;
  }
  emit(start, n);
  return out;
}

std::vector<RawToken> Tokenize(std::string_view text) {
  std::vector<RawToken> out;
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    unsigned char c = text[i];
    if (IsSpace(c)) {
      ++i;
      continue;
    }
    std::size_t b = i;
    if (IsAlpha(c) || IsDigit(c)) {
      ++i;
      while (i < n) {
        unsigned char d = text[i];
        if (IsAlpha(d) || IsDigit(d)) {
          ++i;
        } else if ((d == '\'' || d == '-' || d == '.') && i + 1 < n &&
                   (IsAlpha(text[i + 1]) || IsDigit(text[i + 1]))) {
          // Internal apostrophe/hyphen; a period only between digits.
          if (d == '.' && !(IsDigit(text[i - 1]) && IsDigit(text[i + 1]))) {
            break;
          }
          if (d == '\'' && i + 2 <= n &&
              ToLower(text.substr(i, 2)) == "'s" &&
              (i + 2 == n || !IsAlpha(text[i + 2]))) {
            break;  // possessive clitic is its own token
          }
          ++i;
        } else {
          break;
        }
      }
    } else if (c == '\'' && i + 1 < n && (text[i + 1] == 's' ||
                                          text[i + 1] == 'S') &&
               (i + 2 == n || !IsAlpha(text[i + 2]))) {
      i += 2;
    } else if (c >= 0x80) {
      // Multi-byte UTF-8 punctuation (e.g. en dash): keep the code point.
      ++i;
      while (i < n && (static_cast<unsigned char>(text[i]) & 0xC0) == 0x80) ++i;
    } else {
      ++i;
    }
    out.push_back({std::string(text.substr(b, i - b)), {b, i}});
  }
  return out;
}

std::string LemmatizeVerb(std::string_view word) {
  std::string w = ToLower(word);
  if (auto it = Irregulars().find(w); it != Irregulars().end()) {
    return std::string(it->second);
  }
  if (VerbBases().count(w)) return w;
  if (EndsWith(w, "ing") && w.size() >= 5) {
    std::string stem = w.substr(0, w.size() - 3);
    if (EndsWith(stem, "y") && stem.size() >= 2 && !IsVowel(stem[stem.size() - 2])) {
      return stem;  // carrying -> carry
    }
    return RestoreStem(stem);
  }
  if (EndsWith(w, "ied") && w.size() >= 5) return w.substr(0, w.size() - 3) + "y";
  if (EndsWith(w, "ed") && w.size() >= 4) {
    std::string stem = w.substr(0, w.size() - 2);
    if (VerbBases().count(w.substr(0, w.size() - 1))) {
      return w.substr(0, w.size() - 1);  // reduced -> reduce
    }
    return RestoreStem(stem);
  }
  if (EndsWith(w, "ies") && w.size() >= 5) return w.substr(0, w.size() - 3) + "y";
  if (EndsWith(w, "es") && w.size() >= 4) {
    std::string stem = w.substr(0, w.size() - 2);
    if (EndsWith(stem, "s") || EndsWith(stem, "x") || EndsWith(stem, "z") ||
        EndsWith(stem, "ch") || EndsWith(stem, "sh") || EndsWith(stem, "o")) {
      return stem;
    }
    return w.substr(0, w.size() - 1);
  }
  if (EndsWith(w, "s") && !EndsWith(w, "ss") && w.size() >= 3) {
    return w.substr(0, w.size() - 1);
  }
  return w;
}

std::string LemmatizeNoun(std::string_view word) {
  std::string w = ToLower(word);
  if (auto it = Irregulars().find(w); it != Irregulars().end()) {
    return std::string(it->second);
  }
  if (w.size() < 4) return w;
  if (EndsWith(w, "ss") || EndsWith(w, "us") || EndsWith(w, "is") ||
      EndsWith(w, "ics")) {
    return w;
  }
  if (EndsWith(w, "ies")) return w.substr(0, w.size() - 3) + "y";
  if (EndsWith(w, "sses") || EndsWith(w, "xes") || EndsWith(w, "ches") ||
      EndsWith(w, "shes") || EndsWith(w, "zes")) {
    return w.substr(0, w.size() - 2);
  }
  if (EndsWith(w, "s")) return w.substr(0, w.size() - 1);
  return w;
}

std::vector<TaggedToken> Tag(std::string_view text) {
  std::vector<TaggedToken> out;
  for (auto& raw : Tokenize(text)) {
    TaggedToken t;
    t.text = raw.text;
    t.span = raw.span;
    std::string lower = ToLower(raw.text);
    unsigned char first = raw.text[0];
    if (!IsAlpha(first) && !IsDigit(first)) {
      t.pos = (lower == "$" || lower == "&" || lower == "@" || lower == "%")
                  ? "SYM"
                  : "PUNCT";
      t.tag = t.pos == "SYM" ? "SYM" : raw.text;
      t.lemma = lower;
    } else if (IsDigit(first)) {
      t.pos = "NUM";
      t.tag = "CD";
      t.lemma = lower;
    } else if (lower == "'s") {
      t.pos = "PART";
      t.tag = "POS";
      t.lemma = "'s";
    } else if (auto it = ClosedClass().find(lower); it != ClosedClass().end()) {
      auto slash = it->second.find('/');
      t.pos = std::string(it->second.substr(0, slash));
      t.tag = std::string(it->second.substr(slash + 1));
      t.lemma = t.pos == "AUX" ? LemmatizeVerb(lower) : lower;
    } else if (EndsWith(lower, "ing") && lower.size() >= 5 &&
               !NotGerunds().count(lower)) {
      t.pos = "VERB";
      t.tag = "VBG";
      t.lemma = LemmatizeVerb(lower);
    } else if (EndsWith(lower, "ly") && lower.size() >= 5) {
      t.pos = "ADV";
      t.tag = "RB";
      t.lemma = lower;
    } else if (Adjectives().count(lower) || EndsWith(lower, "ous") ||
               EndsWith(lower, "ive") || EndsWith(lower, "ible") ||
               EndsWith(lower, "able") || EndsWith(lower, "ful") ||
               EndsWith(lower, "less") ||
               (EndsWith(lower, "ic") && lower.size() >= 5) ||
               (EndsWith(lower, "al") && lower.size() >= 6)) {
      t.pos = "ADJ";
      t.tag = "JJ";
      t.lemma = lower;
    } else if (Irregulars().count(lower) &&
               VerbBases().count(Irregulars().at(lower))) {
      t.pos = "VERB";
      t.tag = "VBD";
      t.lemma = LemmatizeVerb(lower);
    } else if (EndsWith(lower, "ed") && lower.size() >= 5) {
      t.pos = "VERB";
      t.tag = "VBN";
      t.lemma = LemmatizeVerb(lower);
    } else if (VerbBases().count(lower) && !out.empty() &&
               (out.back().tag == "TO" || out.back().tag == "MD")) {
      t.pos = "VERB";
      t.tag = "VB";
      t.lemma = lower;
    } else {
      t.pos = std::isupper(first) && !out.empty() ? "PROPN" : "NOUN";
      t.tag = EndsWith(lower, "s") && !EndsWith(lower, "ss") ? "NNS" : "NN";
      t.lemma = t.pos == "PROPN" ? raw.text : LemmatizeNoun(lower);
    }
    out.push_back(std::move(t));
  }
  return out;
}

bool IsStopword(std::string_view lower_word) {
  return Stopwords().count(lower_word) > 0;
}

std::vector<std::string> ContentLemmas(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : Tag(text)) {
    if (t.pos == "PUNCT" || t.pos == "SYM") continue;
    std::string lower = ToLower(t.text);
    if (IsStopword(lower)) continue;
    std::string lemma = ToLower(t.lemma);
    if (t.pos == "NOUN" || t.pos == "PROPN") {
      // Bare -s forms may be verbs ("traps"); the noun rule covers both.
      lemma = LemmatizeNoun(lower);
      if (auto it = Irregulars().find(lower); it != Irregulars().end()) {
        lemma = std::string(it->second);
      }
    }
    if (IsStopword(lemma)) continue;
    out.push_back(std::move(lemma));
  }
  return out;
}

std::string NormalizeSpaces(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (unsigned char c : s) {
    if (IsSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

}  // namespace barcode::text
