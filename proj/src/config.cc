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

#include "barcode/config.h"

#include <cctype>
#include <cstdlib>
#include <set>

#include "barcode/common.h"

extern char** environ;

namespace barcode {

using nlohmann::json;

namespace {

class TomlLine {
 public:
  TomlLine(std::string_view s, std::string where) : s_(s), where_(std::move(where)) {}

  [[noreturn]] void Fail(const std::string& what) const {
    throw ConfigError(where_ + ": " + what);
  }

  void SkipSpace() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }
  bool AtEnd() {
    SkipSpace();
    return pos_ >= s_.size() || s_[pos_] == '#';
  }
  bool Consume(char c) {
    SkipSpace();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void Expect(char c) {
    if (!Consume(c)) Fail(std::string("expected '") + c + "'");
  }

  std::string Key() {
    SkipSpace();
    if (pos_ < s_.size() && (s_[pos_] == '"' || s_[pos_] == '\'')) return String();
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
            s_[pos_] == '-')) {
      ++pos_;
    }
    if (start == pos_) Fail("expected a key");
    return std::string(s_.substr(start, pos_ - start));
  }

  std::vector<std::string> DottedKey() {
    std::vector<std::string> parts{Key()};
    while (Consume('.')) parts.push_back(Key());
    return parts;
  }

  json Value() {
    SkipSpace();
    if (pos_ >= s_.size()) Fail("missing value");
    char c = s_[pos_];
    if (c == '"' || c == '\'') return String();
    if (c == '[') return Array();
    if (s_.substr(pos_, 4) == "true") {
      pos_ += 4;
      return true;
    }
    if (s_.substr(pos_, 5) == "false") {
      pos_ += 5;
      return false;
    }
    return Number();
  }

 private:
  std::string String() {
    char quote = s_[pos_++];
    if (s_.substr(pos_, 2) == std::string(2, quote)) Fail("multi-line strings are not supported");
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != quote) {
      char c = s_[pos_++];
      if (quote == '"' && c == '\\') {
        if (pos_ >= s_.size()) Fail("dangling escape");
        char e = s_[pos_++];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: Fail(std::string("unsupported escape \\") + e);
        }
      } else {
        out += c;
      }
    }
    if (pos_ >= s_.size()) Fail("unterminated string");
    ++pos_;
    return out;
  }

  json Array() {
    ++pos_;
    json arr = json::array();
    if (Consume(']')) return arr;
    while (true) {
      arr.push_back(Value());
      if (Consume(']')) return arr;
      Expect(',');
      if (Consume(']')) return arr;  // trailing comma
    }
  }

  json Number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                s_[pos_] == '.' || s_[pos_] == '+' || s_[pos_] == '-' ||
                                s_[pos_] == '_')) {
      ++pos_;
    }
    std::string tok;
    for (char c : s_.substr(start, pos_ - start)) {
      if (c != '_') tok += c;
    }
    if (tok.empty()) Fail("expected a value");
    bool is_float = tok.find_first_of(".eE") != std::string::npos;
    char* end = nullptr;
    if (is_float) {
      double d = std::strtod(tok.c_str(), &end);
      if (*end != '\0') Fail("bad number '" + tok + "'");
      return d;
    }
    long long v = std::strtoll(tok.c_str(), &end, 10);
    if (*end != '\0') Fail("bad value '" + tok + "'");
    return v;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::string where_;
};

std::vector<std::string> SplitDotted(const std::string& dotted) {
  auto parts = Split(dotted, '.');
  for (const auto& p : parts) {
    if (p.empty()) throw ConfigError("bad config key '" + dotted + "'");
  }
  return parts;
}

// Both numeric flavours count as the same type for overrides.
bool SameKind(const json& a, const json& b) {
  if (a.is_number() && b.is_number()) return !(a.is_number_integer() && b.is_number_float());
  if (a.is_array() && b.is_array()) return true;
  return a.type() == b.type();
}

void Overlay(json& base, const json& over, const std::string& prefix) {
  for (const auto& [k, v] : over.items()) {
    std::string key = prefix.empty() ? k : prefix + "." + k;
    if (!base.contains(k)) throw ConfigError("unknown config key '" + key + "'");
    json& slot = base[k];
    if (slot.is_object()) {
      if (!v.is_object()) throw ConfigError("config key '" + key + "' must be a table");
      Overlay(slot, v, key);
    } else {
      if (!SameKind(slot, v)) {
        throw ConfigError("config key '" + key + "' expects " + std::string(slot.type_name()) +
                          ", got " + std::string(v.type_name()));
      }
      slot = slot.is_number_float() ? json(v.get<double>()) : v;
    }
  }
}

}  // namespace

json ParseToml(std::string_view text, const std::string& source) {
  json root = json::object();
  json* table = &root;
  std::set<std::string> defined_tables;
  std::size_t lineno = 0;
  for (const auto& raw : Split(text, '\n')) {
    ++lineno;
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    TomlLine p(line, source + ":" + std::to_string(lineno));
    if (p.AtEnd()) continue;
    if (p.Consume('[')) {
      if (p.Consume('[')) p.Fail("arrays of tables are not supported");
      auto parts = p.DottedKey();
      p.Expect(']');
      if (!p.AtEnd()) p.Fail("trailing characters after table header");
      std::string name;
      table = &root;
      for (const auto& part : parts) {
        name += (name.empty() ? "" : ".") + part;
        json& next = (*table)[part];
        if (next.is_null()) next = json::object();
        if (!next.is_object()) p.Fail("'" + name + "' is not a table");
        table = &next;
      }
      if (!defined_tables.insert(name).second) p.Fail("table [" + name + "] defined twice");
      continue;
    }
    auto parts = p.DottedKey();
    p.Expect('=');
    json value = p.Value();
    if (!p.AtEnd()) p.Fail("trailing characters after value");
    json* t = table;
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
      json& next = (*t)[parts[i]];
      if (next.is_null()) next = json::object();
      if (!next.is_object()) p.Fail("'" + parts[i] + "' is not a table");
      t = &next;
    }
    if (t->contains(parts.back())) p.Fail("duplicate key '" + parts.back() + "'");
    (*t)[parts.back()] = std::move(value);
  }
  return root;
}

json Config::Defaults() {
  return json::parse(R"({
    "general": {"seed": 13, "log_level": "info"},
    "providers": {
      "url": "",
      "segmenter": "builtin",
      "parse": "fixture", "parse_dir": "fixtures/parse",
      "srl": "fixture", "srl_dir": "fixtures/srl",
      "embedding": "builtin",
      "embedding_model": "sentence-transformers/multi-qa-mpnet-base-dot-v1",
      "embedding_dim": 256, "embedding_file": "",
      "nli": "builtin",
      "nli_model": "cross-encoder/nli-deberta-v3-base",
      "nli_file": "",
      "batch": 64
    },
    "extraction": {"patterns": "patterns/dep_patterns.json"},
    "patents": {"claims": "fixtures/patents/claims.txt", "top_n": 2000},
    "bio": {
      "tau": 0.5, "window": 5,
      "lexicon_dir": "lexicon", "clausal_patterns": "patterns/clausal_patterns.json",
      "epochs": 3000, "lr": 0.0001, "prior": 0.5, "learn_prior": false,
      "accuracy_mean": 0.7, "accuracy_strength": 20.0
    },
    "classifier": {
      "model": "models/relevance.json", "labeled_pairs": "data/labeled_pairs.jsonl",
      "c": 100.0, "gamma": 0.1, "degree": 2, "coef0": 0.0, "holdout": 0.2
    },
    "ranking": {"shortlist_n": 4000, "default_k": 15, "max_k": 100, "bidirectional_nli": false},
    "evaluation": {"ks": [7, 15], "rbo_p": 0.9, "rbo_depth": 15},
    "service": {"host": "127.0.0.1", "port": 8080, "threads": 8, "feedback_log": "feedback.jsonl",
                "cors_origin": ""}
  })");
}

Config::Config() : tree_(Defaults()) {}

Config Config::FromFile(const std::filesystem::path& path) {
  std::string text;
  try {
    text = ReadFile(path);
  } catch (const Error& e) {
    throw ConfigError(std::string("cannot read config: ") + e.what());
  }
  Config c;
  Overlay(c.tree_, ParseToml(text, path.string()), "");
  c.base_dir_ = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  c.Validate();
  return c;
}

Config Config::FromJson(const json& snapshot, std::filesystem::path base_dir) {
  Config c;
  Overlay(c.tree_, snapshot, "");
  c.base_dir_ = std::move(base_dir);
  c.Validate();
  return c;
}

void Config::ApplyEnvironment(const std::map<std::string, std::string>& env) {
  static const std::string kPrefix = "BARCODE_";
  for (const auto& [name, value] : env) {
    if (name.rfind(kPrefix, 0) != 0) continue;
    std::string rest = ToLower(name.substr(kPrefix.size()));
    // Section names hold no underscores, so the first one splits.
    auto us = rest.find('_');
    if (us == std::string::npos) continue;
    std::string section = rest.substr(0, us), key = rest.substr(us + 1);
    if (!tree_.contains(section) || !tree_[section].contains(key)) continue;
    Set(section + "." + key, value);
  }
}

void Config::ApplyProcessEnvironment() {
  std::map<std::string, std::string> env;
  for (char** e = environ; e && *e; ++e) {
    std::string kv(*e);
    auto eq = kv.find('=');
    if (eq != std::string::npos) env[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  ApplyEnvironment(env);
}

void Config::Set(const std::string& dotted, const std::string& value) {
  const json& current = Get(dotted);
  json v;
  if (current.is_string()) {
    v = value;
  } else if (current.is_boolean()) {
    std::string l = ToLower(Trim(value));
    if (l == "true" || l == "1" || l == "yes") {
      v = true;
    } else if (l == "false" || l == "0" || l == "no") {
      v = false;
    } else {
      throw ConfigError(dotted + ": expected a boolean, got '" + value + "'");
    }
  } else {
    try {
      v = ParseToml("v = " + value, dotted)["v"];
    } catch (const ConfigError&) {
      throw ConfigError(dotted + ": cannot parse '" + value + "'");
    }
  }
  SetJson(dotted, v);
}

void Config::SetJson(const std::string& dotted, const json& value) {
  auto parts = SplitDotted(dotted);
  json over = value;
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) over = json{{*it, over}};
  Overlay(tree_, over, "");
}

const json& Config::Get(const std::string& dotted) const {
  const json* node = &tree_;
  for (const auto& part : SplitDotted(dotted)) {
    if (!node->is_object() || !node->contains(part)) {
      throw ConfigError("unknown config key '" + dotted + "'");
    }
    node = &(*node)[part];
  }
  return *node;
}

std::string Config::GetString(const std::string& dotted) const {
  return Get(dotted).get<std::string>();
}
double Config::GetDouble(const std::string& dotted) const { return Get(dotted).get<double>(); }
long long Config::GetInt(const std::string& dotted) const { return Get(dotted).get<long long>(); }
bool Config::GetBool(const std::string& dotted) const { return Get(dotted).get<bool>(); }

std::filesystem::path Config::GetPath(const std::string& dotted) const {
  std::filesystem::path p = GetString(dotted);
  if (p.empty() || p.is_absolute()) return p;
  return base_dir_ / p;
}

void Config::Validate() const {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("invalid config: " + what);
  };
  double tau = GetDouble("bio.tau");
  need(tau >= 0.0 && tau <= 1.0, "bio.tau must lie in [0, 1]");
  need(GetInt("bio.window") >= 1, "bio.window must be >= 1");
  double prior = GetDouble("bio.prior");
  need(prior > 0.0 && prior < 1.0, "bio.prior must lie in (0, 1)");
  double am = GetDouble("bio.accuracy_mean");
  need(am > 0.5 && am < 1.0, "bio.accuracy_mean must lie in (0.5, 1)");
  need(GetDouble("bio.accuracy_strength") >= 0.0, "bio.accuracy_strength must be >= 0");
  need(GetInt("bio.epochs") >= 1, "bio.epochs must be >= 1");
  need(GetInt("ranking.shortlist_n") >= 1, "ranking.shortlist_n must be >= 1");
  need(GetInt("ranking.max_k") >= 1, "ranking.max_k must be >= 1");
  long long k = GetInt("ranking.default_k");
  need(k >= 1 && k <= GetInt("ranking.max_k"), "ranking.default_k must lie in [1, max_k]");
  double p = GetDouble("evaluation.rbo_p");
  need(p > 0.0 && p < 1.0, "evaluation.rbo_p must lie in (0, 1)");
  need(GetInt("evaluation.rbo_depth") >= 1, "evaluation.rbo_depth must be >= 1");
  for (const auto& v : Get("evaluation.ks")) {
    need(v.is_number_integer() && v.get<long long>() >= 1, "evaluation.ks must hold integers >= 1");
  }
  need(GetDouble("classifier.c") > 0.0, "classifier.c must be > 0");
  need(GetDouble("classifier.gamma") > 0.0, "classifier.gamma must be > 0");
  need(GetInt("classifier.degree") >= 1, "classifier.degree must be >= 1");
  double h = GetDouble("classifier.holdout");
  need(h > 0.0 && h < 1.0, "classifier.holdout must lie in (0, 1)");
  need(GetInt("providers.embedding_dim") >= 8, "providers.embedding_dim must be >= 8");
  need(GetInt("providers.batch") >= 1, "providers.batch must be >= 1");
  long long port = GetInt("service.port");
  need(port >= 0 && port <= 65535, "service.port must lie in [0, 65535]");
  need(GetInt("service.threads") >= 1, "service.threads must be >= 1");
  static const std::set<std::string> kSeg = {"builtin", "http"};
  static const std::set<std::string> kParse = {"fixture", "http"};
  static const std::set<std::string> kSrl = {"fixture", "http", "none"};
  static const std::set<std::string> kModel = {"builtin", "fixture", "http"};
  need(kSeg.count(GetString("providers.segmenter")), "providers.segmenter: builtin|http");
  need(kParse.count(GetString("providers.parse")), "providers.parse: fixture|http");
  need(kSrl.count(GetString("providers.srl")), "providers.srl: fixture|http|none");
  need(kModel.count(GetString("providers.embedding")), "providers.embedding: builtin|fixture|http");
  need(kModel.count(GetString("providers.nli")), "providers.nli: builtin|fixture|http");
}

}  // namespace barcode
