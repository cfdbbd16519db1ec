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

#include "barcode/parse_tree.h"

#include <algorithm>

namespace barcode {

ParseTree::ParseTree(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
  const int n = static_cast<int>(tokens_.size());
  children_.assign(n, {});
  for (int i = 0; i < n; ++i) {
    int h = tokens_[i].head;
    if (h < 0 || h >= n) {
      throw ValidationError("token " + std::to_string(i) + " head " +
                            std::to_string(h) + " out of range");
    }
    if (h == i) {
      if (root_ != -1) {
        throw ValidationError("parse tree has more than one root");
      }
      root_ = i;
    } else {
      children_[h].push_back(i);
    }
  }
  if (n > 0 && root_ == -1) throw ValidationError("parse tree has no root");
  // Every token must reach the root without revisiting a node.
  for (int i = 0; i < n; ++i) {
    int cur = i;
    for (int steps = 0; cur != root_; ++steps) {
      if (steps > n) throw ValidationError("parse tree contains a cycle");
      cur = tokens_[cur].head;
    }
  }
}

std::vector<int> ParseTree::Subtree(int i) const {
  std::vector<int> out;
  std::vector<int> stack = {i};
  while (!stack.empty()) {
    int cur = stack.back();
    stack.pop_back();
    out.push_back(cur);
    for (int c : children_[cur]) stack.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool ParseTree::Dominates(int ancestor, int node) const {
  int cur = node;
  while (true) {
    if (cur == ancestor) return true;
    if (cur == root_) return false;
    cur = tokens_[cur].head;
  }
}

void ParseTree::AlignTo(std::string_view sentence) {
  std::size_t pos = 0;
  for (auto& t : tokens_) {
    std::size_t found = sentence.find(t.text, pos);
    if (found == std::string_view::npos) {
      throw ValidationError("token '" + t.text + "' not found in sentence");
    }
    t.span = {found, found + t.text.size()};
    pos = found + t.text.size();
  }
}

nlohmann::json ParseTree::ToJson() const {
  nlohmann::json toks = nlohmann::json::array();
  for (const auto& t : tokens_) {
    nlohmann::json jt;
    jt["text"] = t.text;
    jt["lemma"] = t.lemma;
    jt["pos"] = t.pos;
    if (!t.tag.empty()) jt["tag"] = t.tag;
    jt["dep"] = t.dep;
    jt["head"] = t.head;
    if (!t.ent.empty()) jt["ent"] = t.ent;
    toks.push_back(std::move(jt));
  }
  return nlohmann::json{{"tokens", std::move(toks)}};
}

ParseTree ParseTree::FromJson(const nlohmann::json& j) {
  if (!j.contains("tokens") || !j["tokens"].is_array()) {
    throw ValidationError("parse tree JSON needs a 'tokens' array");
  }
  std::vector<Token> toks;
  for (const auto& jt : j["tokens"]) {
    Token t;
    t.text = jt.at("text").get<std::string>();
    t.lemma = jt.value("lemma", ToLower(t.text));
    t.pos = jt.at("pos").get<std::string>();
    t.tag = jt.value("tag", "");
    t.dep = jt.at("dep").get<std::string>();
    t.head = jt.at("head").get<int>();
    t.ent = jt.value("ent", "");
    toks.push_back(std::move(t));
  }
  return ParseTree(std::move(toks));
}

}  // namespace barcode
