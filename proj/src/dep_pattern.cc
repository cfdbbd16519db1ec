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

#include "barcode/dep_pattern.h"

#include <algorithm>
#include <map>

namespace barcode {

using nlohmann::json;

namespace {

const std::map<std::string, TokenAttr>& AttrNames() {
  static const std::map<std::string, TokenAttr> kNames = {
      {"POS", TokenAttr::kPos},     {"TAG", TokenAttr::kTag},
      {"DEP", TokenAttr::kDep},     {"LEMMA", TokenAttr::kLemma},
      {"ORTH", TokenAttr::kOrth},   {"TEXT", TokenAttr::kOrth},
      {"LOWER", TokenAttr::kLower}, {"ENT_TYPE", TokenAttr::kEntType}};
  return kNames;
}

std::string AttrName(TokenAttr a) {
  switch (a) {
    case TokenAttr::kPos: return "POS";
    case TokenAttr::kTag: return "TAG";
    case TokenAttr::kDep: return "DEP";
    case TokenAttr::kLemma: return "LEMMA";
    case TokenAttr::kOrth: return "ORTH";
    case TokenAttr::kLower: return "LOWER";
    case TokenAttr::kEntType: return "ENT_TYPE";
  }
  return "";
}

std::string OpString(RelOp op) {
  switch (op) {
    case RelOp::kHeadOf: return ">";
    case RelOp::kDependentOf: return "<";
    case RelOp::kPrecedes: return ".";
  }
  return "";
}

std::string AttrValue(const Token& t, TokenAttr a) {
  switch (a) {
    case TokenAttr::kPos: return t.pos;
    case TokenAttr::kTag: return t.tag;
    case TokenAttr::kDep: return t.dep;
    case TokenAttr::kLemma: return t.lemma;
    case TokenAttr::kOrth: return t.text;
    case TokenAttr::kLower: return ToLower(t.text);
    case TokenAttr::kEntType: return t.ent;
  }
  return "";
}

AttrConstraint ParseConstraint(const std::string& key, const json& value,
                               const std::string& where) {
  auto it = AttrNames().find(key);
  if (it == AttrNames().end()) {
    throw ConfigError(where + ": unknown token attribute '" + key + "'");
  }
  AttrConstraint c{it->second, {}, false};
  if (value.is_string()) {
    c.values.push_back(value.get<std::string>());
  } else if (value.is_object() && value.size() == 1 &&
             (value.contains("IN") || value.contains("NOT_IN"))) {
    c.negate = value.contains("NOT_IN");
    const json& list = c.negate ? value["NOT_IN"] : value["IN"];
    if (!list.is_array()) {
      throw ConfigError(where + ": IN/NOT_IN for '" + key + "' must be a list");
    }
    for (const auto& v : list) {
      if (!v.is_string()) {
        throw ConfigError(where + ": non-string value in '" + key + "'");
      }
      c.values.push_back(v.get<std::string>());
    }
  } else {
    throw ConfigError(where + ": attribute '" + key +
                      "' must be a string or {\"IN\"|\"NOT_IN\": [...]}");
  }
  std::sort(c.values.begin(), c.values.end());
  return c;
}

}  // namespace

bool AttrConstraint::Accepts(const Token& t) const {
  bool in = std::binary_search(values.begin(), values.end(), AttrValue(t, attr));
  return negate ? !in : in;
}

bool PatternNode::Accepts(const Token& t) const {
  return std::all_of(attrs.begin(), attrs.end(),
                     [&](const AttrConstraint& c) { return c.Accepts(t); });
}

int DependencyPattern::IndexOf(const std::string& node_name) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].name == node_name) return static_cast<int>(i);
  }
  return -1;
}

DependencyPattern DependencyPattern::FromJson(int pattern_id, const json& j,
                                              std::string label) {
  const std::string where = "pattern " + std::to_string(pattern_id);
  if (!j.is_array() || j.empty()) {
    throw ConfigError(where + ": node list must be a non-empty array");
  }
  DependencyPattern p;
  p.pattern_id = pattern_id;
  p.label = std::move(label);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& e = j[i];
    if (!e.is_object() || !e.contains("RIGHT_ID") || !e["RIGHT_ID"].is_string()) {
      throw ConfigError(where + ": node " + std::to_string(i) +
                        " lacks a string RIGHT_ID");
    }
    PatternNode node;
    node.name = e["RIGHT_ID"].get<std::string>();
    if (p.IndexOf(node.name) != -1) {
      throw ConfigError(where + ": duplicate RIGHT_ID '" + node.name + "'");
    }
    for (const auto& [key, _] : e.items()) {
      if (key != "RIGHT_ID" && key != "RIGHT_ATTRS" && key != "LEFT_ID" &&
          key != "REL_OP") {
        throw ConfigError(where + ": unknown key '" + key + "'");
      }
    }
    if (e.contains("RIGHT_ATTRS")) {
      if (!e["RIGHT_ATTRS"].is_object()) {
        throw ConfigError(where + ": RIGHT_ATTRS must be an object");
      }
      for (const auto& [key, value] : e["RIGHT_ATTRS"].items()) {
        node.attrs.push_back(ParseConstraint(key, value, where));
      }
    }
    if (i == 0) {
      if (e.contains("LEFT_ID") || e.contains("REL_OP")) {
        throw ConfigError(where + ": anchor node must not have LEFT_ID/REL_OP");
      }
    } else {
      if (!e.contains("LEFT_ID") || !e.contains("REL_OP")) {
        throw ConfigError(where + ": node '" + node.name +
                          "' needs LEFT_ID and REL_OP");
      }
      node.left = p.IndexOf(e["LEFT_ID"].get<std::string>());
      if (node.left == -1) {
        throw ConfigError(where + ": LEFT_ID '" +
                          e["LEFT_ID"].get<std::string>() +
                          "' does not name an earlier node");
      }
      std::string op = e["REL_OP"].get<std::string>();
      if (op == ">") {
        node.op = RelOp::kHeadOf;
      } else if (op == "<") {
        node.op = RelOp::kDependentOf;
      } else if (op == ".") {
        node.op = RelOp::kPrecedes;
      } else {
        throw ConfigError(where + ": unsupported REL_OP '" + op + "'");
      }
    }
    p.nodes.push_back(std::move(node));
  }
  return p;
}

json DependencyPattern::ToJson() const {
  json arr = json::array();
  for (const auto& n : nodes) {
    json e;
    e["RIGHT_ID"] = n.name;
    json attrs = json::object();
    for (const auto& c : n.attrs) {
      if (!c.negate && c.values.size() == 1) {
        attrs[AttrName(c.attr)] = c.values.front();
      } else {
        attrs[AttrName(c.attr)] = json{{c.negate ? "NOT_IN" : "IN", c.values}};
      }
    }
    e["RIGHT_ATTRS"] = attrs;
    if (n.left >= 0) {
      e["LEFT_ID"] = nodes[n.left].name;
      e["REL_OP"] = OpString(n.op);
    }
    arr.push_back(std::move(e));
  }
  return json{{"pattern_id", pattern_id}, {"label", label}, {"pattern", arr}};
}

namespace {

bool RelationHolds(const ParseTree& tree, RelOp op, int left, int right) {
  switch (op) {
    case RelOp::kHeadOf:
      return right != left && tree[right].head == left;
    case RelOp::kDependentOf:
      return right != left && tree[left].head == right;
    case RelOp::kPrecedes:
      return right == left + 1;
  }
  return false;
}

void Extend(const DependencyPattern& p, const ParseTree& tree,
            PatternMatch& partial, std::vector<PatternMatch>& out) {
  const std::size_t k = partial.size();
  if (k == p.nodes.size()) {
    out.push_back(partial);
    return;
  }
  const PatternNode& node = p.nodes[k];
  const int left = partial[node.left];
  auto try_token = [&](int t) {
    if (t < 0 || t >= static_cast<int>(tree.size())) return;
    if (!node.Accepts(tree[t])) return;
    if (std::find(partial.begin(), partial.end(), t) != partial.end()) return;
    partial.push_back(t);
    Extend(p, tree, partial, out);
    partial.pop_back();
  };
  switch (node.op) {
    case RelOp::kHeadOf:
      for (int c : tree.children(left)) try_token(c);
      break;
    case RelOp::kDependentOf:
      if (!tree.IsRoot(left)) try_token(tree[left].head);
      break;
    case RelOp::kPrecedes:
      try_token(left + 1);
      break;
  }
}

}  // namespace

bool SatisfiesPattern(const DependencyPattern& p, const ParseTree& tree,
                      const PatternMatch& m) {
  if (m.size() != p.nodes.size()) return false;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] < 0 || m[i] >= static_cast<int>(tree.size())) return false;
    for (std::size_t j = 0; j < i; ++j) {
      if (m[i] == m[j]) return false;
    }
    const PatternNode& node = p.nodes[i];
    if (!node.Accepts(tree[m[i]])) return false;
    if (node.left >= 0 && !RelationHolds(tree, node.op, m[node.left], m[i])) {
      return false;
    }
  }
  return true;
}

std::vector<PatternMatch> MatchPattern(const DependencyPattern& p,
                                       const ParseTree& tree) {
  std::vector<PatternMatch> out;
  PatternMatch partial;
  partial.reserve(p.nodes.size());
  for (int t = 0; t < static_cast<int>(tree.size()); ++t) {
    if (!p.nodes[0].Accepts(tree[t])) continue;
    partial.push_back(t);
    Extend(p, tree, partial, out);
    partial.pop_back();
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<DependencyPattern> PatternsFromJson(const json& j) {
  if (!j.is_array()) throw ConfigError("pattern file must hold a JSON array");
  std::vector<DependencyPattern> out;
  for (const auto& entry : j) {
    if (!entry.is_object() || !entry.contains("pattern_id") ||
        !entry.contains("pattern")) {
      throw ConfigError("pattern entries need 'pattern_id' and 'pattern'");
    }
    out.push_back(DependencyPattern::FromJson(entry["pattern_id"].get<int>(),
                                              entry["pattern"],
                                              entry.value("label", "")));
  }
  return out;
}

std::vector<DependencyPattern> LoadPatternFile(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(ReadFile(path));
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return PatternsFromJson(j);
}

}  // namespace barcode
