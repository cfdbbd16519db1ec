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

#ifndef BARCODE_PARSE_TREE_H_
#define BARCODE_PARSE_TREE_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "barcode/common.h"
#include "json.hpp"

namespace barcode {

struct Token {
  std::string text;
  std::string lemma;
  std::string pos;  // coarse Universal POS
  std::string tag;  // fine-grained Penn tag, may be empty
  std::string dep;  // dependency label (ClearNLP / UD style)
  int head = 0;     // index into ParseTree::tokens; root points to itself
  std::string ent;  // entity type (PERSON, ORG, DATE, ...) or empty
  CharSpan span;    // offsets into the sentence text
};

// A dependency tree over one sentence. Construction validates the tree:
// head indices in range, exactly one root (self-loop), no cycles.
class ParseTree {
 public:
  ParseTree() = default;
  explicit ParseTree(std::vector<Token> tokens);

  const std::vector<Token>& tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }
  const Token& operator[](std::size_t i) const { return tokens_[i]; }

  int root() const { return root_; }
  bool IsRoot(int i) const { return i == root_; }
  const std::vector<int>& children(int i) const { return children_[i]; }

  // All tokens dominated by i (including i), ascending.
  std::vector<int> Subtree(int i) const;
  bool Dominates(int ancestor, int node) const;

  // Fill Token::span by aligning token texts left to right inside
  // `sentence`. Throws ValidationError if a token cannot be found.
  void AlignTo(std::string_view sentence);

  nlohmann::json ToJson() const;
  static ParseTree FromJson(const nlohmann::json& j);

 private:
  std::vector<Token> tokens_;
  std::vector<std::vector<int>> children_;
  int root_ = -1;
};

}  // namespace barcode

#endif  // BARCODE_PARSE_TREE_H_
