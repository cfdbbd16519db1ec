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

#ifndef BARCODE_DEP_PATTERN_H_
#define BARCODE_DEP_PATTERN_H_

// Dependency-tree pattern matching in the DependencyMatcher style: a
// pattern is a list of nodes, the first one the anchor, every later node
// attached to an earlier one through a relation operator.
//
//   A > B   B is an immediate dependent of A
//   A < B   A is an immediate dependent of B
//   A . B   A immediately precedes B
//
// A match assigns distinct tokens to the pattern nodes.

#include <filesystem>
#include <string>
#include <vector>

#include "barcode/parse_tree.h"
#include "json.hpp"

namespace barcode {

enum class TokenAttr { kPos, kTag, kDep, kLemma, kOrth, kLower, kEntType };

enum class RelOp { kHeadOf, kDependentOf, kPrecedes };

struct AttrConstraint {
  TokenAttr attr;
  std::vector<std::string> values;  // sorted
  bool negate = false;              // NOT_IN

  bool Accepts(const Token& t) const;
};

struct PatternNode {
  std::string name;                     // RIGHT_ID
  std::vector<AttrConstraint> attrs;    // RIGHT_ATTRS
  int left = -1;                        // index of LEFT_ID node; -1 for anchor
  RelOp op = RelOp::kHeadOf;            // REL_OP, unused for the anchor

  bool Accepts(const Token& t) const;
};

struct DependencyPattern {
  int pattern_id = 0;
  std::string label;
  std::vector<PatternNode> nodes;

  int IndexOf(const std::string& name) const;

  // Parses the LEFT_ID / REL_OP / RIGHT_ID / RIGHT_ATTRS node list.
  // Dangling ids, duplicate ids, unknown operators or attributes are
  // ConfigErrors.
  static DependencyPattern FromJson(int pattern_id, const nlohmann::json& nodes,
                                    std::string label = {});
  nlohmann::json ToJson() const;
};

// A match: token index per pattern node.
using PatternMatch = std::vector<int>;

// True iff `m` satisfies every node constraint and relation of `p` on
// `tree` and assigns distinct tokens.
bool SatisfiesPattern(const DependencyPattern& p, const ParseTree& tree,
                      const PatternMatch& m);

// All matches, sorted lexicographically. Candidates for each node are
// generated from the relation to its already-bound left node.
std::vector<PatternMatch> MatchPattern(const DependencyPattern& p,
                                       const ParseTree& tree);

// File of the form [{"pattern_id": n, "label": "...", "pattern": [...]}, ...].
std::vector<DependencyPattern> LoadPatternFile(const std::filesystem::path& path);
std::vector<DependencyPattern> PatternsFromJson(const nlohmann::json& j);

}  // namespace barcode

#endif  // BARCODE_DEP_PATTERN_H_
