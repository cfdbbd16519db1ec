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

#ifndef BARCODE_BIO_FILTER_H_
#define BARCODE_BIO_FILTER_H_

// Query-independent bio-inspiration scoring: clausal (Strategy, Solver,
// Problem) candidates, labeling functions voting on them, a generative
// label model over the votes, and the tau filter.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "barcode/corpus.h"
#include "barcode/dep_pattern.h"
#include "barcode/parse_tree.h"
#include "barcode/patent_lexicon.h"
#include "json.hpp"

namespace barcode::bio {

struct ClausalCandidate {
  std::string candidate_id;  // "<sentence_id>:c<n>"
  std::string sentence_id;
  CharSpan strategy_span;
  CharSpan solver_span;  // empty when the pattern has no solver
  CharSpan problem_span;
  std::string pattern_name;

  friend bool operator==(const ClausalCandidate&, const ClausalCandidate&) = default;
};

nlohmann::ordered_json CandidateToJson(const ClausalCandidate& c);

// A pattern-file clausal pattern. Its nodes named "strategy", "problem"
// and optionally "solver" mark the clause heads of the three roles.
struct ClausalPattern {
  std::string name;
  DependencyPattern pattern;
};

// [{"name": "...", "pattern": [...]}, ...]
std::vector<ClausalPattern> LoadClausalPatterns(const std::filesystem::path& path);

// Built-in patterns (adverbial clause, relative clause, adjectival clause,
// gerund clausal subject) plus any `extra` patterns. Candidates are ordered
// by pattern then token position and numbered per sentence.
std::vector<ClausalCandidate> ExtractClausalCandidates(
    const corpus::SentenceRecord& sentence, const ParseTree& tree,
    const std::vector<ClausalPattern>& extra = {});

enum class Vote : std::int8_t { kNegative = -1, kAbstain = 0, kPositive = 1 };

std::string VoteName(Vote v);

struct LabelVote {
  std::string lf_name;
  Vote vote = Vote::kAbstain;
};

struct LfResources {
  lexicon::ProblemLexicon problems;
  std::size_t window = 5;
  std::set<std::string> aux_verbs;
  std::set<std::string> non_bio_verbs;

  // Reads lexicon/problems.tsv, lexicon/aux_verbs.txt and
  // lexicon/non_bio_verbs.txt under `dir`.
  static LfResources Load(const std::filesystem::path& dir, std::size_t window = 5);
};

// Every labeling function reads the whole sentence; all candidates of a
// sentence therefore share one vote row.
Vote LfAdaptation(const ParseTree& tree);
Vote LfKnownProblem(const ParseTree& tree, const LfResources& res);
Vote LfAuxiliaryVerb(const ParseTree& tree, const LfResources& res);
Vote LfNonBioVerb(const ParseTree& tree, const LfResources& res);
Vote LfUnlikelyEntity(const ParseTree& tree);

const std::vector<std::string>& LfNames();
std::vector<LabelVote> ApplyLfs(const ParseTree& tree, const LfResources& res);

struct LabelMatrix {
  std::vector<std::string> lf_names;
  std::vector<std::vector<Vote>> rows;  // one per candidate

  std::size_t n() const { return rows.size(); }
  std::size_t m() const { return lf_names.size(); }
};

// Scores every candidate row with P(bio-inspirational | votes).
class CandidateScorer {
 public:
  virtual ~CandidateScorer() = default;
  virtual double Posterior(const std::vector<Vote>& row) const = 0;
  std::vector<double> ScoreAll(const LabelMatrix& matrix) const;
};

struct LabelModelOptions {
  double lr = 1e-4;  // recorded only; EM has no step size
  int epochs = 3000;  // EM iteration cap
  std::uint64_t seed = 0;  // recorded; initialisation is deterministic
  double tolerance = 1e-9;
  // When false the class prior stays at `prior` (uniform class balance).
  bool learn_prior = false;
  double prior = 0.5;
  // Beta prior on each accuracy, as pseudo-counts centred on `accuracy_mean`.
  double accuracy_mean = 0.7;
  double accuracy_strength = 20.0;
};

// Naive-Bayes generative model: LFs are conditionally independent given the
// true label, each correct with its own probability when it votes, abstains
// independently of the label. Fit by MAP-EM with a Beta prior on the
// accuracies; accuracies are kept in [0.5, 1) so a vote never counts against
// its own label.
class LabelModel : public CandidateScorer {
 public:
  LabelModel() = default;
  LabelModel(std::vector<std::string> lf_names, std::vector<double> accuracies,
             double prior);

  static LabelModel Train(const LabelMatrix& matrix, const LabelModelOptions& options = {});

  double Posterior(const std::vector<Vote>& row) const override;

  const std::vector<std::string>& lf_names() const { return lf_names_; }
  const std::vector<double>& accuracies() const { return accuracies_; }
  double prior() const { return prior_; }
  const LabelModelOptions& options() const { return options_; }
  int iterations() const { return iterations_; }

  nlohmann::ordered_json ToJson() const;
  static LabelModel FromJson(const nlohmann::json& j);

 private:
  std::vector<std::string> lf_names_;
  std::vector<double> accuracies_;
  double prior_ = 0.5;
  LabelModelOptions options_;
  int iterations_ = 0;
};

// Fraction of non-abstain votes that are POSITIVE; 0.5 when all abstain.
class MajorityVote : public CandidateScorer {
 public:
  double Posterior(const std::vector<Vote>& row) const override;
};

struct BioInspirationScore {
  std::string sentence_id;
  double score = 0.0;
  std::string best_candidate_id;  // empty when the sentence has no candidate

  friend bool operator==(const BioInspirationScore&, const BioInspirationScore&) = default;
};

// Per-sentence max over candidate posteriors; 0 for sentences without
// candidates. `candidates` and `matrix.rows` are row-aligned.
std::vector<BioInspirationScore> ScoreCorpus(
    const CandidateScorer& scorer, const LabelMatrix& matrix,
    const std::vector<ClausalCandidate>& candidates,
    const std::vector<std::string>& sentence_ids);

// Sentence ids with score >= tau.
std::set<std::string> Filter(const std::vector<BioInspirationScore>& scores, double tau);

void WriteScores(const std::vector<BioInspirationScore>& scores,
                 const std::filesystem::path& path);
std::vector<BioInspirationScore> ReadScores(const std::filesystem::path& path);

struct BioRun {
  std::vector<ClausalCandidate> candidates;
  LabelMatrix matrix;
  LabelModel model;
  std::vector<BioInspirationScore> scores;
};

// Candidates, votes, trained model and scores for a parsed corpus.
// Sentences without a parse score 0.
BioRun RunBioFilter(const std::vector<corpus::SentenceRecord>& sentences,
                    const std::map<std::string, ParseTree>& parses,
                    const LfResources& resources,
                    const std::vector<ClausalPattern>& extra_patterns,
                    const LabelModelOptions& options);

}  // namespace barcode::bio

#endif  // BARCODE_BIO_FILTER_H_
