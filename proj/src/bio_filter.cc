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

#include "barcode/bio_filter.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <spdlog/spdlog.h>

namespace barcode::bio {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

json SpanJson(const CharSpan& s) {
  if (s.empty()) return nullptr;
  return json::array({s.start, s.end});
}

bool IsSubject(const std::string& dep) {
  return dep == "nsubj" || dep == "nsubjpass" || dep == "csubj" || dep == "csubjpass" ||
         dep == "expl";
}

bool IsClausalModifier(const std::string& dep) {
  return dep == "advcl" || dep == "relcl" || dep == "acl" || dep == "ccomp" ||
         dep == "conj" || dep == "cc" || dep == "parataxis";
}

bool IsEdgeNoise(const Token& t) {
  return t.pos == "PUNCT" || t.pos == "CCONJ";
}

// Character span of the contiguous run of `kept` tokens around `head`, with
// punctuation and conjunctions trimmed from both ends.
CharSpan RunSpan(const ParseTree& tree, const std::vector<bool>& kept, int head) {
  int lo = head, hi = head;
  while (lo > 0 && kept[lo - 1]) --lo;
  while (hi + 1 < static_cast<int>(tree.size()) && kept[hi + 1]) ++hi;
  while (lo < head && IsEdgeNoise(tree[lo])) ++lo;
  while (hi > head && IsEdgeNoise(tree[hi])) --hi;
  return {tree[lo].span.start, tree[hi].span.end};
}

void Drop(const ParseTree& tree, int node, std::vector<bool>& kept) {
  for (int t : tree.Subtree(node)) kept[t] = false;
}

CharSpan ProblemSpan(const ParseTree& tree, int problem, int strategy) {
  std::vector<bool> kept(tree.size(), false);
  for (int t : tree.Subtree(problem)) kept[t] = true;
  if (tree.Dominates(problem, strategy)) Drop(tree, strategy, kept);
  for (int c : tree.children(problem)) {
    const std::string& tag = tree[c].tag;
    if (tag == "WDT" || tag == "WP" || tag == "WP$") kept[c] = false;
  }
  kept[problem] = true;
  return RunSpan(tree, kept, problem);
}

CharSpan StrategySpan(const ParseTree& tree, int strategy, int problem) {
  std::vector<bool> kept(tree.size(), false);
  for (int t : tree.Subtree(strategy)) kept[t] = true;
  if (tree.Dominates(strategy, problem)) Drop(tree, problem, kept);
  for (int c : tree.children(strategy)) {
    const std::string& dep = tree[c].dep;
    if (IsSubject(dep) || dep == "aux" || dep == "auxpass" || dep == "mark" ||
        IsClausalModifier(dep)) {
      Drop(tree, c, kept);
    }
  }
  kept[strategy] = true;
  return RunSpan(tree, kept, strategy);
}

CharSpan SolverSpan(const ParseTree& tree, int strategy) {
  for (int c : tree.children(strategy)) {
    if (tree[c].dep == "nsubj" || tree[c].dep == "nsubjpass") {
      std::vector<bool> kept(tree.size(), false);
      for (int t : tree.Subtree(c)) kept[t] = true;
      return RunSpan(tree, kept, c);
    }
  }
  return {};
}

bool IsClauseHead(const ParseTree& tree, int i) {
  return tree.IsRoot(i) || tree[i].pos == "VERB" || tree[i].pos == "AUX";
}

struct RawCandidate {
  std::string pattern;
  int strategy;
  int problem;
  int solver;  // -1: subject of the strategy clause
  bool has_solver;
};

}  // namespace

ordered_json CandidateToJson(const ClausalCandidate& c) {
  ordered_json j;
  j["candidate_id"] = c.candidate_id;
  j["sentence_id"] = c.sentence_id;
  j["strategy_span"] = SpanJson(c.strategy_span);
  j["solver_span"] = SpanJson(c.solver_span);
  j["problem_span"] = SpanJson(c.problem_span);
  j["pattern_name"] = c.pattern_name;
  return j;
}

std::vector<ClausalPattern> LoadClausalPatterns(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(ReadFile(path));
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  if (!j.is_array()) throw ConfigError(path.string() + ": expected a JSON array");
  std::vector<ClausalPattern> out;
  int id = 0;
  for (const auto& entry : j) {
    if (!entry.is_object() || !entry.contains("name") || !entry.contains("pattern")) {
      throw ConfigError(path.string() + ": entries need 'name' and 'pattern'");
    }
    ClausalPattern p{entry["name"].get<std::string>(),
                     DependencyPattern::FromJson(++id, entry["pattern"])};
    if (p.pattern.IndexOf("strategy") < 0 || p.pattern.IndexOf("problem") < 0) {
      throw ConfigError("clausal pattern '" + p.name +
                        "' needs nodes named 'strategy' and 'problem'");
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<ClausalCandidate> ExtractClausalCandidates(
    const corpus::SentenceRecord& sentence, const ParseTree& tree,
    const std::vector<ClausalPattern>& extra) {
  std::vector<RawCandidate> raw;
  const int n = static_cast<int>(tree.size());
  for (int i = 0; i < n; ++i) {
    if (tree[i].dep == "advcl" && !tree.IsRoot(i)) {
      raw.push_back({"advcl_problem", tree[i].head, i, -1, true});
    }
  }
  for (int i = 0; i < n; ++i) {
    if (tree[i].dep != "relcl" || tree.IsRoot(i)) continue;
    int s = tree[i].head;
    while (!IsClauseHead(tree, s)) s = tree[s].head;
    raw.push_back({"relcl_problem", s, i, -1, true});
  }
  for (int i = 0; i < n; ++i) {
    if (tree[i].dep == "acl" && !tree.IsRoot(i) && i != tree.root() &&
        !tree.Dominates(i, tree.root())) {
      raw.push_back({"acl_problem_root_strategy", tree.root(), i, -1, true});
    }
  }
  for (int i = 0; i < n; ++i) {
    if ((tree[i].dep == "csubj" || tree[i].dep == "csubjpass") && tree[i].tag == "VBG") {
      raw.push_back({"gerund_csubj_strategy", i, tree[i].head, -1, false});
    }
  }
  for (const auto& p : extra) {
    int si = p.pattern.IndexOf("strategy");
    int pi = p.pattern.IndexOf("problem");
    int vi = p.pattern.IndexOf("solver");
    for (const auto& m : MatchPattern(p.pattern, tree)) {
      raw.push_back({p.name, m[si], m[pi], vi >= 0 ? m[vi] : -1, vi >= 0});
    }
  }

  std::vector<ClausalCandidate> out;
  for (const auto& r : raw) {
    if (r.strategy == r.problem) continue;
    ClausalCandidate c;
    c.sentence_id = sentence.sentence_id;
    c.pattern_name = r.pattern;
    c.problem_span = ProblemSpan(tree, r.problem, r.strategy);
    c.strategy_span = StrategySpan(tree, r.strategy, r.problem);
    if (r.has_solver) {
      if (r.solver >= 0) {
        std::vector<bool> kept(tree.size(), false);
        for (int t : tree.Subtree(r.solver)) kept[t] = true;
        c.solver_span = RunSpan(tree, kept, r.solver);
      } else {
        c.solver_span = SolverSpan(tree, r.strategy);
      }
    }
    c.candidate_id = sentence.sentence_id + ":c" + std::to_string(out.size());
    out.push_back(std::move(c));
  }
  return out;
}

std::string VoteName(Vote v) {
  switch (v) {
    case Vote::kNegative: return "NEGATIVE";
    case Vote::kAbstain: return "ABSTAIN";
    case Vote::kPositive: return "POSITIVE";
  }
  return "";
}

LfResources LfResources::Load(const std::filesystem::path& dir, std::size_t window) {
  LfResources r;
  r.problems = lexicon::ReadLexicon(dir / "problems.tsv");
  r.window = window;
  for (const auto& w : ReadLines(dir / "aux_verbs.txt")) r.aux_verbs.insert(ToLower(Trim(w)));
  for (const auto& w : ReadLines(dir / "non_bio_verbs.txt")) {
    r.non_bio_verbs.insert(ToLower(Trim(w)));
  }
  return r;
}

Vote LfAdaptation(const ParseTree& tree) {
  static const std::set<std::string> kForms = {"adaptation", "adapt",    "adapted",
                                               "adaptive",   "adapts",   "adapting",
                                               "adaptations"};
  for (const auto& t : tree.tokens()) {
    if (kForms.count(ToLower(t.lemma)) || kForms.count(ToLower(t.text))) {
      return Vote::kPositive;
    }
  }
  return Vote::kAbstain;
}

Vote LfKnownProblem(const ParseTree& tree, const LfResources& res) {
  std::vector<std::string> lemmas;
  lemmas.reserve(tree.size());
  for (const auto& t : tree.tokens()) lemmas.push_back(ToLower(t.lemma));
  return lexicon::ContainsKnownProblem(lemmas, res.problems, res.window) ? Vote::kPositive
                                                                         : Vote::kAbstain;
}

Vote LfAuxiliaryVerb(const ParseTree& tree, const LfResources& res) {
  for (const auto& t : tree.tokens()) {
    if (res.aux_verbs.count(ToLower(t.lemma))) return Vote::kPositive;
  }
  return Vote::kAbstain;
}

Vote LfNonBioVerb(const ParseTree& tree, const LfResources& res) {
  if (tree.size() == 0) return Vote::kAbstain;
  const Token& root = tree[tree.root()];
  if (root.pos != "VERB") return Vote::kAbstain;
  return res.non_bio_verbs.count(ToLower(root.lemma)) ? Vote::kNegative : Vote::kAbstain;
}

Vote LfUnlikelyEntity(const ParseTree& tree) {
  for (const auto& t : tree.tokens()) {
    if (t.ent == "PERSON" || t.ent == "ORG" || t.ent == "DATE") return Vote::kNegative;
    if (t.tag == "PRP") return Vote::kNegative;
    if (t.text.find_first_of("&@$") != std::string::npos) return Vote::kNegative;
  }
  return Vote::kAbstain;
}

const std::vector<std::string>& LfNames() {
  static const std::vector<std::string> kNames = {
      "adaptation", "known_problem", "auxiliary_verb", "non_bio_verb", "unlikely_entity"};
  return kNames;
}

std::vector<LabelVote> ApplyLfs(const ParseTree& tree, const LfResources& res) {
  return {{"adaptation", LfAdaptation(tree)},
          {"known_problem", LfKnownProblem(tree, res)},
          {"auxiliary_verb", LfAuxiliaryVerb(tree, res)},
          {"non_bio_verb", LfNonBioVerb(tree, res)},
          {"unlikely_entity", LfUnlikelyEntity(tree)}};
}

std::vector<double> CandidateScorer::ScoreAll(const LabelMatrix& matrix) const {
  std::vector<double> out;
  out.reserve(matrix.n());
  for (const auto& row : matrix.rows) out.push_back(Posterior(row));
  return out;
}

namespace {

constexpr double kMinAccuracy = 0.5;
constexpr double kMaxAccuracy = 1.0 - 1e-4;

double Logit(double p) { return std::log(p) - std::log1p(-p); }

double Sigmoid(double x) {
  return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

}  // namespace

LabelModel::LabelModel(std::vector<std::string> lf_names, std::vector<double> accuracies,
                       double prior)
    : lf_names_(std::move(lf_names)), accuracies_(std::move(accuracies)), prior_(prior) {
  if (lf_names_.size() != accuracies_.size()) {
    throw ValidationError("label model: one accuracy per labeling function");
  }
  for (double a : accuracies_) {
    if (!(a > 0 && a < 1)) throw ValidationError("label model: accuracy outside (0,1)");
  }
  if (!(prior_ > 0 && prior_ < 1)) throw ValidationError("label model: prior outside (0,1)");
}

double LabelModel::Posterior(const std::vector<Vote>& row) const {
  if (row.size() != accuracies_.size()) {
    throw ValidationError("label model: vote row has " + std::to_string(row.size()) +
                          " columns, model has " + std::to_string(accuracies_.size()));
  }
  double z = Logit(prior_);
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] == Vote::kAbstain) continue;
    double w = Logit(accuracies_[j]);
    z += row[j] == Vote::kPositive ? w : -w;
  }
  return Sigmoid(z);
}

LabelModel LabelModel::Train(const LabelMatrix& matrix, const LabelModelOptions& options) {
  const std::size_t n = matrix.n(), m = matrix.m();
  if (m < 2) throw ValidationError("label model needs at least 2 labeling functions");
  std::vector<std::size_t> coverage(m, 0);
  for (const auto& row : matrix.rows) {
    if (row.size() != m) throw ValidationError("label matrix row width mismatch");
    for (std::size_t j = 0; j < m; ++j) coverage[j] += row[j] != Vote::kAbstain;
  }
  if (std::all_of(coverage.begin(), coverage.end(), [](std::size_t c) { return c == 0; })) {
    throw ValidationError("no signal: every labeling function abstains on every candidate");
  }

  // Every LF starts at the prior mean, so LFs that the data cannot tell apart
  // keep equal accuracies.
  LabelModel model(matrix.lf_names, std::vector<double>(m, options.accuracy_mean),
                   options.prior);
  model.options_ = options;

  std::vector<double> q(n);
  for (int it = 0; it < options.epochs; ++it) {
    for (std::size_t i = 0; i < n; ++i) q[i] = model.Posterior(matrix.rows[i]);
    double delta = 0;
    for (std::size_t j = 0; j < m; ++j) {
      double correct = 0;
      for (std::size_t i = 0; i < n; ++i) {
        Vote v = matrix.rows[i][j];
        if (v == Vote::kPositive) correct += q[i];
        if (v == Vote::kNegative) correct += 1 - q[i];
      }
      double a = std::clamp((correct + options.accuracy_mean * options.accuracy_strength) /
                                (static_cast<double>(coverage[j]) + options.accuracy_strength),
                            kMinAccuracy, kMaxAccuracy);
      delta = std::max(delta, std::abs(a - model.accuracies_[j]));
      model.accuracies_[j] = a;
    }
    if (options.learn_prior) {
      double sum_q = 0;
      for (double x : q) sum_q += x;
      double prior =
          std::clamp((sum_q + 1) / (static_cast<double>(n) + 2), 1e-4, 1 - 1e-4);
      delta = std::max(delta, std::abs(prior - model.prior_));
      model.prior_ = prior;
    }
    model.iterations_ = it + 1;
    if (delta < options.tolerance) break;
  }
  return model;
}

ordered_json LabelModel::ToJson() const {
  ordered_json j;
  j["kind"] = "naive_bayes_em";
  j["lf_names"] = lf_names_;
  j["accuracies"] = accuracies_;
  j["prior"] = prior_;
  j["lr"] = options_.lr;
  j["epochs"] = options_.epochs;
  j["seed"] = options_.seed;
  j["learn_prior"] = options_.learn_prior;
  j["accuracy_mean"] = options_.accuracy_mean;
  j["accuracy_strength"] = options_.accuracy_strength;
  j["iterations"] = iterations_;
  return j;
}

LabelModel LabelModel::FromJson(const json& j) {
  LabelModel m(j.at("lf_names").get<std::vector<std::string>>(),
               j.at("accuracies").get<std::vector<double>>(), j.at("prior").get<double>());
  m.options_.lr = j.value("lr", 1e-4);
  m.options_.epochs = j.value("epochs", 3000);
  m.options_.seed = j.value("seed", std::uint64_t{0});
  m.options_.learn_prior = j.value("learn_prior", false);
  m.options_.prior = m.prior_;
  m.options_.accuracy_mean = j.value("accuracy_mean", 0.7);
  m.options_.accuracy_strength = j.value("accuracy_strength", 20.0);
  m.iterations_ = j.value("iterations", 0);
  return m;
}

double MajorityVote::Posterior(const std::vector<Vote>& row) const {
  int pos = 0, neg = 0;
  for (Vote v : row) {
    pos += v == Vote::kPositive;
    neg += v == Vote::kNegative;
  }
  return pos + neg == 0 ? 0.5 : static_cast<double>(pos) / (pos + neg);
}

std::vector<BioInspirationScore> ScoreCorpus(
    const CandidateScorer& scorer, const LabelMatrix& matrix,
    const std::vector<ClausalCandidate>& candidates,
    const std::vector<std::string>& sentence_ids) {
  if (candidates.size() != matrix.n()) {
    throw ValidationError("candidates and label matrix rows are not aligned");
  }
  std::map<std::string, BioInspirationScore> best;
  for (const auto& id : sentence_ids) best[id] = {id, 0.0, ""};
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    double p = scorer.Posterior(matrix.rows[i]);
    auto it = best.find(candidates[i].sentence_id);
    if (it == best.end()) continue;
    if (it->second.best_candidate_id.empty() || p > it->second.score) {
      it->second.score = p;
      it->second.best_candidate_id = candidates[i].candidate_id;
    }
  }
  std::vector<BioInspirationScore> out;
  out.reserve(sentence_ids.size());
  for (const auto& id : sentence_ids) out.push_back(best[id]);
  return out;
}

std::set<std::string> Filter(const std::vector<BioInspirationScore>& scores, double tau) {
  if (std::isnan(tau)) throw ValidationError("tau is NaN");
  std::set<std::string> out;
  for (const auto& s : scores) {
    if (s.score >= tau) out.insert(s.sentence_id);
  }
  return out;
}

void WriteScores(const std::vector<BioInspirationScore>& scores,
                 const std::filesystem::path& path) {
  std::ostringstream out;
  for (const auto& s : scores) {
    ordered_json j;
    j["sentence_id"] = s.sentence_id;
    j["score"] = s.score;
    j["best_candidate_id"] = s.best_candidate_id;
    out << j.dump() << '\n';
  }
  WriteFile(path, out.str());
}

std::vector<BioInspirationScore> ReadScores(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw StoreError("missing " + path.string());
  std::vector<BioInspirationScore> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    out.push_back({j.at("sentence_id").get<std::string>(), j.at("score").get<double>(),
                   j.value("best_candidate_id", "")});
  }
  return out;
}

BioRun RunBioFilter(const std::vector<corpus::SentenceRecord>& sentences,
                    const std::map<std::string, ParseTree>& parses,
                    const LfResources& resources,
                    const std::vector<ClausalPattern>& extra_patterns,
                    const LabelModelOptions& options) {
  BioRun run;
  run.matrix.lf_names = LfNames();
  std::vector<std::string> ids;
  ids.reserve(sentences.size());
  for (const auto& s : sentences) {
    ids.push_back(s.sentence_id);
    auto it = parses.find(s.sentence_id);
    if (it == parses.end()) continue;
    auto cands = ExtractClausalCandidates(s, it->second, extra_patterns);
    if (cands.empty()) continue;
    std::vector<Vote> row;
    for (const auto& v : ApplyLfs(it->second, resources)) row.push_back(v.vote);
    for (auto& c : cands) {
      run.candidates.push_back(std::move(c));
      run.matrix.rows.push_back(row);
    }
  }
  try {
    run.model = LabelModel::Train(run.matrix, options);
  } catch (const ValidationError& e) {
    spdlog::warn("bio filter: {}; every candidate gets the neutral prior", e.what());
    run.model = LabelModel(run.matrix.lf_names,
                           std::vector<double>(run.matrix.m(), kMinAccuracy), 0.5);
  }
  run.scores = ScoreCorpus(run.model, run.matrix, run.candidates, ids);
  return run;
}

}  // namespace barcode::bio
