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

#ifndef BARCODE_EVALUATION_H_
#define BARCODE_EVALUATION_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "barcode/common.h"
#include "json.hpp"

namespace barcode::eval {

// Relevant items in the first min(k, size) positions, divided by k.
double PrecisionAtK(const std::vector<bool>& ranked, int k);

// Binary-relevance NDCG@k with gain 1/log2(rank+1). The ideal ranking puts
// min(k, total_relevant) relevant items first; 0 when total_relevant is 0.
double NdcgAtK(const std::vector<bool>& ranked, int k, std::size_t total_relevant);
// Same, with the relevant count taken from `ranked` itself.
double NdcgAtK(const std::vector<bool>& ranked, int k);

// Extrapolated rank-biased overlap of the first `depth` items of each list
// (Webber, Moffat and Zobel 2010), uneven lengths included. Two empty lists
// score 1, one empty list scores 0.
double Rbo(const std::vector<std::string>& a, const std::vector<std::string>& b, double p,
           std::size_t depth);

// Items shared by the first `depth` entries of both lists.
std::size_t SharedItems(const std::vector<std::string>& a, const std::vector<std::string>& b,
                        std::size_t depth);

struct MannWhitney {
  double u = 0.0;  // U of sample a: pairs with a > b, ties count one half
  double p_value = 1.0;
  bool exact = false;
};

// Two-sided test. Exact permutation distribution (ties included) when
// n_a * n_b <= 400, else the normal approximation with tie-corrected
// variance and continuity correction.
MannWhitney MannWhitneyU(const std::vector<double>& a, const std::vector<double>& b);

// Items x raters grid of category labels.
using AnnotationMatrix = std::vector<std::vector<std::string>>;
double FleissKappa(const AnnotationMatrix& m);

// --- runs and judgments -----------------------------------------------------

struct Judgment {
  bool challenge = false;
  bool strategy = false;
};

enum class Aspect { kChallenge, kStrategy };
std::string AspectName(Aspect a);

// query_id -> sentence_id -> judgment.
using Qrels = std::map<std::string, std::map<std::string, Judgment>>;
// query_id -> ranked sentence ids.
using RunFile = std::map<std::string, std::vector<std::string>>;

// TSV query_id, sentence_id, challenge(0/1), strategy(0/1).
Qrels ReadQrels(const std::filesystem::path& path);
void WriteQrels(const Qrels& q, const std::filesystem::path& path);
// TSV query_id, rank, sentence_id, score. Rows may come in any order; ranks
// order each query's list.
RunFile ReadRun(const std::filesystem::path& path);
void WriteRun(const RunFile& run, const std::filesystem::path& path,
              const std::map<std::string, std::vector<double>>* scores = nullptr);

// Relevance flags of a query's run under one aspect; unjudged items count as
// not relevant.
std::vector<bool> RelevanceVector(const std::vector<std::string>& ranked,
                                  const std::map<std::string, Judgment>& judged, Aspect aspect);
std::size_t JudgedRelevant(const std::map<std::string, Judgment>& judged, Aspect aspect);

struct MetricRow {
  Aspect aspect = Aspect::kStrategy;
  int k = 0;
  double precision = 0.0;
  double ndcg = 0.0;
};

struct EvalReport {
  std::string run_name;
  std::size_t n_queries = 0;
  std::vector<std::string> unjudged;  // run queries absent from the qrels
  std::vector<MetricRow> rows;        // challenge then strategy, ascending k
  // Per-query values for significance tests: (aspect, k) -> query -> P@k.
  std::map<std::pair<Aspect, int>, std::map<std::string, double>> per_query_precision;
};

EvalReport EvaluateRun(const RunFile& run, const Qrels& qrels, const std::vector<int>& ks,
                       std::string run_name = "run");

nlohmann::ordered_json ReportToJson(const EvalReport& r);
// Aligned text table, one line per (aspect, k).
std::string ReportToTable(const std::vector<EvalReport>& reports);

// Significance of per-query precision differences between two reports.
MannWhitney ComparePrecision(const EvalReport& a, const EvalReport& b, Aspect aspect, int k);

// --- query sets and robustness --------------------------------------------

struct QuerySpec {
  std::string query_id;
  std::string text;
  std::string paraphrase_of;  // query_id of the original, empty for originals
};

// TSV query_id, text[, paraphrase_of].
std::vector<QuerySpec> ReadQueries(const std::filesystem::path& path);

struct PairOverlap {
  std::string original_id;
  std::string paraphrase_id;
  double rbo = 0.0;
  std::size_t shared = 0;
};

struct RobustnessReport {
  std::vector<PairOverlap> pairs;
  double mean_rbo = 0.0;
  double mean_shared = 0.0;
  double p = 0.9;
  std::size_t depth = 15;
};

RobustnessReport EvaluateRobustness(const std::vector<QuerySpec>& queries, const RunFile& run,
                                    double p = 0.9, std::size_t depth = 15);
// Per-query overlap between two run files over the union of their query
// ids; a query missing from one run counts as an empty list.
RobustnessReport CompareRuns(const RunFile& a, const RunFile& b, double p = 0.9,
                             std::size_t depth = 15);
nlohmann::ordered_json RobustnessToJson(const RobustnessReport& r);

}  // namespace barcode::eval

#endif  // BARCODE_EVALUATION_H_
