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

#include "barcode/evaluation.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace barcode::eval {

using nlohmann::ordered_json;

namespace {

void CheckK(int k) {
  if (k < 1) throw ValidationError("k must be >= 1, got " + std::to_string(k));
}

double Discount(std::size_t rank) { return 1.0 / std::log2(static_cast<double>(rank) + 1.0); }

void CheckUnique(const std::vector<std::string>& v, const char* what) {
  std::unordered_set<std::string> seen;
  for (const auto& s : v) {
    if (!seen.insert(s).second) {
      throw ValidationError(std::string(what) + " contains duplicate item '" + s + "'");
    }
  }
}

}  // namespace

double PrecisionAtK(const std::vector<bool>& ranked, int k) {
  CheckK(k);
  std::size_t n = std::min<std::size_t>(k, ranked.size());
  auto hits = std::count(ranked.begin(), ranked.begin() + n, true);
  return static_cast<double>(hits) / k;
}

double NdcgAtK(const std::vector<bool>& ranked, int k, std::size_t total_relevant) {
  CheckK(k);
  std::size_t n = std::min<std::size_t>(k, ranked.size());
  auto hits = static_cast<std::size_t>(std::count(ranked.begin(), ranked.begin() + n, true));
  if (hits > total_relevant) {
    throw ValidationError("ranking holds more relevant items than the judged total");
  }
  if (total_relevant == 0) return 0.0;
  double dcg = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (ranked[i]) dcg += Discount(i + 1);
  }
  double ideal = 0.0;
  std::size_t m = std::min<std::size_t>(k, total_relevant);
  for (std::size_t i = 1; i <= m; ++i) ideal += Discount(i);
  return dcg / ideal;
}

double NdcgAtK(const std::vector<bool>& ranked, int k) {
  return NdcgAtK(ranked, k, std::count(ranked.begin(), ranked.end(), true));
}

double Rbo(const std::vector<std::string>& a_in, const std::vector<std::string>& b_in, double p,
           std::size_t depth) {
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("rbo: p must lie in (0, 1)");
  if (depth == 0) throw ValidationError("rbo: depth must be >= 1");
  CheckUnique(a_in, "rbo list");
  CheckUnique(b_in, "rbo list");
  std::vector<std::string> a(a_in.begin(), a_in.begin() + std::min(depth, a_in.size()));
  std::vector<std::string> b(b_in.begin(), b_in.begin() + std::min(depth, b_in.size()));
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  const auto& shorter = a.size() <= b.size() ? a : b;
  const auto& longer = a.size() <= b.size() ? b : a;
  const std::size_t s = shorter.size(), l = longer.size();

  // overlap[d] = |shorter[:min(d,s)] n longer[:d]|
  std::vector<double> overlap(l + 1, 0.0);
  std::unordered_set<std::string> seen_s, seen_l;
  std::size_t x = 0;
  for (std::size_t d = 1; d <= l; ++d) {
    const std::string& li = longer[d - 1];
    if (seen_s.count(li)) ++x;
    seen_l.insert(li);
    if (d <= s) {
      const std::string& si = shorter[d - 1];
      if (seen_l.count(si)) ++x;
      seen_s.insert(si);
    }
    overlap[d] = static_cast<double>(x);
  }
  double sum = 0.0, pd = 1.0;
  for (std::size_t d = 1; d <= l; ++d) {
    pd *= p;
    sum += overlap[d] / d * pd;
    if (d > s) sum += overlap[s] * static_cast<double>(d - s) / (s * d) * pd;
  }
  double tail = ((overlap[l] - overlap[s]) / l + overlap[s] / s) * pd;
  return (1.0 - p) / p * sum + tail;
}

std::size_t SharedItems(const std::vector<std::string>& a, const std::vector<std::string>& b,
                        std::size_t depth) {
  std::unordered_set<std::string> left(a.begin(), a.begin() + std::min(depth, a.size()));
  std::size_t n = 0;
  for (std::size_t i = 0; i < std::min(depth, b.size()); ++i) n += left.count(b[i]);
  return n;
}

MannWhitney MannWhitneyU(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw ValidationError("mann-whitney: empty sample");
  for (double v : a) {
    if (std::isnan(v)) throw ValidationError("mann-whitney: NaN in sample");
  }
  for (double v : b) {
    if (std::isnan(v)) throw ValidationError("mann-whitney: NaN in sample");
  }
  const std::size_t na = a.size(), nb = b.size(), n = na + nb;
  MannWhitney out;
  // 2U as an integer to keep the exact distribution on a lattice.
  long long two_u = 0;
  for (double x : a) {
    for (double y : b) two_u += x > y ? 2 : (x == y ? 1 : 0);
  }
  out.u = two_u / 2.0;

  // Tie groups in ascending order.
  std::vector<double> all(a);
  all.insert(all.end(), b.begin(), b.end());
  std::sort(all.begin(), all.end());
  std::vector<std::size_t> groups;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && all[j] == all[i]) ++j;
    groups.push_back(j - i);
    i = j;
  }
  const double mean2 = static_cast<double>(na * nb);  // 2 * E[U]

  if (na * nb <= 400) {
    out.exact = true;
    // The null distribution is symmetric about its mean, so the smaller
    // sample plays "a". dp[i][v]: ways to place i of its items among the
    // processed groups with 2U = v.
    const std::size_t ns = std::min(na, nb), nl = std::max(na, nb);
    const std::size_t max2u = 2 * ns * nl;
    std::vector<std::vector<long double>> dp(ns + 1, std::vector<long double>(max2u + 1, 0.0L));
    dp[0][0] = 1.0L;
    std::size_t processed = 0;
    for (std::size_t t : groups) {
      std::vector<std::vector<long double>> next(ns + 1,
                                                 std::vector<long double>(max2u + 1, 0.0L));
      for (std::size_t i = 0; i <= ns; ++i) {
        if (i > processed) break;
        std::size_t b_below = processed - i;
        if (b_below > nl) continue;
        for (std::size_t v = 0; v <= max2u; ++v) {
          if (dp[i][v] == 0.0L) continue;
          long double choose = 1.0L;
          for (std::size_t k = 0; k <= t && i + k <= ns; ++k) {
            if (k > 0) choose = choose * (t - k + 1) / k;
            if (t - k > nl - b_below) continue;
            std::size_t add = 2 * k * b_below + k * (t - k);
            if (v + add > max2u) continue;
            next[i + k][v + add] += dp[i][v] * choose;
          }
        }
      }
      dp.swap(next);
      processed += t;
    }
    long double total = 0.0L, tail = 0.0L;
    const double observed = std::fabs(static_cast<double>(two_u) - mean2);
    for (std::size_t v = 0; v <= max2u; ++v) {
      total += dp[ns][v];
      if (std::fabs(static_cast<double>(v) - mean2) >= observed - 1e-9) tail += dp[ns][v];
    }
    out.p_value = std::min(1.0, static_cast<double>(tail / total));
    return out;
  }

  double tie_term = 0.0;
  for (std::size_t t : groups) {
    double td = static_cast<double>(t);
    tie_term += td * td * td - td;
  }
  const double nd = static_cast<double>(n);
  double var = static_cast<double>(na) * nb / 12.0 * ((nd + 1.0) - tie_term / (nd * (nd - 1.0)));
  if (var <= 0.0) {
    out.p_value = 1.0;
    return out;
  }
  double diff = std::fabs(out.u - mean2 / 2.0) - 0.5;
  if (diff < 0.0) diff = 0.0;
  double z = diff / std::sqrt(var);
  out.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return out;
}

double FleissKappa(const AnnotationMatrix& m) {
  if (m.empty()) throw ValidationError("fleiss: no items");
  const std::size_t raters = m.front().size();
  if (raters < 2) throw ValidationError("fleiss: need at least 2 raters");
  std::map<std::string, double> totals;
  double p_bar = 0.0;
  for (const auto& row : m) {
    if (row.size() != raters) throw ValidationError("fleiss: ragged annotation matrix");
    std::map<std::string, double> counts;
    for (const auto& label : row) {
      if (label.empty()) throw ValidationError("fleiss: empty cell");
      counts[label] += 1.0;
      totals[label] += 1.0;
    }
    double agree = 0.0;
    for (const auto& [_, c] : counts) agree += c * (c - 1.0);
    p_bar += agree / (raters * (raters - 1.0));
  }
  p_bar /= m.size();
  const double cells = static_cast<double>(m.size() * raters);
  double p_e = 0.0;
  for (const auto& [_, c] : totals) p_e += (c / cells) * (c / cells);
  if (p_e >= 1.0 - 1e-15) return 1.0;  // a single category everywhere
  return (p_bar - p_e) / (1.0 - p_e);
}

// --- files ------------------------------------------------------------------

std::string AspectName(Aspect a) {
  return a == Aspect::kChallenge ? "challenge" : "strategy";
}

namespace {

bool ParseFlag(const std::string& s, const std::string& where) {
  if (s == "0") return false;
  if (s == "1") return true;
  throw ValidationError(where + ": relevance flag must be 0 or 1, got '" + s + "'");
}

template <typename Fn>
void ForEachTsvRow(const std::filesystem::path& path, std::size_t min_cols, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw StoreError("cannot open " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty() || line[0] == '#') continue;
    auto cols = Split(line, '\t');
    std::string where = path.string() + ":" + std::to_string(lineno);
    if (cols.size() < min_cols) {
      throw ValidationError(where + ": expected " + std::to_string(min_cols) + " columns");
    }
    fn(cols, where);
  }
}

}  // namespace

Qrels ReadQrels(const std::filesystem::path& path) {
  Qrels q;
  ForEachTsvRow(path, 4, [&](const std::vector<std::string>& c, const std::string& where) {
    Judgment j{ParseFlag(c[2], where), ParseFlag(c[3], where)};
    if (!q[c[0]].emplace(c[1], j).second) {
      throw ValidationError(where + ": duplicate judgment for " + c[0] + "/" + c[1]);
    }
  });
  return q;
}

void WriteQrels(const Qrels& q, const std::filesystem::path& path) {
  std::ostringstream out;
  for (const auto& [qid, judged] : q) {
    for (const auto& [sid, j] : judged) {
      out << qid << '\t' << sid << '\t' << (j.challenge ? 1 : 0) << '\t' << (j.strategy ? 1 : 0)
          << '\n';
    }
  }
  WriteFile(path, out.str());
}

RunFile ReadRun(const std::filesystem::path& path) {
  std::map<std::string, std::map<long, std::string>> ranked;
  ForEachTsvRow(path, 3, [&](const std::vector<std::string>& c, const std::string& where) {
    long rank = 0;
    try {
      std::size_t used = 0;
      rank = std::stol(c[1], &used);
      if (used != c[1].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ValidationError(where + ": bad rank '" + c[1] + "'");
    }
    if (!ranked[c[0]].emplace(rank, c[2]).second) {
      throw ValidationError(where + ": duplicate rank for query " + c[0]);
    }
  });
  RunFile run;
  for (auto& [qid, by_rank] : ranked) {
    auto& list = run[qid];
    for (auto& [_, sid] : by_rank) list.push_back(sid);
    CheckUnique(list, ("run for query " + qid).c_str());
  }
  return run;
}

void WriteRun(const RunFile& run, const std::filesystem::path& path,
              const std::map<std::string, std::vector<double>>* scores) {
  std::ostringstream out;
  out << std::setprecision(9);
  for (const auto& [qid, list] : run) {
    const std::vector<double>* s = nullptr;
    if (scores) {
      auto it = scores->find(qid);
      if (it != scores->end() && it->second.size() == list.size()) s = &it->second;
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
      double score = s ? (*s)[i] : static_cast<double>(list.size() - i);
      out << qid << '\t' << (i + 1) << '\t' << list[i] << '\t' << score << '\n';
    }
  }
  WriteFile(path, out.str());
}

std::vector<bool> RelevanceVector(const std::vector<std::string>& ranked,
                                  const std::map<std::string, Judgment>& judged, Aspect aspect) {
  std::vector<bool> out;
  out.reserve(ranked.size());
  for (const auto& sid : ranked) {
    auto it = judged.find(sid);
    bool rel = it != judged.end() &&
               (aspect == Aspect::kChallenge ? it->second.challenge : it->second.strategy);
    out.push_back(rel);
  }
  return out;
}

std::size_t JudgedRelevant(const std::map<std::string, Judgment>& judged, Aspect aspect) {
  std::size_t n = 0;
  for (const auto& [_, j] : judged) n += aspect == Aspect::kChallenge ? j.challenge : j.strategy;
  return n;
}

EvalReport EvaluateRun(const RunFile& run, const Qrels& qrels, const std::vector<int>& ks,
                       std::string run_name) {
  for (int k : ks) CheckK(k);
  EvalReport r;
  r.run_name = std::move(run_name);
  std::vector<int> sorted_ks(ks);
  std::sort(sorted_ks.begin(), sorted_ks.end());
  sorted_ks.erase(std::unique(sorted_ks.begin(), sorted_ks.end()), sorted_ks.end());

  std::vector<std::string> judged_queries;
  for (const auto& [qid, list] : run) {
    CheckUnique(list, ("run for query " + qid).c_str());
    if (qrels.count(qid)) {
      judged_queries.push_back(qid);
    } else {
      r.unjudged.push_back(qid);
    }
  }
  r.n_queries = judged_queries.size();
  if (r.n_queries == 0) return r;

  for (Aspect aspect : {Aspect::kChallenge, Aspect::kStrategy}) {
    for (int k : sorted_ks) {
      MetricRow row{aspect, k, 0.0, 0.0};
      auto& per_query = r.per_query_precision[{aspect, k}];
      for (const auto& qid : judged_queries) {
        const auto& judged = qrels.at(qid);
        auto rel = RelevanceVector(run.at(qid), judged, aspect);
        double p = PrecisionAtK(rel, k);
        per_query[qid] = p;
        row.precision += p;
        row.ndcg += NdcgAtK(rel, k, JudgedRelevant(judged, aspect));
      }
      row.precision /= r.n_queries;
      row.ndcg /= r.n_queries;
      r.rows.push_back(row);
    }
  }
  return r;
}

ordered_json ReportToJson(const EvalReport& r) {
  ordered_json j;
  j["run"] = r.run_name;
  j["n_queries"] = r.n_queries;
  j["unjudged"] = r.unjudged;
  ordered_json rows = ordered_json::array();
  for (const auto& row : r.rows) {
    ordered_json e;
    e["aspect"] = AspectName(row.aspect);
    e["k"] = row.k;
    e["precision"] = row.precision;
    e["ndcg"] = row.ndcg;
    rows.push_back(std::move(e));
  }
  j["metrics"] = std::move(rows);
  return j;
}

std::string ReportToTable(const std::vector<EvalReport>& reports) {
  std::size_t name_w = 3;
  for (const auto& r : reports) name_w = std::max(name_w, r.run_name.size());
  std::ostringstream out;
  out << std::left << std::setw(10) << "aspect" << "  " << std::setw(name_w) << "run"
      << "  " << std::right << std::setw(4) << "k" << "  " << std::setw(6) << "P" << "  "
      << std::setw(6) << "NDCG" << "  " << std::setw(4) << "n" << '\n';
  for (Aspect aspect : {Aspect::kChallenge, Aspect::kStrategy}) {
    for (const auto& r : reports) {
      for (const auto& row : r.rows) {
        if (row.aspect != aspect) continue;
        out << std::left << std::setw(10) << AspectName(aspect) << "  " << std::setw(name_w)
            << r.run_name << "  " << std::right << std::setw(4) << row.k << "  " << std::fixed
            << std::setprecision(3) << std::setw(6) << row.precision << "  " << std::setw(6)
            << row.ndcg << "  " << std::setw(4) << r.n_queries << '\n';
      }
    }
  }
  for (const auto& r : reports) {
    if (!r.unjudged.empty()) {
      out << "# " << r.run_name << ": " << r.unjudged.size()
          << " unjudged queries excluded:";
      for (const auto& q : r.unjudged) out << ' ' << q;
      out << '\n';
    }
  }
  return out.str();
}

MannWhitney ComparePrecision(const EvalReport& a, const EvalReport& b, Aspect aspect, int k) {
  auto ia = a.per_query_precision.find({aspect, k});
  auto ib = b.per_query_precision.find({aspect, k});
  if (ia == a.per_query_precision.end() || ib == b.per_query_precision.end()) {
    throw ValidationError("no per-query precision for " + AspectName(aspect) + "@" +
                          std::to_string(k));
  }
  std::vector<double> xa, xb;
  for (const auto& [_, v] : ia->second) xa.push_back(v);
  for (const auto& [_, v] : ib->second) xb.push_back(v);
  return MannWhitneyU(xa, xb);
}

std::vector<QuerySpec> ReadQueries(const std::filesystem::path& path) {
  std::vector<QuerySpec> out;
  std::set<std::string> ids;
  ForEachTsvRow(path, 2, [&](const std::vector<std::string>& c, const std::string& where) {
    QuerySpec q{Trim(c[0]), Trim(c[1]), c.size() > 2 ? Trim(c[2]) : ""};
    if (q.query_id.empty() || q.text.empty()) {
      throw ValidationError(where + ": empty query id or text");
    }
    if (!ids.insert(q.query_id).second) {
      throw ValidationError(where + ": duplicate query id " + q.query_id);
    }
    out.push_back(std::move(q));
  });
  for (const auto& q : out) {
    if (!q.paraphrase_of.empty() && !ids.count(q.paraphrase_of)) {
      throw ValidationError("query " + q.query_id + " paraphrases unknown id " +
                            q.paraphrase_of);
    }
  }
  return out;
}

namespace {

void FillMeans(RobustnessReport& r) {
  if (r.pairs.empty()) return;
  for (const auto& pr : r.pairs) {
    r.mean_rbo += pr.rbo;
    r.mean_shared += static_cast<double>(pr.shared);
  }
  r.mean_rbo /= r.pairs.size();
  r.mean_shared /= r.pairs.size();
}

}  // namespace

RobustnessReport EvaluateRobustness(const std::vector<QuerySpec>& queries, const RunFile& run,
                                    double p, std::size_t depth) {
  RobustnessReport r;
  r.p = p;
  r.depth = depth;
  static const std::vector<std::string> kEmpty;
  auto list_of = [&](const std::string& id) -> const std::vector<std::string>& {
    auto it = run.find(id);
    return it == run.end() ? kEmpty : it->second;
  };
  for (const auto& q : queries) {
    if (q.paraphrase_of.empty()) continue;
    const auto& a = list_of(q.paraphrase_of);
    const auto& b = list_of(q.query_id);
    r.pairs.push_back({q.paraphrase_of, q.query_id, Rbo(a, b, p, depth), SharedItems(a, b, depth)});
  }
  FillMeans(r);
  return r;
}

RobustnessReport CompareRuns(const RunFile& a, const RunFile& b, double p, std::size_t depth) {
  RobustnessReport r;
  r.p = p;
  r.depth = depth;
  std::set<std::string> ids;
  for (const auto& [q, _] : a) ids.insert(q);
  for (const auto& [q, _] : b) ids.insert(q);
  static const std::vector<std::string> kEmpty;
  for (const auto& q : ids) {
    auto ia = a.find(q);
    auto ib = b.find(q);
    const auto& la = ia == a.end() ? kEmpty : ia->second;
    const auto& lb = ib == b.end() ? kEmpty : ib->second;
    r.pairs.push_back({q, q, Rbo(la, lb, p, depth), SharedItems(la, lb, depth)});
  }
  FillMeans(r);
  return r;
}

ordered_json RobustnessToJson(const RobustnessReport& r) {
  ordered_json j;
  j["p"] = r.p;
  j["depth"] = r.depth;
  j["n_pairs"] = r.pairs.size();
  j["mean_rbo"] = r.mean_rbo;
  j["mean_shared_items"] = r.mean_shared;
  ordered_json pairs = ordered_json::array();
  for (const auto& pr : r.pairs) {
    pairs.push_back({{"original", pr.original_id},
                     {"paraphrase", pr.paraphrase_id},
                     {"rbo", pr.rbo},
                     {"shared_items", pr.shared}});
  }
  j["pairs"] = std::move(pairs);
  return j;
}

}  // namespace barcode::eval
