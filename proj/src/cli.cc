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

#include "barcode/cli.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "barcode/bundle.h"
#include "barcode/config.h"
#include "barcode/evaluation.h"
#include "barcode/patent_lexicon.h"
#include "barcode/service.h"

namespace barcode {

using nlohmann::json;
using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

struct GlobalOptions {
  std::string config;
  std::string index;
  std::optional<double> tau;
  std::optional<long long> seed;
  std::vector<std::string> sets;
  bool json = false;
};

Config LoadConfig(const GlobalOptions& g) {
  std::string path = g.config;
  if (path.empty()) {
    if (const char* env = std::getenv("BARCODE_CONFIG")) path = env;
  }
  Config cfg;
  if (!path.empty()) {
    cfg = Config::FromFile(path);
  } else {
    cfg.set_base_dir(fs::current_path());
  }
  cfg.ApplyProcessEnvironment();
  for (const auto& kv : g.sets) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
    cfg.Set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (g.tau) cfg.SetJson("bio.tau", *g.tau);
  if (g.seed) cfg.SetJson("general.seed", *g.seed);
  cfg.Validate();
  spdlog::set_level(spdlog::level::from_str(cfg.GetString("general.log_level")));
  spdlog::info("effective config: {}", cfg.Snapshot().dump());
  return cfg;
}

fs::path IndexDir(const GlobalOptions& g) {
  if (g.index.empty()) throw UsageError("--index DIR is required for this command");
  return g.index;
}

std::string Fixed(double v, int digits = 3) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

std::string Clip(std::string s, std::size_t n) {
  if (s.size() <= n) return s;
  s.resize(n - 3);
  return s + "...";
}

void PrintStage(std::ostream& out, const StageResult& r) {
  out << std::left << std::setw(11) << r.stage << (r.skipped ? "up to date" : "done");
  if (!r.summary.empty()) out << "  " << r.summary.dump();
  out << '\n';
}

ordered_json StageJson(const StageResult& r) {
  ordered_json j;
  j["stage"] = r.stage;
  j["skipped"] = r.skipped;
  j["fingerprint"] = r.fingerprint;
  j["summary"] = r.summary;
  return j;
}

std::string ResultsTable(const RankResponse& r) {
  std::ostringstream out;
  out << std::left << std::setw(5) << "rank" << std::setw(18) << "organism" << std::setw(34)
      << "phrase" << std::right << std::setw(7) << "cos" << std::setw(7) << "ent"
      << std::setw(7) << "con" << std::setw(8) << "score" << "  sentence\n";
  for (const auto& res : r.results) {
    out << std::left << std::setw(5) << res.rank << std::setw(18) << Clip(res.organism, 17)
        << std::setw(34) << Clip(res.matched_phrase.text, 33) << std::right << std::setw(7)
        << Fixed(res.features.cosine) << std::setw(7) << Fixed(res.features.nli.entail)
        << std::setw(7) << Fixed(res.features.nli.contradict) << std::setw(8)
        << Fixed(res.combined_score) << "  " << Clip(res.sentence_text, 70) << '\n';
  }
  if (r.results.empty()) out << "(no results: " << r.status << ")\n";
  return out.str();
}

std::string RobustnessTable(const eval::RobustnessReport& r) {
  std::ostringstream out;
  out << std::left << std::setw(14) << "a" << std::setw(14) << "b" << std::right << std::setw(8)
      << "rbo" << std::setw(8) << "shared" << '\n';
  for (const auto& p : r.pairs) {
    out << std::left << std::setw(14) << p.original_id << std::setw(14) << p.paraphrase_id
        << std::right << std::setw(8) << Fixed(p.rbo) << std::setw(8) << p.shared << '\n';
  }
  out << "mean rbo " << Fixed(r.mean_rbo) << ", mean shared " << Fixed(r.mean_shared, 2)
      << " (p=" << r.p << ", depth=" << r.depth << ", " << r.pairs.size() << " pairs)\n";
  return out.str();
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto previous = spdlog::default_logger();
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto logger = std::make_shared<spdlog::logger>("barcode", sink);
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  struct Restore {
    std::shared_ptr<spdlog::logger> prev;
    ~Restore() { spdlog::set_default_logger(prev); }
  } restore{previous};

  CLI::App app{"Bio-inspiration search over organism descriptions", "barcode"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  app.add_option("--config", g.config, "TOML config file (default: $BARCODE_CONFIG)");
  app.add_option("--index", g.index, "Index bundle directory");
  app.add_option("--tau", g.tau, "Bio-inspiration threshold (bio.tau)");
  app.add_option("--seed", g.seed, "Random seed (general.seed)");
  app.add_option("--set", g.sets, "Override any setting: section.key=value (repeatable)")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  app.add_flag("--json", g.json, "Machine-readable JSON output");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Segment an articles JSONL file into the index");
  std::string ingest_input;
  ingest->add_option("input", ingest_input, "articles.jsonl")->required();

  auto* extract = app.add_subcommand("extract-phrases", "Extract candidate phrases");
  auto* score_bio = app.add_subcommand("score-bio", "Score sentences for bio-inspiration");

  auto* mine = app.add_subcommand("mine-patents", "Mine the problem lexicon from patent claims");
  std::string claims, lexicon_out;
  std::optional<long long> top_n;
  mine->add_option("--claims", claims, "Claim sentences, one per line");
  mine->add_option("--top-n", top_n, "Pairs kept (patents.top_n)");
  mine->add_option("--out", lexicon_out, "Output TSV (default <bio.lexicon_dir>/problems.tsv)");

  auto* build = app.add_subcommand("build-index", "Run every pending stage and seal the bundle");
  std::string build_input;
  bool force = false;
  build->add_option("--input", build_input, "articles.jsonl (needed unless already ingested)");
  build->add_flag("--force", force, "Rerun stages even when up to date");

  auto* train = app.add_subcommand("train-classifier", "Train the relevance classifier");
  std::string model_out;
  train->add_option("--out", model_out, "Model path (default classifier.model)");

  auto* query = app.add_subcommand("query", "Rank sentences for a design question");
  std::string query_text, queries_file, run_out;
  std::optional<int> query_k;
  bool filtered = false, baseline = false;
  query->add_option("text", query_text, "Query, e.g. \"collect water from humid air\"");
  query->add_option("--k", query_k, "Results to return (1..ranking.max_k)");
  query->add_flag("--filtered", filtered, "Search only sentences with bio score >= tau");
  query->add_flag("--baseline", baseline, "Use the BM25 sentence baseline");
  query->add_option("--queries", queries_file, "Batch mode: TSV of query_id, text");
  query->add_option("--out", run_out, "Batch mode: run file to write");

  auto* serve = app.add_subcommand("serve", "Serve the bundle over HTTP");
  std::optional<std::string> host;
  std::optional<int> port;
  serve->add_option("--host", host, "Bind address (service.host)");
  serve->add_option("--port", port, "Port (service.port)");

  auto* evaluate = app.add_subcommand("evaluate", "P@k and NDCG@k of run files");
  std::vector<std::string> eval_runs;
  std::string qrels_path;
  std::vector<int> eval_ks;
  evaluate->add_option("--run", eval_runs, "Run file (repeatable)")
      ->required()
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  evaluate->add_option("--qrels", qrels_path, "Judgments TSV")->required();
  evaluate->add_option("--k", eval_ks, "Cutoff (repeatable; default evaluation.ks)")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  auto* robust = app.add_subcommand("robustness", "Rank-biased overlap between result lists");
  std::vector<std::string> robust_runs;
  std::string robust_queries;
  std::optional<double> rbo_p;
  std::optional<int> rbo_depth;
  robust->add_option("--run", robust_runs, "Two run files, or one with --queries")
      ->required()
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  robust->add_option("--queries", robust_queries, "Query TSV with a paraphrase_of column");
  robust->add_option("--p", rbo_p, "RBO persistence (evaluation.rbo_p)");
  robust->add_option("--depth", rbo_depth, "List depth (evaluation.rbo_depth)");

  std::vector<std::string> reversed(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* sub = nullptr;
    for (const auto* s : app.get_subcommands()) sub = s;
    err << (sub ? sub->help() : app.help());
    return kExitUsage;
  }

  auto emit = [&](const ordered_json& j, const std::string& text) {
    if (g.json) {
      out << j.dump(2) << '\n';
    } else {
      out << text;
    }
  };

  try {
    if (*query) {
      if (query_text.empty() == queries_file.empty()) {
        throw UsageError("query needs either query text or --queries FILE");
      }
      if (!queries_file.empty() && run_out.empty()) throw UsageError("--queries needs --out");
    }
    Config cfg = LoadConfig(g);

    if (*ingest) {
      ProviderSet providers = MakeProviders(cfg);
      BundleBuilder b(IndexDir(g), cfg, providers);
      auto r = b.Ingest(ingest_input);
      std::ostringstream t;
      PrintStage(t, r);
      emit(StageJson(r), t.str());
    } else if (*extract || *score_bio) {
      ProviderSet providers = MakeProviders(cfg);
      BundleBuilder b(IndexDir(g), cfg, providers);
      auto r = *extract ? b.Extract() : b.ScoreBio();
      std::ostringstream t;
      PrintStage(t, r);
      emit(StageJson(r), t.str());
    } else if (*mine) {
      fs::path in = claims.empty() ? cfg.GetPath("patents.claims") : fs::path(claims);
      fs::path dest = lexicon_out.empty() ? cfg.GetPath("bio.lexicon_dir") / "problems.tsv"
                                          : fs::path(lexicon_out);
      std::ifstream stream(in);
      if (!stream) throw StoreError("cannot open " + in.string());
      auto counts = lexicon::CountProblemPairs(stream);
      std::size_t n = static_cast<std::size_t>(top_n ? *top_n : cfg.GetInt("patents.top_n"));
      if (n == 0) throw UsageError("--top-n must be positive");
      auto lex = lexicon::BuildLexicon(counts, n);
      if (dest.has_parent_path()) fs::create_directories(dest.parent_path());
      lexicon::WriteLexicon(lex, dest);
      std::size_t occurrences = 0;
      for (const auto& [_, c] : counts) occurrences += c;
      ordered_json j;
      j["claims"] = in.string();
      j["occurrences"] = occurrences;
      j["distinct_pairs"] = counts.size();
      j["kept"] = lex.size();
      j["out"] = dest.string();
      j["sha256"] = lex.source_hash();
      ordered_json top = ordered_json::array();
      for (std::size_t i = 0; i < std::min<std::size_t>(10, lex.size()); ++i) {
        const auto& e = lex.entries()[i];
        top.push_back({{"verb", e.verb_lemma}, {"noun", e.noun_lemma}, {"count", e.count}});
      }
      j["top"] = top;
      std::ostringstream t;
      t << occurrences << " problem pairs (" << counts.size() << " distinct); kept "
        << lex.size() << " -> " << dest.string() << '\n';
      for (const auto& e : top) {
        t << "  " << e["verb"].get<std::string>() << ' ' << e["noun"].get<std::string>() << "  "
          << e["count"] << '\n';
      }
      emit(j, t.str());
    } else if (*build) {
      ProviderSet providers = MakeProviders(cfg);
      BundleBuilder b(IndexDir(g), cfg, providers);
      b.force = force;
      std::optional<fs::path> input;
      if (!build_input.empty()) input = build_input;
      auto rep = b.BuildAll(input);
      ordered_json j;
      j["index"] = IndexDir(g).string();
      j["content_hash"] = rep.content_hash;
      j["stages"] = ordered_json::array();
      std::ostringstream t;
      for (const auto& s : rep.stages) {
        j["stages"].push_back(StageJson(s));
        PrintStage(t, s);
      }
      t << "sealed " << IndexDir(g).string() << "  " << rep.content_hash << '\n';
      emit(j, t.str());
    } else if (*train) {
      ProviderSet providers = MakeProviders(cfg);
      auto clf = TrainClassifier(cfg, *providers.embedder, *providers.nli);
      fs::path dest = model_out.empty() ? cfg.GetPath("classifier.model") : fs::path(model_out);
      if (dest.has_parent_path()) fs::create_directories(dest.parent_path());
      clf.Save(dest);
      json saved = json::parse(ReadFile(dest));
      saved["features_from"] = {{"embedding", providers.embedder->id()},
                                {"nli", providers.nli->id()}};
      WriteFile(dest, saved.dump(2) + "\n");
      const auto& r = clf.report();
      ordered_json j;
      j["out"] = dest.string();
      j["n_train"] = r.n_train;
      j["n_holdout"] = r.n_holdout;
      j["positive_rate"] = r.positive_rate;
      j["train_accuracy"] = r.train_accuracy;
      j["holdout_precision"] = r.holdout_precision;
      j["holdout_recall"] = r.holdout_recall;
      j["holdout_accuracy"] = r.holdout_accuracy;
      j["support_vectors"] = clf.num_support_vectors();
      j["embedding"] = providers.embedder->id();
      j["nli"] = providers.nli->id();
      std::ostringstream t;
      t << "trained on " << r.n_train << " pairs, " << clf.num_support_vectors()
        << " support vectors -> " << dest.string() << "\nholdout (" << r.n_holdout
        << "): precision " << Fixed(r.holdout_precision) << ", recall "
        << Fixed(r.holdout_recall) << ", accuracy " << Fixed(r.holdout_accuracy) << '\n';
      emit(j, t.str());
    } else if (*query) {
      long long max_k = cfg.GetInt("ranking.max_k");
      int k = static_cast<int>(
          std::clamp<long long>(query_k ? *query_k : cfg.GetInt("ranking.default_k"), 1, max_k));
      auto engine = Engine::Open(IndexDir(g), cfg);
      auto rank = [&](const std::string& text) {
        barcode::Query q{text, k, filtered};
        return std::make_pair(q, baseline ? engine->Baseline(q) : engine->Query(q));
      };
      if (!query_text.empty()) {
        auto [q, r] = rank(query_text);
        emit(ResponseToJson(q, r), ResultsTable(r));
      } else {
        eval::RunFile run;
        std::map<std::string, std::vector<double>> scores;
        auto specs = eval::ReadQueries(queries_file);
        for (const auto& spec : specs) {
          auto [q, r] = rank(spec.text);
          auto& ids = run[spec.query_id];
          auto& sc = scores[spec.query_id];
          for (const auto& res : r.results) {
            ids.push_back(res.sentence_id);
            sc.push_back(res.combined_score);
          }
        }
        eval::WriteRun(run, run_out, &scores);
        ordered_json j;
        j["queries"] = specs.size();
        j["k"] = k;
        j["filtered"] = filtered;
        j["system"] = baseline ? "baseline" : "barcode";
        j["out"] = run_out;
        emit(j, "wrote " + std::to_string(specs.size()) + " ranked lists to " + run_out + "\n");
      }
    } else if (*serve) {
      if (host) cfg.SetJson("service.host", *host);
      if (port) cfg.SetJson("service.port", *port);
      cfg.Validate();
      Serve(IndexDir(g), cfg);
    } else if (*evaluate) {
      std::vector<int> ks = eval_ks;
      if (ks.empty()) ks = cfg.Get("evaluation.ks").get<std::vector<int>>();
      for (int k : ks) {
        if (k < 1) throw UsageError("--k must be positive");
      }
      auto qrels = eval::ReadQrels(qrels_path);
      std::vector<eval::EvalReport> reports;
      for (const auto& path : eval_runs) {
        reports.push_back(eval::EvaluateRun(eval::ReadRun(path), qrels, ks,
                                            fs::path(path).stem().string()));
      }
      ordered_json j;
      j["reports"] = ordered_json::array();
      for (const auto& r : reports) j["reports"].push_back(eval::ReportToJson(r));
      std::string text = eval::ReportToTable(reports);
      if (reports.size() > 1) {
        j["comparisons"] = ordered_json::array();
        std::ostringstream t;
        t << "\nMann-Whitney U on per-query P@k against " << reports[0].run_name << '\n';
        for (std::size_t i = 1; i < reports.size(); ++i) {
          for (auto aspect : {eval::Aspect::kChallenge, eval::Aspect::kStrategy}) {
            for (int k : ks) {
              auto mw = eval::ComparePrecision(reports[i], reports[0], aspect, k);
              j["comparisons"].push_back({{"a", reports[i].run_name},
                                          {"b", reports[0].run_name},
                                          {"aspect", eval::AspectName(aspect)},
                                          {"k", k},
                                          {"u", mw.u},
                                          {"p_value", mw.p_value},
                                          {"exact", mw.exact}});
              t << "  " << std::left << std::setw(22) << reports[i].run_name << std::setw(10)
                << eval::AspectName(aspect) << "@" << std::setw(4) << k << "U=" << mw.u
                << "  p=" << Fixed(mw.p_value, 4) << '\n';
            }
          }
        }
        text += t.str();
      }
      emit(j, text);
    } else if (*robust) {
      double p = rbo_p ? *rbo_p : cfg.GetDouble("evaluation.rbo_p");
      int depth = rbo_depth ? *rbo_depth : static_cast<int>(cfg.GetInt("evaluation.rbo_depth"));
      if (!(p > 0.0 && p < 1.0)) throw UsageError("--p must lie in (0, 1)");
      if (depth < 1) throw UsageError("--depth must be positive");
      eval::RobustnessReport r;
      if (robust_runs.size() == 2 && robust_queries.empty()) {
        r = eval::CompareRuns(eval::ReadRun(robust_runs[0]), eval::ReadRun(robust_runs[1]), p,
                              static_cast<std::size_t>(depth));
      } else if (robust_runs.size() == 1 && !robust_queries.empty()) {
        r = eval::EvaluateRobustness(eval::ReadQueries(robust_queries),
                                     eval::ReadRun(robust_runs[0]), p,
                                     static_cast<std::size_t>(depth));
      } else {
        throw UsageError("robustness takes two --run files, or one --run with --queries");
      }
      emit(eval::RobustnessToJson(r), RobustnessTable(r));
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* sub = nullptr;
    for (const auto* s : app.get_subcommands()) sub = s;
    err << (sub ? sub->help() : app.help());
    return kExitUsage;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    if (g.json) {
      ordered_json j;
      j["error"]["code"] = dynamic_cast<const ConfigError*>(&e)       ? "config_error"
                           : dynamic_cast<const ValidationError*>(&e) ? "validation_error"
                           : dynamic_cast<const ProviderError*>(&e)   ? "provider_error"
                           : dynamic_cast<const StoreError*>(&e)      ? "store_error"
                                                                      : "error";
      j["error"]["message"] = e.what();
      out << j.dump(2) << '\n';
    }
    return kExitDomainError;
  }
  return kExitOk;
}

}  // namespace barcode
