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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <sstream>

#include "barcode/bundle.h"
#include "barcode/cli.h"
#include "barcode/config.h"
#include "barcode/evaluation.h"
#include "barcode/patent_lexicon.h"
#include "barcode/service.h"

namespace py = pybind11;
namespace fs = std::filesystem;

namespace barcode {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

Config MakeConfig(const std::optional<fs::path>& path,
                  const std::map<std::string, std::string>& overrides) {
  Config cfg;
  if (path) {
    cfg = Config::FromFile(*path);
  } else {
    cfg.set_base_dir(fs::current_path());
  }
  for (const auto& [k, v] : overrides) cfg.Set(k, v);
  cfg.Validate();
  return cfg;
}

// JSON crosses the boundary as text; the package decodes it.
class PyEngine {
 public:
  PyEngine(const fs::path& index_dir, const std::optional<fs::path>& config,
           const std::map<std::string, std::string>& overrides)
      : engine_(Engine::Open(index_dir, MakeConfig(config, overrides))),
        service_(*engine_, engine_->config().GetPath("service.feedback_log")) {}

  std::string Query(const std::string& text, int k, bool filtered, bool baseline) {
    barcode::Query q{text, k, filtered};
    RankResponse r;
    {
      py::gil_scoped_release release;
      r = baseline ? engine_->Baseline(q) : engine_->Query(q);
    }
    return ResponseToJson(q, r).dump();
  }

  std::string Sentence(const std::string& id) const { return service_.Sentence(id).body; }
  std::string Manifest() const { return engine_->manifest().ToJson().dump(); }

 private:
  std::unique_ptr<Engine> engine_;
  Service service_;
};

std::string BuildIndex(const fs::path& index_dir, const std::optional<fs::path>& articles,
                       const std::optional<fs::path>& config,
                       const std::map<std::string, std::string>& overrides, bool force) {
  Config cfg = MakeConfig(config, overrides);
  ProviderSet providers = MakeProviders(cfg);
  BundleBuilder builder(index_dir, cfg, providers);
  builder.force = force;
  BuildReport rep;
  {
    py::gil_scoped_release release;
    rep = builder.BuildAll(articles);
  }
  ordered_json j;
  j["content_hash"] = rep.content_hash;
  j["stages"] = ordered_json::array();
  for (const auto& s : rep.stages) {
    j["stages"].push_back(
        {{"stage", s.stage}, {"skipped", s.skipped}, {"summary", s.summary}});
  }
  return j.dump();
}

py::tuple RunCliPy(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  std::vector<std::string> argv{"barcode"};
  argv.insert(argv.end(), args.begin(), args.end());
  int code;
  {
    py::gil_scoped_release release;
    code = RunCli(argv, out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace
}  // namespace barcode

PYBIND11_MODULE(_core, m) {
  using namespace barcode;
  m.doc() = "BARcode core bindings";

  // Translators run newest first, so the base class goes first.
  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<ProviderError>(m, "ProviderError", base.ptr());
  py::register_exception<StoreError>(m, "StoreError", base.ptr());

  m.def("precision_at_k", &eval::PrecisionAtK, py::arg("ranked"), py::arg("k"));
  m.def(
      "ndcg_at_k",
      [](const std::vector<bool>& ranked, int k, std::optional<std::size_t> total) {
        return total ? eval::NdcgAtK(ranked, k, *total) : eval::NdcgAtK(ranked, k);
      },
      py::arg("ranked"), py::arg("k"), py::arg("total_relevant") = py::none());
  m.def("rbo", &eval::Rbo, py::arg("a"), py::arg("b"), py::arg("p") = 0.9,
        py::arg("depth") = 15);
  m.def(
      "mann_whitney_u",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        auto r = eval::MannWhitneyU(a, b);
        return py::make_tuple(r.u, r.p_value, r.exact);
      },
      py::arg("a"), py::arg("b"));
  m.def("fleiss_kappa", &eval::FleissKappa, py::arg("matrix"));
  m.def(
      "problem_pairs",
      [](const std::string& claim) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& p : lexicon::ExtractProblemPairs(claim)) {
          out.emplace_back(p.verb_lemma, p.noun_lemma);
        }
        return out;
      },
      py::arg("claim_sentence"));

  m.def("_build_index", &BuildIndex, py::arg("index_dir"), py::arg("articles") = py::none(),
        py::arg("config") = py::none(),
        py::arg("overrides") = std::map<std::string, std::string>{},
        py::arg("force") = false);
  m.def(
      "_verify_bundle",
      [](const fs::path& dir) { return VerifyBundle(dir).ToJson().dump(); },
      py::arg("index_dir"));
  m.def("run_cli", &RunCliPy, py::arg("args"),
        "Runs the barcode command line; returns (exit_code, stdout, stderr).");

  py::class_<PyEngine>(m, "_Engine")
      .def(py::init<const fs::path&, const std::optional<fs::path>&,
                    const std::map<std::string, std::string>&>(),
           py::arg("index_dir"), py::arg("config") = py::none(),
           py::arg("overrides") = std::map<std::string, std::string>{})
      .def("query", &PyEngine::Query, py::arg("text"), py::arg("k") = 15,
           py::arg("filtered") = false, py::arg("baseline") = false)
      .def("sentence", &PyEngine::Sentence, py::arg("sentence_id"))
      .def("manifest", &PyEngine::Manifest);
}
