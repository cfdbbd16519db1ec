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

#ifndef BARCODE_RELEVANCE_CLASSIFIER_H_
#define BARCODE_RELEVANCE_CLASSIFIER_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "barcode/providers.h"
#include "json.hpp"

namespace barcode {

// (cosine, entail, neutral, contradict) for one phrase/query pair.
struct RelevanceFeatures {
  double cosine = 0.0;
  NliScores nli;

  std::array<double, 4> AsArray() const {
    return {cosine, nli.entail, nli.neutral, nli.contradict};
  }
  friend bool operator==(const RelevanceFeatures& a, const RelevanceFeatures& b) {
    return a.AsArray() == b.AsArray();
  }
};

struct LabeledPair {
  RelevanceFeatures features;
  bool relevant = false;
};

struct SvmParams {
  double c = 100.0;
  double gamma = 0.1;
  int degree = 2;
  double coef0 = 0.0;
  double eps = 1e-3;  // KKT stopping tolerance
  std::int64_t max_iter = 10'000'000;
  std::uint64_t seed = 0;  // holdout split
};

struct TrainingReport {
  std::size_t n_train = 0;
  std::size_t n_holdout = 0;
  double positive_rate = 0.0;
  double train_accuracy = 0.0;
  double holdout_precision = 0.0;
  double holdout_recall = 0.0;
  double holdout_accuracy = 0.0;
  std::int64_t iterations = 0;
};

// Max-margin classifier with a polynomial kernel
// K(x, z) = (gamma * <x, z> + coef0)^degree, trained by SMO on the dual.
class RelevanceClassifier {
 public:
  static constexpr int kVersion = 1;

  // Throws ValidationError unless both classes are present.
  static RelevanceClassifier Train(const std::vector<LabeledPair>& data,
                                   const SvmParams& params = {});

  // Signed decision value; positive means relevant.
  double Decision(const RelevanceFeatures& f) const;
  bool Predict(const RelevanceFeatures& f) const { return Decision(f) > 0; }

  const SvmParams& params() const { return params_; }
  std::size_t num_support_vectors() const { return sv_.size(); }
  const TrainingReport& report() const { return report_; }
  void set_report(const TrainingReport& r) { report_ = r; }

  nlohmann::ordered_json ToJson() const;
  static RelevanceClassifier FromJson(const nlohmann::json& j);
  void Save(const std::filesystem::path& path) const;
  static RelevanceClassifier Load(const std::filesystem::path& path);

 private:
  double Kernel(const std::array<double, 4>& a, const std::array<double, 4>& b) const;

  SvmParams params_;
  std::vector<std::array<double, 4>> sv_;
  std::vector<double> coef_;  // y_i * alpha_i
  double rho_ = 0.0;
  TrainingReport report_;
};

struct Confusion {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  double Precision() const { return tp + fp == 0 ? 0.0 : double(tp) / double(tp + fp); }
  double Recall() const { return tp + fn == 0 ? 0.0 : double(tp) / double(tp + fn); }
  double Accuracy() const {
    std::size_t n = tp + fp + tn + fn;
    return n == 0 ? 0.0 : double(tp + tn) / double(n);
  }
};

Confusion Evaluate(const RelevanceClassifier& clf, const std::vector<LabeledPair>& data);

// Seeded shuffle, trains on the first (1 - holdout_fraction) and reports
// precision/recall on the rest. The returned model carries the report.
RelevanceClassifier TrainWithHoldout(const std::vector<LabeledPair>& data,
                                     const SvmParams& params, double holdout_fraction = 0.2);

}  // namespace barcode

#endif  // BARCODE_RELEVANCE_CLASSIFIER_H_
