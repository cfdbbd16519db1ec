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

#include "barcode/relevance_classifier.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace barcode {

using nlohmann::json;
using nlohmann::ordered_json;

double RelevanceClassifier::Kernel(const std::array<double, 4>& a,
                                   const std::array<double, 4>& b) const {
  double dot = 0;
  for (int k = 0; k < 4; ++k) dot += a[k] * b[k];
  return std::pow(params_.gamma * dot + params_.coef0, params_.degree);
}

// SMO with second-order working-set selection (Fan, Chen and Lin 2005):
//   min 0.5 a'Qa - e'a   s.t. y'a = 0, 0 <= a <= C,   Q_ij = y_i y_j K_ij.
RelevanceClassifier RelevanceClassifier::Train(const std::vector<LabeledPair>& data,
                                               const SvmParams& params) {
  const std::size_t n = data.size();
  std::size_t pos = 0;
  for (const auto& d : data) pos += d.relevant;
  if (pos == 0 || pos == n) {
    throw ValidationError("relevance classifier needs both relevant and irrelevant pairs");
  }
  if (params.c <= 0 || params.gamma <= 0 || params.degree < 1) {
    throw ConfigError("SVM needs C > 0, gamma > 0, degree >= 1");
  }

  RelevanceClassifier clf;
  clf.params_ = params;
  std::vector<std::array<double, 4>> x(n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = data[i].features.AsArray();
    y[i] = data[i].relevant ? 1.0 : -1.0;
  }
  std::vector<double> k(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) k[i * n + j] = k[j * n + i] = clf.Kernel(x[i], x[j]);
  }
  auto K = [&](std::size_t i, std::size_t j) { return k[i * n + j]; };
  auto Q = [&](std::size_t i, std::size_t j) { return y[i] * y[j] * K(i, j); };

  const double C = params.c;
  constexpr double kTau = 1e-12;
  std::vector<double> alpha(n, 0.0), grad(n, -1.0);
  auto in_up = [&](std::size_t t) {
    return (y[t] > 0 && alpha[t] < C) || (y[t] < 0 && alpha[t] > 0);
  };
  auto in_low = [&](std::size_t t) {
    return (y[t] > 0 && alpha[t] > 0) || (y[t] < 0 && alpha[t] < C);
  };

  std::int64_t iter = 0;
  for (; iter < params.max_iter; ++iter) {
    double gmax = -std::numeric_limits<double>::infinity();
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (in_up(t) && -y[t] * grad[t] > gmax) {
        gmax = -y[t] * grad[t];
        i = t;
      }
    }
    double gmin = std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    std::size_t j = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (!in_low(t)) continue;
      gmin = std::min(gmin, -y[t] * grad[t]);
      double b = gmax + y[t] * grad[t];
      if (i == n || b <= 0) continue;
      double a = K(i, i) + K(t, t) - 2 * K(i, t);
      if (a <= 0) a = kTau;
      double obj = -(b * b) / a;
      if (obj < best) {
        best = obj;
        j = t;
      }
    }
    if (i == n || j == n || gmax - gmin < params.eps) break;

    // Two-variable subproblem, as in LIBSVM's Solver::Solve.
    const double old_ai = alpha[i], old_aj = alpha[j];
    if (y[i] != y[j]) {
      double quad = Q(i, i) + Q(j, j) + 2 * Q(i, j);
      if (quad <= 0) quad = kTau;
      double delta = (-grad[i] - grad[j]) / quad;
      double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) { alpha[j] = 0; alpha[i] = diff; }
      } else {
        if (alpha[i] < 0) { alpha[i] = 0; alpha[j] = -diff; }
      }
      if (diff > 0) {
        if (alpha[i] > C) { alpha[i] = C; alpha[j] = C - diff; }
      } else {
        if (alpha[j] > C) { alpha[j] = C; alpha[i] = C + diff; }
      }
    } else {
      double quad = Q(i, i) + Q(j, j) - 2 * Q(i, j);
      if (quad <= 0) quad = kTau;
      double delta = (grad[i] - grad[j]) / quad;
      double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) { alpha[i] = C; alpha[j] = sum - C; }
      } else {
        if (alpha[j] < 0) { alpha[j] = 0; alpha[i] = sum; }
      }
      if (sum > C) {
        if (alpha[j] > C) { alpha[j] = C; alpha[i] = sum - C; }
      } else {
        if (alpha[i] < 0) { alpha[i] = 0; alpha[j] = sum; }
      }
    }
    double di = alpha[i] - old_ai, dj = alpha[j] - old_aj;
    for (std::size_t t = 0; t < n; ++t) grad[t] += Q(t, i) * di + Q(t, j) * dj;
  }

  // rho: mean of y*grad over free vectors, else midpoint of the bounds.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    double yg = y[t] * grad[t];
    if (alpha[t] >= C) {
      if (y[t] < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0) {
      if (y[t] > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      sum_free += yg;
      ++n_free;
    }
  }
  clf.rho_ = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2;

  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0) {
      clf.sv_.push_back(x[t]);
      clf.coef_.push_back(y[t] * alpha[t]);
    }
  }
  clf.report_.n_train = n;
  clf.report_.positive_rate = static_cast<double>(pos) / static_cast<double>(n);
  clf.report_.iterations = iter;
  clf.report_.train_accuracy = Evaluate(clf, data).Accuracy();
  return clf;
}

double RelevanceClassifier::Decision(const RelevanceFeatures& f) const {
  auto x = f.AsArray();
  double s = -rho_;
  for (std::size_t i = 0; i < sv_.size(); ++i) s += coef_[i] * Kernel(sv_[i], x);
  return s;
}

ordered_json RelevanceClassifier::ToJson() const {
  ordered_json j;
  j["version"] = kVersion;
  j["kernel"] = "poly";
  j["degree"] = params_.degree;
  j["gamma"] = params_.gamma;
  j["coef0"] = params_.coef0;
  j["C"] = params_.c;
  j["seed"] = params_.seed;
  j["feature_names"] = {"cosine", "entail", "neutral", "contradict"};
  j["rho"] = rho_;
  j["dual_coef"] = coef_;
  j["support_vectors"] = sv_;
  ordered_json r;
  r["n_train"] = report_.n_train;
  r["n_holdout"] = report_.n_holdout;
  r["positive_rate"] = report_.positive_rate;
  r["train_accuracy"] = report_.train_accuracy;
  r["holdout_precision"] = report_.holdout_precision;
  r["holdout_recall"] = report_.holdout_recall;
  r["holdout_accuracy"] = report_.holdout_accuracy;
  r["iterations"] = report_.iterations;
  j["training"] = r;
  return j;
}

RelevanceClassifier RelevanceClassifier::FromJson(const json& j) {
  if (j.value("version", 0) != kVersion) {
    throw StoreError("unsupported relevance classifier version");
  }
  if (j.value("kernel", "") != "poly") throw StoreError("relevance classifier kernel must be poly");
  RelevanceClassifier clf;
  clf.params_.degree = j.at("degree").get<int>();
  clf.params_.gamma = j.at("gamma").get<double>();
  clf.params_.coef0 = j.at("coef0").get<double>();
  clf.params_.c = j.at("C").get<double>();
  clf.params_.seed = j.value("seed", std::uint64_t{0});
  clf.rho_ = j.at("rho").get<double>();
  clf.coef_ = j.at("dual_coef").get<std::vector<double>>();
  clf.sv_ = j.at("support_vectors").get<std::vector<std::array<double, 4>>>();
  if (clf.coef_.size() != clf.sv_.size()) {
    throw StoreError("relevance classifier: dual_coef and support_vectors differ in length");
  }
  if (j.contains("training")) {
    const auto& r = j["training"];
    clf.report_.n_train = r.value("n_train", std::size_t{0});
    clf.report_.n_holdout = r.value("n_holdout", std::size_t{0});
    clf.report_.positive_rate = r.value("positive_rate", 0.0);
    clf.report_.train_accuracy = r.value("train_accuracy", 0.0);
    clf.report_.holdout_precision = r.value("holdout_precision", 0.0);
    clf.report_.holdout_recall = r.value("holdout_recall", 0.0);
    clf.report_.holdout_accuracy = r.value("holdout_accuracy", 0.0);
    clf.report_.iterations = r.value("iterations", std::int64_t{0});
  }
  return clf;
}

void RelevanceClassifier::Save(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  WriteFile(path, ToJson().dump(1) + "\n");
}

RelevanceClassifier RelevanceClassifier::Load(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw StoreError("missing classifier " + path.string());
  try {
    return FromJson(json::parse(ReadFile(path)));
  } catch (const json::exception& e) {
    throw StoreError(path.string() + ": " + e.what());
  }
}

Confusion Evaluate(const RelevanceClassifier& clf, const std::vector<LabeledPair>& data) {
  Confusion c;
  for (const auto& d : data) {
    bool p = clf.Predict(d.features);
    if (p && d.relevant) ++c.tp;
    else if (p) ++c.fp;
    else if (d.relevant) ++c.fn;
    else ++c.tn;
  }
  return c;
}

RelevanceClassifier TrainWithHoldout(const std::vector<LabeledPair>& data,
                                     const SvmParams& params, double holdout_fraction) {
  if (!(holdout_fraction > 0 && holdout_fraction < 1)) {
    throw ValidationError("holdout fraction must be in (0, 1)");
  }
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(params.seed);
  // Fisher-Yates on raw engine output: mt19937_64 is fully specified, the
  // standard distributions are not.
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng() % i]);
  }
  std::size_t n_hold = static_cast<std::size_t>(std::round(holdout_fraction * data.size()));
  std::vector<LabeledPair> train, hold;
  for (std::size_t r = 0; r < order.size(); ++r) {
    (r < n_hold ? hold : train).push_back(data[order[r]]);
  }
  auto clf = RelevanceClassifier::Train(train, params);
  auto c = Evaluate(clf, hold);
  TrainingReport rep = clf.report();
  rep.n_holdout = hold.size();
  rep.holdout_precision = c.Precision();
  rep.holdout_recall = c.Recall();
  rep.holdout_accuracy = c.Accuracy();
  clf.set_report(rep);
  return clf;
}

}  // namespace barcode
