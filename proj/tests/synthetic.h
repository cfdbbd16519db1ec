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

#ifndef BARCODE_TESTS_SYNTHETIC_H_
#define BARCODE_TESTS_SYNTHETIC_H_

// Planted-truth label matrices: each candidate has a hidden label drawn with
// probability `positive_rate`; each LF votes with probability `coverage` and,
// when it votes, is right with its planted accuracy.

#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "barcode/bio_filter.h"
#include "barcode/ranking.h"

namespace barcode::testing {

struct PlantedMatrix {
  bio::LabelMatrix matrix;
  std::vector<int> truth;  // 1 positive, 0 negative
};

inline PlantedMatrix MakePlantedMatrix(const std::vector<double>& accuracies,
                                       double coverage, std::size_t n,
                                       std::uint64_t seed, double positive_rate = 0.5) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PlantedMatrix out;
  for (std::size_t j = 0; j < accuracies.size(); ++j) {
    out.matrix.lf_names.push_back("lf" + std::to_string(j));
  }
  for (std::size_t i = 0; i < n; ++i) {
    int y = u(rng) < positive_rate ? 1 : 0;
    std::vector<bio::Vote> row;
    for (double a : accuracies) {
      if (u(rng) >= coverage) {
        row.push_back(bio::Vote::kAbstain);
        continue;
      }
      bool right = u(rng) < a;
      bool positive = right == (y == 1);
      row.push_back(positive ? bio::Vote::kPositive : bio::Vote::kNegative);
    }
    out.truth.push_back(y);
    out.matrix.rows.push_back(std::move(row));
  }
  return out;
}

// Mann-Whitney form of the ROC AUC, by direct pair counting.
inline double PairwiseAuc(const std::vector<double>& scores, const std::vector<int>& truth) {
  double wins = 0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (truth[i] != 1) continue;
    for (std::size_t k = 0; k < scores.size(); ++k) {
      if (truth[k] != 0) continue;
      ++pairs;
      if (scores[i] > scores[k]) wins += 1;
      else if (scores[i] == scores[k]) wins += 0.5;
    }
  }
  return pairs ? wins / static_cast<double>(pairs) : 0.5;
}

inline Vector RandomUnit(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<float> g;
  Vector v(d);
  for (auto& x : v) x = g(rng);
  NormalizeInPlace(v);
  return v;
}

// n random unit vectors with ids p000000, p000001, ...
inline EmbeddingIndex RandomIndex(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  EmbeddingIndex index("random", d);
  for (std::size_t i = 0; i < n; ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "p%06zu", i);
    index.Add(id, RandomUnit(rng, d));
  }
  return index;
}

}  // namespace barcode::testing

#endif  // BARCODE_TESTS_SYNTHETIC_H_
