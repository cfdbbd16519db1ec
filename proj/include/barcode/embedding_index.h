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

#ifndef BARCODE_EMBEDDING_INDEX_H_
#define BARCODE_EMBEDDING_INDEX_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "barcode/phrase_extraction.h"
#include "barcode/providers.h"

namespace barcode {

// Row-major matrix of unit-norm phrase vectors.
//
// On disk: embeddings.bin holds the magic "BARC", u32 version, u32 d, u64 n
// and n*d little-endian float32; embeddings.ids holds one phrase id per row;
// embeddings.json names the embedding model.
class EmbeddingIndex {
 public:
  static constexpr std::uint32_t kVersion = 1;

  EmbeddingIndex() = default;
  EmbeddingIndex(std::string model_id, std::size_t dim);

  // Appends a row. The vector must have `dim()` entries and unit norm.
  void Add(std::string phrase_id, std::span<const float> vec);

  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  std::size_t dim() const { return dim_; }
  const std::string& model_id() const { return model_id_; }
  const std::vector<std::string>& phrase_ids() const { return ids_; }
  std::span<const float> row(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }

  void Write(const std::filesystem::path& index_dir) const;
  static EmbeddingIndex Read(const std::filesystem::path& index_dir);

 private:
  std::string model_id_;
  std::size_t dim_ = 0;
  std::vector<std::string> ids_;
  std::vector<float> data_;
};

// Embeds every phrase text (each distinct text once, in batches).
EmbeddingIndex BuildEmbeddingIndex(const std::vector<extract::CandidatePhrase>& phrases,
                                   EmbeddingProvider& provider, std::size_t batch = 64);

struct ShortlistEntry {
  std::size_t row = 0;
  double cosine = 0.0;
};

// Exact top-n rows by cosine (dot product of unit vectors), descending, ties
// by phrase id ascending. `allowed`, when non-empty, is a per-row mask.
// n larger than the candidate count returns every candidate.
std::vector<ShortlistEntry> Shortlist(std::span<const float> query, const EmbeddingIndex& index,
                                      std::size_t n, const std::vector<bool>& allowed = {});

}  // namespace barcode

#endif  // BARCODE_EMBEDDING_INDEX_H_
