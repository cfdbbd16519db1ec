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

#include "barcode/embedding_index.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace barcode {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "embeddings.bin is read and written in native little-endian order");

namespace {

constexpr char kMagic[4] = {'B', 'A', 'R', 'C'};
constexpr double kNormTolerance = 1e-3;

template <typename T>
void Put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T Get(std::istream& in, const std::string& what) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) {
    throw StoreError("embeddings.bin truncated reading " + what);
  }
  return v;
}

}  // namespace

EmbeddingIndex::EmbeddingIndex(std::string model_id, std::size_t dim)
    : model_id_(std::move(model_id)), dim_(dim) {
  if (dim_ == 0) throw ValidationError("embedding dimension must be positive");
}

void EmbeddingIndex::Add(std::string phrase_id, std::span<const float> vec) {
  if (vec.size() != dim_) {
    throw ValidationError("vector for " + phrase_id + " has dimension " +
                          std::to_string(vec.size()) + ", index has " + std::to_string(dim_));
  }
  double norm = std::sqrt(Dot(vec, vec));
  if (std::abs(norm - 1.0) > kNormTolerance) {
    throw ValidationError("vector for " + phrase_id + " is not unit norm");
  }
  ids_.push_back(std::move(phrase_id));
  data_.insert(data_.end(), vec.begin(), vec.end());
}

void EmbeddingIndex::Write(const std::filesystem::path& index_dir) const {
  std::filesystem::create_directories(index_dir);
  std::ostringstream bin;
  bin.write(kMagic, 4);
  Put<std::uint32_t>(bin, kVersion);
  Put<std::uint32_t>(bin, static_cast<std::uint32_t>(dim_));
  Put<std::uint64_t>(bin, static_cast<std::uint64_t>(ids_.size()));
  bin.write(reinterpret_cast<const char*>(data_.data()),
            static_cast<std::streamsize>(data_.size() * sizeof(float)));
  WriteFile(index_dir / "embeddings.bin", bin.str());

  std::string ids;
  for (const auto& id : ids_) ids += id + "\n";
  WriteFile(index_dir / "embeddings.ids", ids);
  json meta = {{"model", model_id_}, {"d", dim_}, {"n", ids_.size()}};
  WriteFile(index_dir / "embeddings.json", meta.dump(2) + "\n");
}

EmbeddingIndex EmbeddingIndex::Read(const std::filesystem::path& index_dir) {
  auto bin_path = index_dir / "embeddings.bin";
  std::ifstream in(bin_path, std::ios::binary);
  if (!in) throw StoreError("missing " + bin_path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw StoreError(bin_path.string() + ": bad magic");
  }
  auto version = Get<std::uint32_t>(in, "version");
  if (version != kVersion) {
    throw StoreError(bin_path.string() + ": unsupported version " + std::to_string(version));
  }
  auto d = Get<std::uint32_t>(in, "dimension");
  auto n = Get<std::uint64_t>(in, "row count");
  if (d == 0) throw StoreError(bin_path.string() + ": zero dimension");

  EmbeddingIndex index;
  index.dim_ = d;
  index.data_.resize(static_cast<std::size_t>(n) * d);
  if (!in.read(reinterpret_cast<char*>(index.data_.data()),
               static_cast<std::streamsize>(index.data_.size() * sizeof(float)))) {
    throw StoreError(bin_path.string() + ": truncated vector data");
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw StoreError(bin_path.string() + ": trailing bytes");
  }

  index.ids_ = ReadLines(index_dir / "embeddings.ids");
  if (index.ids_.size() != n) {
    throw StoreError("embeddings.ids has " + std::to_string(index.ids_.size()) +
                     " rows, embeddings.bin has " + std::to_string(n));
  }
  auto meta_path = index_dir / "embeddings.json";
  if (std::filesystem::exists(meta_path)) {
    index.model_id_ = json::parse(ReadFile(meta_path)).value("model", "");
  }
  for (std::size_t i = 0; i < index.size(); ++i) {
    auto r = index.row(i);
    if (std::abs(std::sqrt(Dot(r, r)) - 1.0) > kNormTolerance) {
      throw StoreError("embedding row " + std::to_string(i) + " is not unit norm");
    }
  }
  return index;
}

EmbeddingIndex BuildEmbeddingIndex(const std::vector<extract::CandidatePhrase>& phrases,
                                   EmbeddingProvider& provider, std::size_t batch) {
  if (batch == 0) batch = 1;
  std::vector<std::string> unique;
  std::map<std::string, std::size_t> slot;
  for (const auto& p : phrases) {
    if (slot.emplace(p.text, unique.size()).second) unique.push_back(p.text);
  }
  std::vector<Vector> vecs;
  vecs.reserve(unique.size());
  for (std::size_t i = 0; i < unique.size(); i += batch) {
    std::size_t len = std::min(batch, unique.size() - i);
    auto got = provider.Embed(std::span(unique).subspan(i, len));
    if (got.size() != len) throw ProviderError("embedding provider returned wrong batch size");
    for (auto& v : got) vecs.push_back(std::move(v));
  }
  std::size_t dim = vecs.empty() ? 1 : vecs.front().size();
  EmbeddingIndex index(provider.id(), dim);
  for (const auto& p : phrases) index.Add(p.phrase_id, vecs[slot.at(p.text)]);
  return index;
}

std::vector<ShortlistEntry> Shortlist(std::span<const float> query, const EmbeddingIndex& index,
                                      std::size_t n, const std::vector<bool>& allowed) {
  if (query.size() != index.dim()) {
    throw ValidationError("query vector dimension does not match the index");
  }
  if (!allowed.empty() && allowed.size() != index.size()) {
    throw ValidationError("shortlist mask size does not match the index");
  }
  std::vector<ShortlistEntry> all;
  all.reserve(index.size());
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (!allowed.empty() && !allowed[i]) continue;
    all.push_back({i, Dot(query, index.row(i))});
  }
  const auto& ids = index.phrase_ids();
  auto better = [&](const ShortlistEntry& a, const ShortlistEntry& b) {
    if (a.cosine != b.cosine) return a.cosine > b.cosine;
    return ids[a.row] < ids[b.row];
  };
  std::size_t keep = std::min(n, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(),
                    better);
  all.resize(keep);
  return all;
}

}  // namespace barcode
