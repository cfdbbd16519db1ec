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

#ifndef BARCODE_COMMON_H_
#define BARCODE_COMMON_H_

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace barcode {

// Base class for every error the library raises on purpose. Anything else
// escaping the library is a bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration: malformed pattern files, config values out of range.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A model provider (parser, SRL, embedding, NLI) failed or is unavailable.
class ProviderError : public Error {
 public:
  using Error::Error;
};

// Caller supplied input that violates an operation's precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// On-disk data does not match what the reader expects (corrupt store,
// manifest mismatch, unsealed bundle).
class StoreError : public Error {
 public:
  using Error::Error;
};

// Half-open character range [start, end).
struct CharSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  bool empty() const { return end <= start; }
  friend bool operator==(const CharSpan&, const CharSpan&) = default;
  friend auto operator<=>(const CharSpan&, const CharSpan&) = default;
};

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view contents);

// Non-empty lines of a text file, trailing '\r' stripped. Lines starting
// with '#' are comments.
std::vector<std::string> ReadLines(const std::filesystem::path& path);

std::string Sha256Hex(std::string_view data);
std::string Sha256File(const std::filesystem::path& path);

std::string ToLower(std::string_view s);
std::string Trim(std::string_view s);
std::vector<std::string> Split(std::string_view s, char sep);

}  // namespace barcode

#endif  // BARCODE_COMMON_H_
