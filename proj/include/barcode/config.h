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

#ifndef BARCODE_CONFIG_H_
#define BARCODE_CONFIG_H_

// Settings tree with layered overrides: defaults < barcode.toml <
// BARCODE_* environment variables < command-line flags. Keys are dotted
// "section.key" paths; every key must exist in the defaults, and overrides
// keep the default's type.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace barcode {

// Parses the TOML subset used by barcode.toml: [table] and [a.b] headers,
// bare or quoted keys, basic and literal strings, integers, floats,
// booleans, single-line arrays of those, and # comments. Anything else is
// a ConfigError naming the line.
nlohmann::json ParseToml(std::string_view text, const std::string& source = "<toml>");

class Config {
 public:
  // Built-in defaults only; relative paths resolve against `base_dir`.
  Config();
  static nlohmann::json Defaults();

  // Defaults overlaid with the file. Relative paths in the file resolve
  // against its directory.
  static Config FromFile(const std::filesystem::path& path);
  static Config FromJson(const nlohmann::json& snapshot, std::filesystem::path base_dir = ".");

  // BARCODE_<SECTION>_<KEY>=value, e.g. BARCODE_BIO_TAU=0.4. Variables that
  // name no key are ignored; a value of the wrong type is a ConfigError.
  void ApplyEnvironment(const std::map<std::string, std::string>& env);
  void ApplyProcessEnvironment();

  // "section.key" = value, parsed to the default's type.
  void Set(const std::string& dotted, const std::string& value);
  void SetJson(const std::string& dotted, const nlohmann::json& value);

  const nlohmann::json& Get(const std::string& dotted) const;
  std::string GetString(const std::string& dotted) const;
  double GetDouble(const std::string& dotted) const;
  long long GetInt(const std::string& dotted) const;
  bool GetBool(const std::string& dotted) const;
  // Path value resolved against base_dir(); empty stays empty.
  std::filesystem::path GetPath(const std::string& dotted) const;

  // Range checks on the values the pipeline depends on.
  void Validate() const;

  const nlohmann::json& tree() const { return tree_; }
  const std::filesystem::path& base_dir() const { return base_dir_; }
  void set_base_dir(std::filesystem::path p) { base_dir_ = std::move(p); }

  // Effective settings as JSON (what gets logged and stored in bundles).
  nlohmann::json Snapshot() const { return tree_; }

 private:
  nlohmann::json tree_;
  std::filesystem::path base_dir_ = ".";
};

}  // namespace barcode

#endif  // BARCODE_CONFIG_H_
