// Copyright 2026 The bvi Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Flat key = value configuration, shared by config files and CLI flags.
//
//   # comment
//   [solver]          # tables group keys; names stay flat
//   method = "alg1"
//   batches = [1, 2, 5, 10]
//
// Every key is declared in the schema; unknown keys are rejected.

#ifndef BVI_CONFIG_H_
#define BVI_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bvi {

enum class ValueType { kString, kInt, kDouble, kBool, kIntList, kDoubleList,
                       kStringList };

struct ConfigKey {
  std::string name;
  ValueType type;
  std::string help;
};

const std::vector<ConfigKey>& ConfigSchema();
// Nullptr for an unknown key.
const ConfigKey* FindConfigKey(std::string_view name);

class ConfigValues {
 public:
  // Validates the key and the value's type; throws ConfigError.
  void Set(std::string_view key, std::string_view raw);
  bool Has(std::string_view key) const;
  // Values from `other` replace ours.
  void Merge(const ConfigValues& other);

  std::optional<std::string> GetString(std::string_view key) const;
  std::optional<std::int64_t> GetInt(std::string_view key) const;
  std::optional<double> GetDouble(std::string_view key) const;
  std::optional<bool> GetBool(std::string_view key) const;
  std::optional<std::vector<std::int64_t>> GetIntList(std::string_view key) const;
  std::optional<std::vector<double>> GetDoubleList(std::string_view key) const;
  std::optional<std::vector<std::string>> GetStringList(std::string_view key) const;

  const std::map<std::string, std::string, std::less<>>& raw() const {
    return values_;
  }

 private:
  // Normalized text: quotes and list brackets stripped.
  std::map<std::string, std::string, std::less<>> values_;
};

// `allowed` restricts the schema (e.g. to one subcommand); empty allows all.
ConfigValues ParseConfigText(std::string_view text, std::string_view source,
                             const std::vector<std::string>& allowed = {});
ConfigValues LoadConfigFile(const std::filesystem::path& path,
                            const std::vector<std::string>& allowed = {});

// Comma-separated list items, surrounding whitespace removed.
std::vector<std::string> SplitList(std::string_view text);
double ParseDouble(std::string_view text, std::string_view what);
std::int64_t ParseInt(std::string_view text, std::string_view what);

}  // namespace bvi

#endif  // BVI_CONFIG_H_
