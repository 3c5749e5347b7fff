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

#include "bvi/config.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bvi/errors.h"

namespace bvi {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string Unquote(std::string_view s) {
  s = Trim(s);
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\''))) {
    s = s.substr(1, s.size() - 2);
  }
  return std::string(s);
}

// Drops a trailing # comment that is not inside quotes.
std::string_view StripComment(std::string_view line) {
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_quotes = !in_quotes;
    if (line[i] == '#' && !in_quotes) return line.substr(0, i);
  }
  return line;
}

std::string Normalize(const ConfigKey& key, std::string_view raw) {
  std::string_view v = Trim(raw);
  const bool is_list = key.type == ValueType::kIntList ||
                       key.type == ValueType::kDoubleList ||
                       key.type == ValueType::kStringList;
  if (is_list) {
    if (!v.empty() && v.front() == '[') {
      if (v.back() != ']') {
        throw ConfigError("key '" + key.name + "': unterminated list");
      }
      v = v.substr(1, v.size() - 2);
    }
    std::string out;
    for (const std::string& item : SplitList(v)) {
      if (!out.empty()) out += ',';
      out += Unquote(item);
    }
    return out;
  }
  return Unquote(v);
}

void CheckType(const ConfigKey& key, const std::string& value) {
  const std::string what = "key '" + key.name + "'";
  switch (key.type) {
    case ValueType::kString:
      return;
    case ValueType::kInt:
      ParseInt(value, what);
      return;
    case ValueType::kDouble:
      ParseDouble(value, what);
      return;
    case ValueType::kBool:
      if (value != "true" && value != "false") {
        throw ConfigError(what + ": expected true or false, got '" + value + "'");
      }
      return;
    case ValueType::kIntList:
      for (const std::string& item : SplitList(value)) ParseInt(item, what);
      return;
    case ValueType::kDoubleList:
      for (const std::string& item : SplitList(value)) ParseDouble(item, what);
      return;
    case ValueType::kStringList:
      return;
  }
}

}  // namespace

const std::vector<ConfigKey>& ConfigSchema() {
  static const std::vector<ConfigKey> kSchema = {
      {"config", ValueType::kString, "config file; flags override its keys"},
      {"kind", ValueType::kString, "matrix generator: policeman-burglar | ramp"},
      {"matrix", ValueType::kString, "matrix file (.bvi binary or .csv); replaces the generator"},
      {"n", ValueType::kInt, "matrix size; the game has M = n components"},
      {"M", ValueType::kInt, "number of components (alias for n)"},
      {"theta", ValueType::kDouble, "policeman-burglar decay (default 0.8)"},
      {"matrix_seed", ValueType::kInt, "generator seed (defaults to seed)"},
      {"seed", ValueType::kInt, "random seed"},
      {"seeds", ValueType::kIntList, "seeds for sweep/tune (default: seed)"},
      {"method", ValueType::kString, "alg1 | mirror-prox | vr-mirror-prox"},
      {"methods", ValueType::kStringList, "methods for sweep"},
      {"theory", ValueType::kString, "cor1 | cor2 | none (alg1 parameter rule)"},
      {"eta", ValueType::kDouble, "step size (overrides theory)"},
      {"gamma", ValueType::kDouble, "momentum weight (overrides theory)"},
      {"eta_scale", ValueType::kDouble, "denominator in the theoretical step (default 8)"},
      {"C", ValueType::kDouble, "constant in 1 + C ln n (default 1)"},
      {"b", ValueType::kInt, "batch size (default 1)"},
      {"batches", ValueType::kIntList, "batch sizes for sweep"},
      {"budget", ValueType::kInt, "oracle budget in component calls (default 200 M)"},
      {"budget_m", ValueType::kDouble, "oracle budget in multiples of M"},
      {"gap_every", ValueType::kInt, "record the gap every this many calls (default M)"},
      {"scheme", ValueType::kString, "uniform | importance (default importance)"},
      {"shared_batch", ValueType::kBool, "one batch for both players"},
      {"record_time", ValueType::kBool, "write wall time to elapsed_s"},
      {"eta_grid", ValueType::kDoubleList, "tune: step sizes"},
      {"gamma_grid", ValueType::kDoubleList, "tune: momentum weights"},
      {"parallel", ValueType::kInt, "concurrent cells (default $BVI_THREADS or 1)"},
      {"out", ValueType::kString, "output file or directory"},
      {"inputs", ValueType::kStringList, "plot: trace CSV files"},
  };
  return kSchema;
}

const ConfigKey* FindConfigKey(std::string_view name) {
  for (const ConfigKey& key : ConfigSchema()) {
    if (key.name == name) return &key;
  }
  return nullptr;
}

std::vector<std::string> SplitList(std::string_view text) {
  std::vector<std::string> items;
  if (Trim(text).empty()) return items;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    items.emplace_back(Trim(text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return items;
}

double ParseDouble(std::string_view text, std::string_view what) {
  text = Trim(text);
  double value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() ||
      !std::isfinite(value)) {
    throw ConfigError(std::string(what) + ": expected a number, got '" +
                      std::string(text) + "'");
  }
  return value;
}

std::int64_t ParseInt(std::string_view text, std::string_view what) {
  text = Trim(text);
  std::int64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(std::string(what) + ": expected an integer, got '" +
                      std::string(text) + "'");
  }
  return value;
}

void ConfigValues::Set(std::string_view key, std::string_view raw) {
  const ConfigKey* spec = FindConfigKey(key);
  if (spec == nullptr) {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
  std::string value = Normalize(*spec, raw);
  CheckType(*spec, value);
  values_.insert_or_assign(std::string(key), std::move(value));
}

bool ConfigValues::Has(std::string_view key) const {
  return values_.find(key) != values_.end();
}

void ConfigValues::Merge(const ConfigValues& other) {
  for (const auto& [k, v] : other.values_) values_.insert_or_assign(k, v);
}

std::optional<std::string> ConfigValues::GetString(std::string_view key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::int64_t> ConfigValues::GetInt(std::string_view key) const {
  const auto v = GetString(key);
  if (!v) return std::nullopt;
  return ParseInt(*v, key);
}

std::optional<double> ConfigValues::GetDouble(std::string_view key) const {
  const auto v = GetString(key);
  if (!v) return std::nullopt;
  return ParseDouble(*v, key);
}

std::optional<bool> ConfigValues::GetBool(std::string_view key) const {
  const auto v = GetString(key);
  if (!v) return std::nullopt;
  return *v == "true";
}

std::optional<std::vector<std::int64_t>> ConfigValues::GetIntList(
    std::string_view key) const {
  const auto v = GetString(key);
  if (!v) return std::nullopt;
  std::vector<std::int64_t> out;
  for (const std::string& item : SplitList(*v)) out.push_back(ParseInt(item, key));
  return out;
}

std::optional<std::vector<double>> ConfigValues::GetDoubleList(
    std::string_view key) const {
  const auto v = GetString(key);
  if (!v) return std::nullopt;
  std::vector<double> out;
  for (const std::string& item : SplitList(*v)) {
    out.push_back(ParseDouble(item, key));
  }
  return out;
}

std::optional<std::vector<std::string>> ConfigValues::GetStringList(
    std::string_view key) const {
  const auto v = GetString(key);
  if (!v) return std::nullopt;
  return SplitList(*v);
}

ConfigValues ParseConfigText(std::string_view text, std::string_view source,
                             const std::vector<std::string>& allowed) {
  ConfigValues values;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw ConfigError(std::string(source) + ":" + std::to_string(line_no) +
                      ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = Trim(StripComment(line));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']' || body.size() < 3) fail("malformed table header");
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) fail("expected key = value");
    const std::string key(Trim(body.substr(0, eq)));
    if (key == "config") fail("'config' cannot be set from a config file");
    if (!allowed.empty() &&
        std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(FindConfigKey(key) ? "key '" + key + "' does not apply here"
                              : "unknown config key '" + key + "'");
    }
    try {
      values.Set(key, body.substr(eq + 1));
    } catch (const ConfigError& e) {
      fail(e.what());
    }
  }
  return values;
}

ConfigValues LoadConfigFile(const std::filesystem::path& path,
                            const std::vector<std::string>& allowed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return ParseConfigText(text.str(), path.string(), allowed);
}

}  // namespace bvi
