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

#include <string>
#include <vector>

#include "bvi/errors.h"
#include "gtest/gtest.h"

namespace bvi {
namespace {

TEST(ConfigTest, ParsesTablesCommentsAndLists) {
  const ConfigValues v = ParseConfigText(R"(
# sweep over batch sizes
[problem]
kind = "policeman-burglar"
n = 50   # components
[solver]
methods = ["alg1", "mirror-prox"]
batches = [1, 2, 5, 10]
eta_grid = 0.1, 0.01
shared_batch = false
)",
                                         "sweep.toml");
  EXPECT_EQ(v.GetString("kind"), "policeman-burglar");
  EXPECT_EQ(v.GetInt("n"), 50);
  EXPECT_EQ(v.GetStringList("methods"),
            (std::vector<std::string>{"alg1", "mirror-prox"}));
  EXPECT_EQ(v.GetIntList("batches"), (std::vector<std::int64_t>{1, 2, 5, 10}));
  EXPECT_EQ(v.GetDoubleList("eta_grid"), (std::vector<double>{0.1, 0.01}));
  EXPECT_EQ(v.GetBool("shared_batch"), false);
  EXPECT_FALSE(v.GetDouble("eta").has_value());
}

TEST(ConfigTest, UnknownKeyIsAnErrorWithLine) {
  try {
    ParseConfigText("n = 5\nlearning_rate = 0.1\n", "c.toml");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("c.toml:2"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("learning_rate"), std::string::npos);
  }
}

TEST(ConfigTest, KeyOutsideAllowedSetIsRejected) {
  EXPECT_THROW(ParseConfigText("eta_grid = [0.1]\n", "c", {"n", "seed"}),
               ConfigError);
  EXPECT_NO_THROW(ParseConfigText("seed = 3\n", "c", {"n", "seed"}));
}

TEST(ConfigTest, TypeErrors) {
  EXPECT_THROW(ParseConfigText("n = fifty\n", "c"), ConfigError);
  EXPECT_THROW(ParseConfigText("eta = 1e-3x\n", "c"), ConfigError);
  EXPECT_THROW(ParseConfigText("shared_batch = yes\n", "c"), ConfigError);
  EXPECT_THROW(ParseConfigText("batches = [1, two]\n", "c"), ConfigError);
  EXPECT_THROW(ParseConfigText("batches = [1, 2\n", "c"), ConfigError);
  EXPECT_THROW(ParseConfigText("just words\n", "c"), ConfigError);
}

TEST(ConfigTest, LaterValuesOverride) {
  ConfigValues file = ParseConfigText("b = 2\nseed = 1\n", "f");
  ConfigValues flags;
  flags.Set("b", "5");
  file.Merge(flags);
  EXPECT_EQ(file.GetInt("b"), 5);
  EXPECT_EQ(file.GetInt("seed"), 1);
}

TEST(ConfigTest, SchemaKeysAreUnique) {
  const auto& schema = ConfigSchema();
  for (std::size_t i = 0; i < schema.size(); ++i) {
    EXPECT_FALSE(schema[i].help.empty());
    for (std::size_t j = i + 1; j < schema.size(); ++j) {
      EXPECT_NE(schema[i].name, schema[j].name);
    }
  }
  EXPECT_EQ(FindConfigKey("nope"), nullptr);
}

}  // namespace
}  // namespace bvi
