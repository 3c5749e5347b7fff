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

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "bvi/matrix_io.h"
#include "bvi/trace_csv.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace bvi {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string output;
};

Result Cli(const fs::path& dir, const std::string& args) {
  const std::string command =
      "cd '" + dir.string() + "' && '" BVI_BINARY "' " + args + " 2>&1";
  Result result;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return result;
  char buffer[4096];
  std::size_t read;
  while ((read = std::fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
    result.output.append(buffer, read);
  }
  const int status = pclose(pipe);
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

bool Contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

TEST(CliTest, GenIsDeterministic) {
  const fs::path dir = testing::ScratchDir("cli_gen");
  ASSERT_EQ(Cli(dir, "gen --n 12 --seed 3 --out a.bvi").code, 0);
  ASSERT_EQ(Cli(dir, "gen --n 12 --seed 3 --out b.bvi").code, 0);
  EXPECT_EQ(ReadFileBytes(dir / "a.bvi"), ReadFileBytes(dir / "b.bvi"));
  EXPECT_EQ(DecodeMatrix(ReadFileBytes(dir / "a.bvi")).rows(), 12);
  const std::string meta = ReadFileBytes(dir / "a.bvi.json");
  EXPECT_TRUE(Contains(meta, "\"crc32\""));
  EXPECT_TRUE(Contains(meta, "\"seed\": 3"));
}

TEST(CliTest, GenRampAndUnknownKind) {
  const fs::path dir = testing::ScratchDir("cli_kind");
  ASSERT_EQ(Cli(dir, "gen --kind ramp --n 4 --out r.bvi").code, 0);
  EXPECT_EQ(LoadMatrix(dir / "r.bvi")(3, 3), 1.0);
  const Result bad = Cli(dir, "gen --kind hilbert --out h.bvi");
  EXPECT_EQ(bad.code, 2);
  EXPECT_TRUE(Contains(bad.output, "policeman-burglar, ramp")) << bad.output;
}

TEST(CliTest, RunHeaderShowsTheoryParameters) {
  const fs::path dir = testing::ScratchDir("cli_header");
  const Result r =
      Cli(dir, "run --M 300 --b 1 --theory cor1 --budget 600 --gap-every 300 "
               "--out t.csv");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_TRUE(Contains(r.output, "K=100 gamma=0.01")) << r.output;
  EXPECT_TRUE(Contains(r.output, "final_gap="));
}

TEST(CliTest, RunIsReproducible) {
  const fs::path dir = testing::ScratchDir("cli_repro");
  const std::string args = "run --M 20 --b 2 --seed 9 --budget 400 --gap-every 20 ";
  ASSERT_EQ(Cli(dir, args + "--out a.csv").code, 0);
  ASSERT_EQ(Cli(dir, args + "--out b.csv").code, 0);
  EXPECT_EQ(ReadFileBytes(dir / "a.csv"), ReadFileBytes(dir / "b.csv"));
  EXPECT_EQ(ReadTraceCsvFile(dir / "a.csv").size(), 1u);
}

TEST(CliTest, InfeasibleBatchExitsThree) {
  const fs::path dir = testing::ScratchDir("cli_feasible");
  const Result r = Cli(dir, "run --M 300 --theory cor2 --b 9999 --budget 100");
  EXPECT_EQ(r.code, 3);
  EXPECT_TRUE(Contains(r.output, "b ≤ √M")) << r.output;
}

TEST(CliTest, SweepRowsAndParallelIndependence) {
  const fs::path dir = testing::ScratchDir("cli_sweep");
  const std::string args =
      "sweep --M 16 --budget-m 6 --gap-every 16 --batches 1,2 "
      "--methods alg1,mirror-prox,vr-mirror-prox --seeds 1,2 ";
  const Result serial = Cli(dir, args + "--parallel 1 --out p1");
  ASSERT_EQ(serial.code, 0) << serial.output;
  ASSERT_EQ(Cli(dir, args + "--parallel 4 --out p4").code, 0);
  EXPECT_EQ(ReadTraceCsvFile(dir / "p1" / "sweep.csv").size(), 2u * 3 * 2);
  EXPECT_EQ(ReadFileBytes(dir / "p1" / "sweep.csv"),
            ReadFileBytes(dir / "p4" / "sweep.csv"));
}

TEST(CliTest, TuneSingletonGrid) {
  const fs::path dir = testing::ScratchDir("cli_tune");
  const Result r =
      Cli(dir, "tune --M 16 --eta-grid 0.02 --gamma-grid 0.2 --budget 300 --out t");
  ASSERT_EQ(r.code, 0) << r.output;
  const std::string board = ReadFileBytes(dir / "t" / "leaderboard.csv");
  EXPECT_EQ(board, "rank,eta,gamma,final_gap\n1,0.02,0.2," +
                       board.substr(board.rfind(',') + 1));
}

TEST(CliTest, PlotFromSweepAndEmptyInput) {
  const fs::path dir = testing::ScratchDir("cli_plot");
  ASSERT_EQ(Cli(dir, "sweep --M 10 --budget-m 4 --gap-every 10 --batches 1,2 --out s")
                .code,
            0);
  ASSERT_EQ(Cli(dir, "plot s/sweep.csv --out p.svg").code, 0);
  EXPECT_TRUE(Contains(ReadFileBytes(dir / "p.svg"), "<polyline"));
  const Result empty = Cli(dir, "plot --out q.svg");
  EXPECT_NE(empty.code, 0);
  EXPECT_TRUE(Contains(empty.output, "no data"));
}

TEST(CliTest, HelpListsKeys) {
  const Result r = Cli(testing::ScratchDir("cli_help"), "run --help");
  EXPECT_EQ(r.code, 0);
  for (const char* key : {"--eta", "--gamma", "--b", "--budget", "--gap-every",
                          "--theory", "--config"}) {
    EXPECT_TRUE(Contains(r.output, key)) << key;
  }
}

TEST(CliTest, ConfigFileWithFlagOverride) {
  const fs::path dir = testing::ScratchDir("cli_config");
  WriteFileBytes(dir / "c.toml", "M = 300\nb = 2\nbudget = 1200\ngap_every = 600\n");
  const Result r = Cli(dir, "run --config c.toml --b 1 --out t.csv");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_TRUE(Contains(r.output, "b=1 K=100")) << r.output;
  WriteFileBytes(dir / "bad.toml", "M = 30\nstep = 0.1\n");
  const Result bad = Cli(dir, "run --config bad.toml");
  EXPECT_EQ(bad.code, 2);
  EXPECT_TRUE(Contains(bad.output, "bad.toml:2")) << bad.output;
}

TEST(CliTest, MissingMatrixFileExitsFour) {
  const Result r = Cli(testing::ScratchDir("cli_io"), "run --matrix absent.bvi");
  EXPECT_EQ(r.code, 4);
}

}  // namespace
}  // namespace bvi
