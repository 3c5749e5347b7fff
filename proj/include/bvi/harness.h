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

// Experiment harness: test matrices, batch sweeps, grid search and
// aggregation of traces across seeds. Budgets are always in oracle units.

#ifndef BVI_HARNESS_H_
#define BVI_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "Eigen/Core"
#include "bvi/matrix_game.h"
#include "bvi/solvers.h"

namespace bvi {

inline constexpr double kDefaultPolicemanTheta = 0.8;

// A_ij = |w_i| (1 - exp(-theta |i - j|)), w_i the i-th CounterRng(seed)
// normal draw.
MatrixXd GeneratePolicemanBurglar(Index n, std::uint64_t seed,
                                  double theta = kDefaultPolicemanTheta);

// A_ij = (i + j - 1) / (2n - 1) with 1-based indices.
MatrixXd GenerateRampMatrix(Index n);

struct MatrixSource {
  // "policeman-burglar", "ramp", or empty when reading `file`.
  std::string generator = "policeman-burglar";
  Index n = 50;
  std::uint64_t seed = 0;
  double theta = kDefaultPolicemanTheta;
  std::filesystem::path file;

  MatrixXd Load() const;
  // Short name written to the `matrix` CSV column.
  std::string Label() const;
};

struct MethodSpec {
  Method method = Method::kOptimistic;
  // Theory-driven parameters (alg1 only); explicit eta/gamma override them.
  std::optional<TheoryVariant> theory = TheoryVariant::kEuclideanLipschitz;
  std::optional<double> eta;
  std::optional<double> gamma;
  double c = 1.0;
  double eta_scale = 8.0;
  SamplingKind scheme = SamplingKind::kImportance;
  bool shared_batch = false;
};

// Parameters a method would run with on `game` at batch size b.
SolverConfig ResolveConfig(const MatrixGame& game, const MethodSpec& spec,
                           int batch_size, std::uint64_t seed);

// Mirror Prox default step 1 / max_ij |A_ij|.
double DefaultMirrorProxStep(const MatrixGame& game);

// Runs one (method, batch, seed) cell with an oracle budget.
RunRecord RunCell(const MatrixGame& game, const MethodSpec& spec,
                  int batch_size, std::uint64_t seed, std::int64_t budget,
                  const TraceOptions& options);

struct ExperimentPlan {
  MatrixSource source;
  std::vector<MethodSpec> methods;
  std::vector<int> batches;
  std::int64_t budget = 0;
  std::int64_t gap_every = 1;
  std::vector<std::uint64_t> seeds;
  // Empty: nothing written.
  std::filesystem::path output_dir;
  int parallel = 1;
  bool record_time = false;

  void Validate() const;
};

// One record per (method, batch, seed) in that nesting order, independent of
// `parallel`. Writes <output_dir>/sweep.csv when output_dir is set.
std::vector<RunRecord> SweepBatches(const ExperimentPlan& plan);

struct LeaderboardEntry {
  double eta = 0;
  double gamma = 0;
  // Median over seeds; +inf for diverged runs.
  double final_gap = 0;
  std::vector<double> seed_gaps;
};

struct GridSearchResult {
  SolverConfig best;
  // Sorted by final gap, ties toward smaller eta then smaller gamma.
  std::vector<LeaderboardEntry> leaderboard;
};

GridSearchResult GridSearch(const MatrixGame& game, const MethodSpec& method,
                            int batch_size, const std::vector<double>& eta_grid,
                            const std::vector<double>& gamma_grid,
                            std::int64_t budget,
                            const std::vector<std::uint64_t>& seeds,
                            int parallel = 1);

struct SummaryRow {
  std::string method;
  std::string matrix;
  Index n = 0;
  int batch_size = 0;
  double eta = 0;
  double gamma = 0;
  std::int64_t oracle_calls = 0;
  double median = 0;
  double q1 = 0;
  double q3 = 0;
  int count = 0;
};

// Median and quartiles (linear interpolation) of the gap at each checkpoint,
// per configuration, across seeds. Rows are sorted by configuration key.
// Throws DomainError on empty input or inconsistent checkpoint sequences.
std::vector<SummaryRow> Aggregate(const std::vector<RunRecord>& records);

// Oracle calls at the first trace point whose gap is <= target.
std::optional<std::int64_t> CallsToTarget(const RunRecord& record,
                                          double target);

double Median(std::vector<double> values);
// Linear-interpolation quantile, q in [0, 1].
double Quantile(std::vector<double> values, double q);

}  // namespace bvi

#endif  // BVI_HARNESS_H_
