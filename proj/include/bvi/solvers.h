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

// Solvers for finite-sum monotone VIs in Bregman geometry.
//
// The main method is the optimistic variance-reduced scheme with negative
// momentum and batching. Each epoch s keeps a snapshot w_s with its cached
// F(w_s) and a dual-averaged anchor w_bar_s; each inner step k draws a batch
// B, forms
//
//   delta = (1/b) sum_{j in B} (F_j(x_k) - F_j(w) + F_j(x_k) - F_j(x_{k-1}))
//           + F(w)
//
// and takes x_{k+1} = argmin g + (1-gamma)/eta V(., x_k)
//                               + gamma/eta V(., w_bar) + <delta, .>.
// After K steps, w and grad h(w_bar) become the primal and dual means of the
// epoch's iterates x_1..x_K. The reported point is the running mean of all
// inner iterates.
//
// Two baselines share the oracle accounting: deterministic Mirror Prox
// (extragradient with two full operator calls per iteration) and a
// double-loop variance-reduced Mirror Prox.

#ifndef BVI_SOLVERS_H_
#define BVI_SOLVERS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "Eigen/Core"
#include "bvi/problems.h"
#include "bvi/rng.h"

namespace bvi {

enum class Method { kOptimistic, kMirrorProx, kVrMirrorProx };

// "alg1", "mirror-prox", "vr-mirror-prox".
std::string_view MethodName(Method method);
Method ParseMethod(std::string_view name);

std::string_view SamplingName(SamplingKind kind);
SamplingKind ParseSampling(std::string_view name);

// Which Lipschitz assumption drives the theoretical step size.
enum class TheoryVariant {
  kEuclideanLipschitz,  // L2 and bar L2, feasibility b <= sqrt(M) barL2 / L2
  kDualNormLipschitz,   // L in the dual norm, feasibility b <= sqrt(M)
};

struct SolverConfig {
  double eta = 0;
  double gamma = 0;
  // Recorded alongside gamma; the loop never draws with it.
  double p = 0;
  int batch_size = 1;
  int inner_iterations = 1;  // K
  std::int64_t epochs = 1;   // S
  std::uint64_t seed = 0;
  SamplingKind scheme = SamplingKind::kUniform;
  // One batch shared by all operator blocks instead of one batch per block.
  bool shared_batch = false;
  // Replace the sampled estimator by 2 F(x_k) - F(x_{k-1}) (charges 2M).
  bool exact_delta = false;

  // Throws DomainError when a field is out of range for M components.
  void Validate(Index num_components) const;
  std::string Fingerprint() const;
};

SolverConfig TheoreticalParams(Index num_components, int batch_size,
                               const LipschitzInfo& lipschitz,
                               TheoryVariant variant, double c, Index n,
                               std::int64_t epochs, double eta_scale = 8.0);

// Defaults for the double-loop baseline: K = M / (2b) inner steps (two
// component calls per sample), alpha = 1 - 1/K stored as gamma = 1 - alpha,
// step tau = 0.99 sqrt(1 - alpha) / bar L2 stored as eta.
SolverConfig VrMirrorProxDefaults(Index num_components, int batch_size,
                                  const LipschitzInfo& lipschitz,
                                  std::int64_t epochs);

struct SolverState {
  VectorXd x_cur;
  VectorXd x_prev;
  VectorXd w;
  VectorXd f_w;
  Dual w_bar_dual;
  VectorXd run_sum;
  std::int64_t run_count = 0;
  // Primal and dual sums of the current epoch's iterates.
  VectorXd epoch_sum;
  VectorXd epoch_dual_sum;
  int k = 0;
  std::int64_t s = 0;

  // run_sum / run_count, or x_cur before the first step.
  VectorXd Average() const;
};

// x_{-1} = x_0 = w_0 = start, grad h(w_bar_0) = grad h(start); charges M for
// F(w_0).
SolverState InitialState(const FiniteSumProblem& problem, const VectorXd& start,
                         OracleCounter& counter);

// One inner iteration. Draws the batch(es) from `rng`, charges 3b units.
void InnerStep(SolverState& state, const FiniteSumProblem& problem,
               const SolverConfig& config, CounterRng& rng,
               OracleCounter& counter);

// Snapshot refresh after exactly K inner steps. Charges M units.
void EpochEnd(SolverState& state, const FiniteSumProblem& problem,
              int inner_iterations, OracleCounter& counter);

struct TracePoint {
  std::int64_t oracle_calls = 0;
  double gap = 0;
  double elapsed_s = 0;

  friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

struct RunRecord {
  std::string method;
  std::string matrix;
  Index n = 0;
  int batch_size = 0;
  std::uint64_t seed = 0;
  double eta = 0;
  double gamma = 0;
  std::string fingerprint;

  std::vector<TracePoint> trace;
  VectorXd x_final;
  std::int64_t solver_calls = 0;
  std::int64_t gap_calls = 0;
  std::int64_t inner_steps = 0;
  std::int64_t epochs_completed = 0;
  // Every inner iterate, when TraceOptions::keep_iterates is set.
  std::vector<VectorXd> iterates;

  double final_gap() const { return trace.empty() ? 0.0 : trace.back().gap; }
};

struct TraceOptions {
  // Record the gap of the averaged point whenever the solver's oracle count
  // crosses a multiple of gap_every. Gap evaluations are charged to
  // RunRecord::gap_calls, not to the solver.
  std::int64_t gap_every = 1;
  bool record_time = false;
  bool keep_iterates = false;
  // Defaults to the geometry's center point.
  std::optional<VectorXd> start;
};

// Runs until the next operation would exceed `budget` oracle units or
// config.epochs epochs are done. The initial evaluation F(w_0) is always
// performed; the trace starts with the gap of the start point at 0 calls.
RunRecord Run(const FiniteSumProblem& problem, const SolverConfig& config,
              std::int64_t budget, const TraceOptions& options);

// Extragradient in Bregman geometry, 2M units per iteration; reports the
// running mean of the extrapolated points.
RunRecord MirrorProx(const FiniteSumProblem& problem, double eta,
                     std::int64_t iterations, const TraceOptions& options);

// Double-loop variance-reduced Mirror Prox. Per epoch: snapshot w with F(w)
// and dual anchor w_bar; per inner step
//   x_half = prox(x_k, w_bar, 1 - alpha, tau, F(w))
//   g      = F(w) + (1/b) sum_j (F_j(x_half) - F_j(w)) / (M r_j)
//   x_next = prox(x_k, w_bar, 1 - alpha, tau, g)
// with 1 - alpha = config.gamma and tau = config.eta. Reports the running mean
// of x_half.
RunRecord VrMirrorProx(const FiniteSumProblem& problem,
                       const SolverConfig& config, std::int64_t budget,
                       const TraceOptions& options);

}  // namespace bvi

#endif  // BVI_SOLVERS_H_
