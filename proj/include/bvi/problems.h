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

// Finite-sum variational inequality problems F = (1/M) sum_m F_m, stochastic
// component sampling and the variance-reduced optimistic estimator.

#ifndef BVI_PROBLEMS_H_
#define BVI_PROBLEMS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "Eigen/Core"
#include "bvi/geometry.h"
#include "bvi/rng.h"

namespace bvi {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using Geometry = MirrorMap<double>;
using Dual = DualVector<double>;

struct LipschitzInfo {
  double l2 = 0;      // l2 constant of F
  double bar_l2 = 0;  // sqrt((1/M) sum_m L_{2,m}^2)
  double l = 0;       // dual-norm constant of the components

  // Throws DomainError on negative or non-finite entries.
  void Validate() const;
};

// Oracle calls in component units: one F_m evaluation costs 1, a full F
// evaluation costs M.
class OracleCounter {
 public:
  void Charge(std::int64_t units);
  std::int64_t calls() const { return calls_; }

 private:
  std::int64_t calls_ = 0;
};

class FiniteSumProblem {
 public:
  virtual ~FiniteSumProblem() = default;

  virtual Index num_components() const = 0;
  virtual Index dim() const = 0;
  virtual const Geometry& geometry() const = 0;
  virtual const LipschitzInfo& lipschitz() const = 0;

  // Operator blocks that may be sampled independently (e.g. the x- and
  // y-parts of a saddle operator). One block spanning everything by default.
  virtual int num_blocks() const { return 1; }
  virtual Block block(int b) const;

  // out.segment(block b) += scale * [F_m(z)] restricted to block b.
  virtual void AddComponent(Index m, int b, const VectorXd& z, double scale,
                            VectorXd& out) const = 0;

  // Full operator F(z) = (1/M) sum_m F_m(z).
  virtual VectorXd Operator(const VectorXd& z) const;

  // Per-component magnitudes used to build importance weights for block b
  // from a primal difference vector d. Default: all ones (uniform).
  virtual VectorXd SamplingSignal(int b, const VectorXd& d) const;

  // Duality gap of z. Default throws DomainError (no gap oracle).
  virtual double Gap(const VectorXd& z) const;

  // F_m(z) on all blocks.
  VectorXd Component(Index m, const VectorXd& z) const;
};

// F_m(z) = B_m z + c_m on R^n with Euclidean geometry. Lipschitz constants are
// computed from spectral norms of the B_m.
class LinearOperatorProblem : public FiniteSumProblem {
 public:
  LinearOperatorProblem(std::vector<MatrixXd> matrices,
                        std::vector<VectorXd> offsets);

  Index num_components() const override { return Index(matrices_.size()); }
  Index dim() const override { return geometry_.dim(); }
  const Geometry& geometry() const override { return geometry_; }
  const LipschitzInfo& lipschitz() const override { return lipschitz_; }
  void AddComponent(Index m, int b, const VectorXd& z, double scale,
                    VectorXd& out) const override;

 private:
  std::vector<MatrixXd> matrices_;
  std::vector<VectorXd> offsets_;
  Geometry geometry_;
  LipschitzInfo lipschitz_;
};

enum class SamplingKind { kUniform, kImportance };

struct SamplingScheme {
  SamplingKind kind = SamplingKind::kUniform;
  VectorXd probabilities;

  static SamplingScheme Uniform(Index m);
  // Probabilities from ImportanceDistribution(d).
  static SamplingScheme Importance(const VectorXd& d);
};

// r_i = |d_i| / |d|_1, or uniform when d = 0.
VectorXd ImportanceDistribution(const VectorXd& d);

// b indices drawn independently (with replacement) from the scheme by
// inverse-CDF lookup of CounterRng::Uniform() draws. Zero-probability indices
// are never returned.
std::vector<Index> DrawBatch(const SamplingScheme& scheme, int b,
                             CounterRng& rng);

// A batch for one operator block together with the distribution it was
// drawn from.
struct BlockSample {
  std::vector<Index> indices;
  SamplingScheme scheme;
};

// Variance-reduced optimistic estimator
//   delta = F(w) + (1/b) sum_{j in B} (F_j(x_cur) - F_j(w)
//                                      + F_j(x_cur) - F_j(x_prev)) / (M r_j)
// evaluated block by block. `samples` holds one entry per block, or a single
// entry shared by every block. All batches must have the same size b; the
// counter is charged 3 b units.
VectorXd EstimateDelta(const FiniteSumProblem& problem, OracleCounter& counter,
                       const VectorXd& x_cur, const VectorXd& x_prev,
                       const VectorXd& w, const VectorXd& f_w,
                       std::span<const BlockSample> samples);

// Snapshot-corrected estimator F(w) + (1/b) sum_j (F_j(x) - F_j(w)) / (M r_j)
// used by the double-loop baseline. Charges 2 b units.
VectorXd EstimateSnapshotCorrection(const FiniteSumProblem& problem,
                                    OracleCounter& counter, const VectorXd& x,
                                    const VectorXd& w, const VectorXd& f_w,
                                    std::span<const BlockSample> samples);

// Spectral norm by power iteration on A^T A, stopping when the relative change
// of the estimate falls below `tolerance`.
double SpectralNorm(const MatrixXd& a, double tolerance = 1e-8,
                    int max_iterations = 100000);

}  // namespace bvi

#endif  // BVI_PROBLEMS_H_
