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

#include "bvi/problems.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "bvi/errors.h"

namespace bvi {

void LipschitzInfo::Validate() const {
  for (double v : {l2, bar_l2, l}) {
    if (!std::isfinite(v) || v < 0) {
      throw DomainError("Lipschitz constants must be finite and nonnegative");
    }
  }
}

void OracleCounter::Charge(std::int64_t units) {
  if (units < 0) throw DomainError("oracle charge must be nonnegative");
  calls_ += units;
}

Block FiniteSumProblem::block(int b) const {
  if (b != 0) throw DomainError("block index out of range");
  return {0, dim()};
}

VectorXd FiniteSumProblem::Operator(const VectorXd& z) const {
  const Index m_total = num_components();
  VectorXd out = VectorXd::Zero(dim());
  for (Index m = 0; m < m_total; ++m) {
    for (int b = 0; b < num_blocks(); ++b) {
      AddComponent(m, b, z, 1.0 / double(m_total), out);
    }
  }
  return out;
}

VectorXd FiniteSumProblem::SamplingSignal(int /*b*/, const VectorXd& /*d*/) const {
  return VectorXd::Ones(num_components());
}

double FiniteSumProblem::Gap(const VectorXd& /*z*/) const {
  throw DomainError("problem does not provide a gap oracle");
}

VectorXd FiniteSumProblem::Component(Index m, const VectorXd& z) const {
  VectorXd out = VectorXd::Zero(dim());
  for (int b = 0; b < num_blocks(); ++b) AddComponent(m, b, z, 1.0, out);
  return out;
}

LinearOperatorProblem::LinearOperatorProblem(std::vector<MatrixXd> matrices,
                                             std::vector<VectorXd> offsets)
    : matrices_(std::move(matrices)),
      offsets_(std::move(offsets)),
      geometry_(Geometry::Euclidean(
          matrices_.empty() ? 0 : std::max<Index>(matrices_[0].rows(), 1))) {
  if (matrices_.empty() || matrices_.size() != offsets_.size()) {
    throw DimensionError("need one offset per component matrix");
  }
  const Index n = matrices_[0].rows();
  MatrixXd mean = MatrixXd::Zero(n, n);
  double sum_sq = 0;
  for (std::size_t m = 0; m < matrices_.size(); ++m) {
    if (matrices_[m].rows() != n || matrices_[m].cols() != n ||
        offsets_[m].size() != n) {
      throw DimensionError("component " + std::to_string(m) +
                           " has inconsistent shape");
    }
    const double norm = SpectralNorm(matrices_[m]);
    sum_sq += norm * norm;
    lipschitz_.l = std::max(lipschitz_.l, norm);
    mean += matrices_[m];
  }
  mean /= double(matrices_.size());
  lipschitz_.l2 = SpectralNorm(mean);
  lipschitz_.bar_l2 = std::sqrt(sum_sq / double(matrices_.size()));
}

void LinearOperatorProblem::AddComponent(Index m, int /*b*/, const VectorXd& z,
                                         double scale, VectorXd& out) const {
  out.noalias() += scale * (matrices_[m] * z + offsets_[m]);
}

SamplingScheme SamplingScheme::Uniform(Index m) {
  if (m <= 0) throw DomainError("uniform sampling needs at least one index");
  return {SamplingKind::kUniform, VectorXd::Constant(m, 1.0 / double(m))};
}

SamplingScheme SamplingScheme::Importance(const VectorXd& d) {
  return {SamplingKind::kImportance, ImportanceDistribution(d)};
}

VectorXd ImportanceDistribution(const VectorXd& d) {
  if (d.size() == 0) throw DomainError("importance distribution of empty vector");
  const double total = d.lpNorm<1>();
  if (!(total > 0) || !std::isfinite(total)) {
    return VectorXd::Constant(d.size(), 1.0 / double(d.size()));
  }
  return d.cwiseAbs() / total;
}

std::vector<Index> DrawBatch(const SamplingScheme& scheme, int b,
                             CounterRng& rng) {
  if (b <= 0) throw DomainError("batch size must be positive");
  const VectorXd& r = scheme.probabilities;
  std::vector<double> cumulative(r.size());
  double acc = 0;
  Index last_positive = -1;
  for (Index i = 0; i < r.size(); ++i) {
    acc += r[i];
    cumulative[i] = acc;
    if (r[i] > 0) last_positive = i;
  }
  if (last_positive < 0) throw DomainError("sampling distribution has no mass");
  std::vector<Index> batch(b);
  for (int k = 0; k < b; ++k) {
    const double u = rng.Uniform() * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    Index j = Index(it - cumulative.begin());
    batch[k] = std::min(j, last_positive);
  }
  return batch;
}

namespace {

void CheckSamples(const FiniteSumProblem& problem,
                  std::span<const BlockSample> samples) {
  if (samples.size() != 1 && samples.size() != std::size_t(problem.num_blocks())) {
    throw DimensionError("need one batch per operator block or one shared batch");
  }
  const std::size_t b = samples[0].indices.size();
  for (const BlockSample& s : samples) {
    if (s.indices.empty()) throw DomainError("empty batch");
    if (s.indices.size() != b) throw DimensionError("block batches differ in size");
    if (s.scheme.probabilities.size() != problem.num_components()) {
      throw DimensionError("sampling weights do not match component count");
    }
    for (Index j : s.indices) {
      if (j < 0 || j >= problem.num_components()) {
        throw DomainError("sampled index out of range");
      }
      if (!(s.scheme.probabilities[j] > 0)) {
        throw DomainError("sampled index " + std::to_string(j) +
                          " has zero sampling weight");
      }
    }
  }
}

void CheckPoint(const FiniteSumProblem& problem, const VectorXd& v,
                const char* what) {
  if (v.size() != problem.dim()) {
    throw DimensionError(std::string(what) + " has wrong dimension");
  }
}

}  // namespace

VectorXd EstimateDelta(const FiniteSumProblem& problem, OracleCounter& counter,
                       const VectorXd& x_cur, const VectorXd& x_prev,
                       const VectorXd& w, const VectorXd& f_w,
                       std::span<const BlockSample> samples) {
  if (samples.empty()) throw DomainError("empty batch");
  CheckSamples(problem, samples);
  CheckPoint(problem, x_cur, "x_cur");
  CheckPoint(problem, x_prev, "x_prev");
  CheckPoint(problem, w, "w");
  CheckPoint(problem, f_w, "F(w)");
  const double m_total = double(problem.num_components());
  const std::size_t b = samples[0].indices.size();
  VectorXd delta = f_w;
  for (int blk = 0; blk < problem.num_blocks(); ++blk) {
    const BlockSample& s = samples.size() == 1 ? samples[0] : samples[blk];
    for (Index j : s.indices) {
      const double weight =
          1.0 / (double(b) * m_total * s.scheme.probabilities[j]);
      problem.AddComponent(j, blk, x_cur, 2.0 * weight, delta);
      problem.AddComponent(j, blk, w, -weight, delta);
      problem.AddComponent(j, blk, x_prev, -weight, delta);
    }
  }
  counter.Charge(3 * std::int64_t(b));
  return delta;
}

VectorXd EstimateSnapshotCorrection(const FiniteSumProblem& problem,
                                    OracleCounter& counter, const VectorXd& x,
                                    const VectorXd& w, const VectorXd& f_w,
                                    std::span<const BlockSample> samples) {
  if (samples.empty()) throw DomainError("empty batch");
  CheckSamples(problem, samples);
  CheckPoint(problem, x, "x");
  CheckPoint(problem, w, "w");
  CheckPoint(problem, f_w, "F(w)");
  const double m_total = double(problem.num_components());
  const std::size_t b = samples[0].indices.size();
  VectorXd g = f_w;
  for (int blk = 0; blk < problem.num_blocks(); ++blk) {
    const BlockSample& s = samples.size() == 1 ? samples[0] : samples[blk];
    for (Index j : s.indices) {
      const double weight =
          1.0 / (double(b) * m_total * s.scheme.probabilities[j]);
      problem.AddComponent(j, blk, x, weight, g);
      problem.AddComponent(j, blk, w, -weight, g);
    }
  }
  counter.Charge(2 * std::int64_t(b));
  return g;
}

double SpectralNorm(const MatrixXd& a, double tolerance, int max_iterations) {
  if (!a.allFinite()) throw DomainError("matrix has non-finite entries");
  if (a.size() == 0 || a.cwiseAbs().maxCoeff() == 0) return 0;
  CounterRng rng(0x5EED);
  VectorXd v(a.cols());
  for (Index i = 0; i < v.size(); ++i) v[i] = rng.Normal();
  v.normalize();
  double sigma = (a * v).norm();
  for (int it = 0; it < max_iterations; ++it) {
    VectorXd next = a.transpose() * (a * v);
    const double norm = next.norm();
    if (norm == 0) return sigma;
    v = next / norm;
    const double updated = (a * v).norm();
    const bool converged = std::abs(updated - sigma) <= tolerance * updated;
    sigma = updated;
    if (converged) break;
  }
  return sigma;
}

}  // namespace bvi
