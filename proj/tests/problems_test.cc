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

#include <cmath>
#include <vector>

#include "Eigen/Core"
#include "Eigen/SVD"
#include "bvi/errors.h"
#include "bvi/matrix_game.h"
#include "bvi/rng.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace bvi {
namespace {

using testing::RandomMatrix;
using testing::RandomNormal;
using testing::RandomProductSimplex;

LinearOperatorProblem ToyProblem() {
  return LinearOperatorProblem(
      {MatrixXd{{0, 1}, {-1, 0}}, MatrixXd{{2, -1}, {1, 0.5}}},
      {VectorXd{{0.1, 0}}, VectorXd{{0, -0.3}}});
}

TEST(ImportanceDistributionTest, SymmetricPair) {
  EXPECT_EQ(ImportanceDistribution(VectorXd{{1, -1}}), (VectorXd{{0.5, 0.5}}));
}

TEST(ImportanceDistributionTest, ZeroFallsBackToUniform) {
  const VectorXd r = ImportanceDistribution(VectorXd::Zero(3));
  for (int i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(r[i], 1.0 / 3);
}

TEST(ImportanceDistributionTest, NormalizesAbsoluteValues) {
  EXPECT_EQ(ImportanceDistribution(VectorXd{{3, -1, 0}}),
            (VectorXd{{0.75, 0.25, 0}}));
}

TEST(DrawBatchTest, NeverReturnsZeroProbabilityIndex) {
  CounterRng rng(1);
  const SamplingScheme scheme = SamplingScheme::Importance(VectorXd{{0, 2, 0, 1, 0}});
  std::vector<int> hits(5, 0);
  for (Index j : DrawBatch(scheme, 30000, rng)) ++hits[j];
  EXPECT_EQ(hits[0] + hits[2] + hits[4], 0);
  EXPECT_NEAR(hits[1] / 30000.0, 2.0 / 3, 0.01);
}

TEST(DrawBatchTest, RejectsNonPositiveBatch) {
  CounterRng rng(1);
  EXPECT_THROW(DrawBatch(SamplingScheme::Uniform(3), 0, rng), DomainError);
}

TEST(OracleCounterTest, AccumulatesAndRejectsNegative) {
  OracleCounter c;
  c.Charge(3);
  c.Charge(5);
  EXPECT_EQ(c.calls(), 8);
  EXPECT_THROW(c.Charge(-1), DomainError);
}

TEST(LinearOperatorProblemTest, OperatorIsComponentMean) {
  const LinearOperatorProblem p = ToyProblem();
  const VectorXd z{{0.4, -2}};
  const VectorXd expected =
      0.5 * (p.Component(0, z) + p.Component(1, z));
  EXPECT_LE((p.Operator(z) - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(LinearOperatorProblem({MatrixXd::Identity(2, 2)}, {}),
               DimensionError);
}

TEST(EstimateDeltaTest, ReducesToSnapshotValueWhenPointsCoincide) {
  CounterRng rng(4);
  const MatrixGame game(RandomMatrix(rng, 6, 6));
  const VectorXd z = RandomProductSimplex(rng, {6, 6});
  const VectorXd f_w = game.Operator(z);
  for (SamplingKind kind : {SamplingKind::kUniform, SamplingKind::kImportance}) {
    for (int b : {1, 3}) {
      OracleCounter counter;
      const SamplingScheme scheme = kind == SamplingKind::kUniform
                                        ? SamplingScheme::Uniform(6)
                                        : SamplingScheme::Importance(VectorXd::Ones(6));
      const std::vector<BlockSample> samples = {
          {DrawBatch(scheme, b, rng), scheme}, {DrawBatch(scheme, b, rng), scheme}};
      const VectorXd delta = EstimateDelta(game, counter, z, z, z, f_w, samples);
      EXPECT_LE((delta - f_w).cwiseAbs().maxCoeff(), 1e-15);
      EXPECT_EQ(counter.calls(), 3 * b);
    }
  }
}

TEST(EstimateDeltaTest, EnumerationOverAllBatchesIsExact) {
  // b = M = 2 with uniform sampling: every ordered batch has probability 1/4.
  const LinearOperatorProblem p = ToyProblem();
  const VectorXd x{{0.3, -0.2}}, x_prev{{1.0, 0.5}}, w{{-0.7, 0.25}};
  const VectorXd f_w = p.Operator(w);
  const SamplingScheme uniform = SamplingScheme::Uniform(2);
  VectorXd mean = VectorXd::Zero(2);
  for (Index i = 0; i < 2; ++i) {
    for (Index j = 0; j < 2; ++j) {
      OracleCounter counter;
      const std::vector<BlockSample> s = {{{i, j}, uniform}};
      mean += 0.25 * EstimateDelta(p, counter, x, x_prev, w, f_w, s);
    }
  }
  const VectorXd target = 2 * p.Operator(x) - p.Operator(x_prev);
  EXPECT_LE((mean - target).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(EstimateDeltaTest, MonteCarloMeanWithinThreeStandardErrors) {
  CounterRng rng(8);
  const MatrixGame game(RandomMatrix(rng, 10, 10));
  const VectorXd x = RandomProductSimplex(rng, {10, 10});
  const VectorXd x_prev = RandomProductSimplex(rng, {10, 10});
  const VectorXd w = RandomProductSimplex(rng, {10, 10});
  const VectorXd f_w = game.Operator(w);
  const VectorXd target = 2 * game.Operator(x) - game.Operator(x_prev);
  const VectorXd d = 2 * x - w - x_prev;
  for (SamplingKind kind : {SamplingKind::kUniform, SamplingKind::kImportance}) {
    const int draws = 10000;
    VectorXd sum = VectorXd::Zero(20), sq = VectorXd::Zero(20);
    for (int t = 0; t < draws; ++t) {
      std::vector<BlockSample> samples;
      for (int b = 0; b < 2; ++b) {
        const SamplingScheme scheme =
            kind == SamplingKind::kUniform
                ? SamplingScheme::Uniform(10)
                : SamplingScheme::Importance(game.SamplingSignal(b, d));
        samples.push_back({DrawBatch(scheme, 2, rng), scheme});
      }
      OracleCounter counter;
      const VectorXd delta = EstimateDelta(game, counter, x, x_prev, w, f_w, samples);
      sum += delta;
      sq += delta.cwiseProduct(delta);
    }
    const VectorXd mean = sum / draws;
    const VectorXd var = (sq / draws - mean.cwiseProduct(mean)).cwiseMax(0.0);
    for (int i = 0; i < 20; ++i) {
      const double se = std::sqrt(var[i] / draws);
      EXPECT_LE(std::abs(mean[i] - target[i]), 3 * se + 1e-12)
          << "coordinate " << i << " scheme " << int(kind);
    }
  }
}

TEST(EstimateDeltaTest, ImportanceTermsMatchClosedForm) {
  // Each sampled row contributes A_{i:} |d|_1 sign(d_i) for d_i != 0.
  CounterRng rng(12);
  const Index n = 7;
  const MatrixXd a = RandomMatrix(rng, n, n);
  const MatrixGame game(a);
  const VectorXd x = RandomProductSimplex(rng, {n, n});
  const VectorXd x_prev = RandomProductSimplex(rng, {n, n});
  const VectorXd w = RandomProductSimplex(rng, {n, n});
  const VectorXd f_w = game.Operator(w);
  const VectorXd d = 2 * x - w - x_prev;
  const VectorXd dx = d.head(n), dy = d.tail(n);
  const SamplingScheme sx = SamplingScheme::Importance(game.SamplingSignal(0, d));
  const SamplingScheme sy = SamplingScheme::Importance(game.SamplingSignal(1, d));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (dy[i] == 0 || dx[j] == 0) continue;
      OracleCounter counter;
      const std::vector<BlockSample> s = {{{i}, sx}, {{j}, sy}};
      const VectorXd delta = EstimateDelta(game, counter, x, x_prev, w, f_w, s);
      const VectorXd expect_x =
          f_w.head(n) + a.row(i).transpose() * dy.lpNorm<1>() * (dy[i] > 0 ? 1 : -1);
      const VectorXd expect_y =
          f_w.tail(n) - a.col(j) * dx.lpNorm<1>() * (dx[j] > 0 ? 1 : -1);
      EXPECT_LE((delta.head(n) - expect_x).cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_LE((delta.tail(n) - expect_y).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(EstimateDeltaTest, VarianceBoundUnderUniformSampling) {
  CounterRng rng(21);
  const Index n = 50;
  const MatrixGame game(RandomMatrix(rng, n, n));
  const double bar_l2 = game.lipschitz().bar_l2;
  const VectorXd x = RandomProductSimplex(rng, {n, n});
  const VectorXd x_prev = RandomProductSimplex(rng, {n, n});
  const VectorXd w = RandomProductSimplex(rng, {n, n});
  const VectorXd f_w = game.Operator(w);
  const VectorXd mean = 2 * game.Operator(x) - game.Operator(x_prev);
  const SamplingScheme uniform = SamplingScheme::Uniform(n);
  for (int b : {1, 5, 25}) {
    const int draws = 10000;
    double second_moment = 0;
    for (int t = 0; t < draws; ++t) {
      const std::vector<BlockSample> s = {{DrawBatch(uniform, b, rng), uniform},
                                          {DrawBatch(uniform, b, rng), uniform}};
      OracleCounter counter;
      second_moment +=
          (EstimateDelta(game, counter, x, x_prev, w, f_w, s) - mean).squaredNorm();
    }
    second_moment /= draws;
    const double bound = 2 * bar_l2 * bar_l2 / b *
                         ((x - w).squaredNorm() + (x - x_prev).squaredNorm());
    EXPECT_LE(second_moment, 1.05 * bound) << "b = " << b;
  }
}

TEST(EstimateDeltaTest, RejectsMalformedSamples) {
  const LinearOperatorProblem p = ToyProblem();
  const VectorXd z{{0, 0}};
  OracleCounter counter;
  const SamplingScheme u = SamplingScheme::Uniform(2);
  const std::vector<BlockSample> none;
  EXPECT_THROW(EstimateDelta(p, counter, z, z, z, z, none), DomainError);
  const std::vector<BlockSample> empty = {{{}, u}};
  EXPECT_THROW(EstimateDelta(p, counter, z, z, z, z, empty), DomainError);
  const std::vector<BlockSample> bad_index = {{{5}, u}};
  EXPECT_THROW(EstimateDelta(p, counter, z, z, z, z, bad_index), DomainError);
  const SamplingScheme skewed = SamplingScheme::Importance(VectorXd{{1, 0}});
  const std::vector<BlockSample> zero_weight = {{{1}, skewed}};
  EXPECT_THROW(EstimateDelta(p, counter, z, z, z, z, zero_weight), DomainError);
}

TEST(EstimateSnapshotCorrectionTest, UnbiasedAndChargesTwoPerSample) {
  const LinearOperatorProblem p = ToyProblem();
  const VectorXd x{{0.3, -0.2}}, w{{-0.7, 0.25}};
  const VectorXd f_w = p.Operator(w);
  const SamplingScheme u = SamplingScheme::Uniform(2);
  VectorXd mean = VectorXd::Zero(2);
  for (Index i = 0; i < 2; ++i) {
    OracleCounter counter;
    const std::vector<BlockSample> s = {{{i}, u}};
    mean += 0.5 * EstimateSnapshotCorrection(p, counter, x, w, f_w, s);
    EXPECT_EQ(counter.calls(), 2);
  }
  EXPECT_LE((mean - p.Operator(x)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(SpectralNormTest, MatchesSvd) {
  CounterRng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const MatrixXd a = RandomMatrix(rng, 5, 5);
    const double svd = Eigen::JacobiSVD<MatrixXd>(a).singularValues()[0];
    EXPECT_NEAR(SpectralNorm(a), svd, 1e-6 * svd);
  }
  EXPECT_EQ(SpectralNorm(MatrixXd::Zero(3, 3)), 0.0);
}

TEST(LipschitzInfoTest, ValidateRejectsNegative) {
  EXPECT_THROW((LipschitzInfo{-1, 0, 0}).Validate(), DomainError);
  EXPECT_NO_THROW((LipschitzInfo{1, 2, 3}).Validate());
}

}  // namespace
}  // namespace bvi
