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

#ifndef BVI_MATRIX_GAME_H_
#define BVI_MATRIX_GAME_H_

#include "Eigen/Core"
#include "bvi/problems.h"

namespace bvi {

// How the bilinear operator is written as a finite sum over M = n components.
//   kRowColumn: F_m(x, y) = (M A_{m:}^T y_m, -M A_{:m} x_m). The x-part is
//               driven by y's coordinates (rows), the y-part by x's
//               coordinates (columns). This is the split the entropic
//               importance-sampled updates use.
//   kRows:      component m keeps row m of A only.
//   kColumns:   component m keeps column m of A only.
enum class Decomposition { kRowColumn, kRows, kColumns };

// min_{x in simplex} max_{y in simplex} <A x, y> as the monotone VI with
// operator F(x, y) = (A^T y, -A x) on the product of two simplices with the
// entropic geometry. z is stored as (x, y), each of size n.
class MatrixGame : public FiniteSumProblem {
 public:
  explicit MatrixGame(MatrixXd a,
                      Decomposition decomposition = Decomposition::kRowColumn);

  const MatrixXd& matrix() const { return a_; }
  Index n() const { return a_.rows(); }
  Decomposition decomposition() const { return decomposition_; }

  Index num_components() const override { return a_.rows(); }
  Index dim() const override { return 2 * a_.rows(); }
  const Geometry& geometry() const override { return geometry_; }
  const LipschitzInfo& lipschitz() const override { return lipschitz_; }

  int num_blocks() const override { return 2; }
  Block block(int b) const override;
  void AddComponent(Index m, int b, const VectorXd& z, double scale,
                    VectorXd& out) const override;
  VectorXd Operator(const VectorXd& z) const override;
  VectorXd SamplingSignal(int b, const VectorXd& d) const override;
  double Gap(const VectorXd& z) const override;

 private:
  MatrixXd a_;
  Decomposition decomposition_;
  Geometry geometry_;
  LipschitzInfo lipschitz_;
};

// (A^T y, -A x) for z = (x, y).
VectorXd MatrixGameOperator(const MatrixXd& a, const VectorXd& z);

// max_i (A x)_i - min_j (A^T y)_j: the best-response duality gap.
double MatrixGameGap(const MatrixXd& a, const VectorXd& z);

// L2 = |A|_2 (power iteration), bar_l2 from the exact spectral norms of the
// per-component linear maps of `decomposition`, L = max_ij |A_ij|.
LipschitzInfo LipschitzEstimates(
    const MatrixXd& a, Decomposition decomposition = Decomposition::kRowColumn);

}  // namespace bvi

#endif  // BVI_MATRIX_GAME_H_
