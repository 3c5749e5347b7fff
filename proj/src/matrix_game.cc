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

#include "bvi/matrix_game.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "bvi/errors.h"

namespace bvi {
namespace {

void CheckSquare(const MatrixXd& a) {
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw DimensionError("matrix game needs a non-empty square matrix, got " +
                         std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()));
  }
  if (!a.allFinite()) throw DomainError("matrix has non-finite entries");
}

void CheckPair(const MatrixXd& a, const VectorXd& z) {
  if (z.size() != a.rows() + a.cols()) {
    throw DimensionError("point pair has dimension " + std::to_string(z.size()) +
                         ", expected " + std::to_string(a.rows() + a.cols()));
  }
}

}  // namespace

MatrixGame::MatrixGame(MatrixXd a, Decomposition decomposition)
    : a_(std::move(a)),
      decomposition_(decomposition),
      geometry_(Geometry::Entropy({std::max<Index>(a_.rows(), 1),
                                   std::max<Index>(a_.rows(), 1)})) {
  CheckSquare(a_);
  lipschitz_ = LipschitzEstimates(a_, decomposition_);
}

Block MatrixGame::block(int b) const {
  if (b < 0 || b > 1) throw DomainError("matrix game has two blocks");
  return {b * n(), n()};
}

void MatrixGame::AddComponent(Index m, int b, const VectorXd& z, double scale,
                              VectorXd& out) const {
  const Index size = n();
  const double s = scale * double(size);
  auto x = z.head(size);
  auto y = z.tail(size);
  if (b == 0) {
    if (decomposition_ == Decomposition::kColumns) {
      out[m] += s * a_.col(m).dot(y);
    } else {
      out.head(size).noalias() += (s * y[m]) * a_.row(m).transpose();
    }
  } else {
    if (decomposition_ == Decomposition::kRows) {
      out[size + m] -= s * a_.row(m).dot(x);
    } else {
      out.tail(size).noalias() -= (s * x[m]) * a_.col(m);
    }
  }
}

VectorXd MatrixGame::Operator(const VectorXd& z) const {
  return MatrixGameOperator(a_, z);
}

VectorXd MatrixGame::SamplingSignal(int b, const VectorXd& d) const {
  const Index size = n();
  if (b == 0) {
    if (decomposition_ == Decomposition::kColumns) {
      return a_.transpose() * d.tail(size);
    }
    return d.tail(size);
  }
  if (decomposition_ == Decomposition::kRows) return a_ * d.head(size);
  return d.head(size);
}

double MatrixGame::Gap(const VectorXd& z) const { return MatrixGameGap(a_, z); }

VectorXd MatrixGameOperator(const MatrixXd& a, const VectorXd& z) {
  CheckPair(a, z);
  VectorXd out(z.size());
  out.head(a.cols()).noalias() = a.transpose() * z.tail(a.rows());
  out.tail(a.rows()).noalias() = -(a * z.head(a.cols()));
  return out;
}

double MatrixGameGap(const MatrixXd& a, const VectorXd& z) {
  CheckPair(a, z);
  const double best_y = (a * z.head(a.cols())).maxCoeff();
  const double best_x = (a.transpose() * z.tail(a.rows())).minCoeff();
  return best_y - best_x;
}

LipschitzInfo LipschitzEstimates(const MatrixXd& a,
                                 Decomposition decomposition) {
  if (!a.allFinite()) throw DomainError("matrix has non-finite entries");
  LipschitzInfo info;
  info.l2 = SpectralNorm(a);
  info.l = a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
  const Index m_total = a.rows();
  double sum_sq = 0;
  for (Index m = 0; m < m_total; ++m) {
    double norm = 0;
    switch (decomposition) {
      case Decomposition::kRowColumn:
        norm = std::max(a.row(m).norm(), a.col(m).norm());
        break;
      case Decomposition::kRows:
        norm = a.row(m).norm();
        break;
      case Decomposition::kColumns:
        norm = a.col(m).norm();
        break;
    }
    norm *= double(m_total);
    sum_sq += norm * norm;
  }
  info.bar_l2 = m_total == 0 ? 0.0 : std::sqrt(sum_sq / double(m_total));
  return info;
}

}  // namespace bvi
