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

// Mirror maps (distance-generating functions), their Bregman distances and
// the composite Bregman prox step
//
//   argmin_x  g(x) + (1-gamma)/eta V(x, x_k) + gamma/eta V(x, w_bar)
//             + <delta, x>.
//
// Two geometries are shipped:
//   * half squared Euclidean h(x) = 0.5 |x|_2^2, on the full space or on a
//     product of probability simplices;
//   * negative entropy h(x) = sum_i x_i log x_i on a product of simplices.
//
// A product of simplices is described by a list of contiguous blocks; a
// single simplex is the one-block case. Every function here is pure.

#ifndef BVI_GEOMETRY_H_
#define BVI_GEOMETRY_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "Eigen/Core"
#include "bvi/errors.h"

namespace bvi {

enum class MirrorKind { kHalfSquaredEuclidean, kNegativeEntropy };
enum class Domain { kFullSpace, kSimplex };

// Sum-to-one tolerance used when validating simplex points.
inline constexpr double kSimplexTolerance = 1e-8;

// Contiguous coordinate range [offset, offset + size).
struct Block {
  Eigen::Index offset = 0;
  Eigen::Index size = 0;
};

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
class MirrorMap {
 public:
  using Vector = VectorX<Scalar>;

  // Throws DomainError for NegativeEntropy on the full space, empty blocks or
  // block sizes that do not sum to a positive dimension.
  MirrorMap(MirrorKind kind, Domain domain, std::vector<Eigen::Index> blocks)
      : kind_(kind), domain_(domain) {
    if (kind == MirrorKind::kNegativeEntropy && domain == Domain::kFullSpace) {
      throw DomainError("negative entropy is only defined on the simplex");
    }
    if (blocks.empty()) throw DomainError("mirror map needs a positive dimension");
    Eigen::Index offset = 0;
    for (Eigen::Index size : blocks) {
      if (size <= 0) throw DomainError("mirror map blocks must be non-empty");
      blocks_.push_back({offset, size});
      offset += size;
    }
    dim_ = offset;
  }

  static MirrorMap Euclidean(Eigen::Index n) {
    return MirrorMap(MirrorKind::kHalfSquaredEuclidean, Domain::kFullSpace, {n});
  }
  static MirrorMap EuclideanSimplex(std::vector<Eigen::Index> blocks) {
    return MirrorMap(MirrorKind::kHalfSquaredEuclidean, Domain::kSimplex,
                     std::move(blocks));
  }
  static MirrorMap Entropy(Eigen::Index n) {
    return MirrorMap(MirrorKind::kNegativeEntropy, Domain::kSimplex, {n});
  }
  static MirrorMap Entropy(std::vector<Eigen::Index> blocks) {
    return MirrorMap(MirrorKind::kNegativeEntropy, Domain::kSimplex,
                     std::move(blocks));
  }

  MirrorKind kind() const { return kind_; }
  Domain domain() const { return domain_; }
  Eigen::Index dim() const { return dim_; }
  const std::vector<Block>& blocks() const { return blocks_; }

  bool is_entropy() const { return kind_ == MirrorKind::kNegativeEntropy; }
  bool on_simplex() const { return domain_ == Domain::kSimplex; }

 private:
  MirrorKind kind_;
  Domain domain_;
  Eigen::Index dim_ = 0;
  std::vector<Block> blocks_;
};

// Element of the dual space: gradients of h and operator values.
template <typename Scalar>
struct DualVector {
  VectorX<Scalar> coords;

  Eigen::Index size() const { return coords.size(); }
  friend bool operator==(const DualVector&, const DualVector&) = default;
};

// Composite term g of the prox step. Zero() is g = 0 with the domain
// constraint carried by the mirror map. Custom terms provide the minimizer of
// g(x) + (1/eta)(h(x) - <theta, x>) over the map's domain, which is what the
// prox step reduces to once both Bregman terms are expanded.
template <typename Scalar>
class CompositeTerm {
 public:
  using Vector = VectorX<Scalar>;
  using Supports = std::function<bool(const MirrorMap<Scalar>&)>;
  using Solver = std::function<Vector(const MirrorMap<Scalar>&,
                                      const Vector& theta, Scalar eta)>;

  static CompositeTerm Zero() { return CompositeTerm("zero", {}, {}); }
  static CompositeTerm Custom(std::string name, Supports supports,
                              Solver solver) {
    return CompositeTerm(std::move(name), std::move(supports),
                         std::move(solver));
  }

  const std::string& name() const { return name_; }
  bool is_zero() const { return !solver_; }
  bool supports(const MirrorMap<Scalar>& map) const {
    return is_zero() || (supports_ && supports_(map));
  }
  Vector Solve(const MirrorMap<Scalar>& map, const Vector& theta,
               Scalar eta) const {
    return solver_(map, theta, eta);
  }

 private:
  CompositeTerm(std::string name, Supports supports, Solver solver)
      : name_(std::move(name)),
        supports_(std::move(supports)),
        solver_(std::move(solver)) {}

  std::string name_;
  Supports supports_;
  Solver solver_;
};

namespace internal {

template <typename Scalar, typename Derived>
void CheckDim(const MirrorMap<Scalar>& map,
              const Eigen::MatrixBase<Derived>& v, const char* what) {
  if (v.size() != map.dim()) {
    throw DimensionError(std::string(what) + ": expected dimension " +
                         std::to_string(map.dim()) + ", got " +
                         std::to_string(v.size()));
  }
}

template <typename Derived>
void CheckFinite(const Eigen::MatrixBase<Derived>& v, const char* what) {
  if (!v.allFinite()) throw DomainError(std::string(what) + ": non-finite entry");
}

// Nonnegative entries summing to one on every block.
template <typename Scalar, typename Derived>
void CheckOnSimplex(const MirrorMap<Scalar>& map,
                    const Eigen::MatrixBase<Derived>& x, const char* what) {
  for (const Block& b : map.blocks()) {
    auto seg = x.segment(b.offset, b.size);
    if ((seg.array() < Scalar(0)).any()) {
      throw DomainError(std::string(what) + ": negative coordinate");
    }
    if (std::abs(seg.sum() - Scalar(1)) > Scalar(kSimplexTolerance)) {
      throw DomainError(std::string(what) + ": block does not sum to one");
    }
  }
}

template <typename Derived>
void CheckPositive(const Eigen::MatrixBase<Derived>& x, const char* what) {
  if (!((x.array() > 0).all())) {
    throw DomainError(std::string(what) +
                      ": entropy needs strictly positive coordinates");
  }
}

// Euclidean projection of v onto the probability simplex (sort-based).
template <typename Scalar>
VectorX<Scalar> ProjectOntoSimplex(const VectorX<Scalar>& v) {
  std::vector<Scalar> sorted(v.data(), v.data() + v.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<Scalar>());
  Scalar cumulative = 0;
  Scalar threshold = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    cumulative += sorted[i];
    const Scalar candidate = (cumulative - Scalar(1)) / Scalar(i + 1);
    if (sorted[i] - candidate > Scalar(0)) threshold = candidate;
  }
  return (v.array() - threshold).cwiseMax(Scalar(0)).matrix();
}

}  // namespace internal

// Bregman distance V(x, y) = h(x) - h(y) - <grad h(y), x - y>.
// Entropy: sum_i x_i log(x_i / y_i) with 0 log 0 = 0; y must be interior.
template <typename Scalar, typename DerivedX, typename DerivedY>
Scalar Bregman(const MirrorMap<Scalar>& map,
               const Eigen::MatrixBase<DerivedX>& x,
               const Eigen::MatrixBase<DerivedY>& y) {
  internal::CheckDim(map, x, "bregman(x)");
  internal::CheckDim(map, y, "bregman(y)");
  if (map.on_simplex()) {
    internal::CheckOnSimplex(map, x, "bregman(x)");
    internal::CheckOnSimplex(map, y, "bregman(y)");
  }
  if (!map.is_entropy()) return Scalar(0.5) * (x - y).squaredNorm();
  internal::CheckPositive(y, "bregman(y)");
  Scalar total = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] > Scalar(0)) total += x[i] * std::log(x[i] / y[i]);
  }
  return std::max(total, Scalar(0));
}

// Gradient of h: identity for Euclidean, 1 + log x for entropy.
template <typename Scalar, typename Derived>
DualVector<Scalar> Grad(const MirrorMap<Scalar>& map,
                        const Eigen::MatrixBase<Derived>& x) {
  internal::CheckDim(map, x, "grad");
  if (!map.is_entropy()) return {VectorX<Scalar>(x)};
  internal::CheckPositive(x, "grad");
  return {(Scalar(1) + x.array().log()).matrix()};
}

// Minimizer of h(x) - <theta, x> over the map's domain. Entropy: a softmax on
// each block, computed after subtracting the block maximum (the result is
// invariant to a per-block constant shift of theta). Euclidean on the simplex:
// projection of theta.
template <typename Scalar>
VectorX<Scalar> GradInverse(const MirrorMap<Scalar>& map,
                            const DualVector<Scalar>& theta) {
  internal::CheckDim(map, theta.coords, "grad_inverse");
  internal::CheckFinite(theta.coords, "grad_inverse");
  if (!map.on_simplex()) return theta.coords;
  VectorX<Scalar> x(map.dim());
  for (const Block& b : map.blocks()) {
    auto in = theta.coords.segment(b.offset, b.size);
    if (map.is_entropy()) {
      auto e = (in.array() - in.maxCoeff()).exp();
      x.segment(b.offset, b.size) = (e / e.sum()).matrix();
    } else {
      x.segment(b.offset, b.size) =
          internal::ProjectOntoSimplex<Scalar>(VectorX<Scalar>(in));
    }
  }
  return x;
}

// Dual-space combination (1-gamma) grad h(x) + gamma w_bar_dual - eta delta
// whose image under GradInverse is the g = 0 prox step.
template <typename Scalar, typename Derived>
DualVector<Scalar> ProxDualTarget(const MirrorMap<Scalar>& map,
                                  const Eigen::MatrixBase<Derived>& x,
                                  const DualVector<Scalar>& w_bar_dual,
                                  Scalar gamma, Scalar eta,
                                  const DualVector<Scalar>& delta) {
  DualVector<Scalar> theta = Grad(map, x);
  theta.coords = (Scalar(1) - gamma) * theta.coords +
                 gamma * w_bar_dual.coords - eta * delta.coords;
  return theta;
}

// Composite Bregman prox step. Returns the unique minimizer of
//   g(x) + (1-gamma)/eta V(x, x_cur) + gamma/eta V(x, w_bar) + <delta, x>
// where grad h(w_bar) = w_bar_dual.
template <typename Scalar, typename Derived>
VectorX<Scalar> ProxStep(
    const MirrorMap<Scalar>& map, const Eigen::MatrixBase<Derived>& x,
    const DualVector<Scalar>& w_bar_dual, Scalar gamma, Scalar eta,
    const DualVector<Scalar>& delta,
    const CompositeTerm<Scalar>& g = CompositeTerm<Scalar>::Zero()) {
  if (!(eta > Scalar(0))) throw DomainError("prox_step: eta must be positive");
  if (!(gamma >= Scalar(0) && gamma <= Scalar(1))) {
    throw DomainError("prox_step: gamma must lie in [0, 1]");
  }
  if (!g.supports(map)) {
    throw DomainError("prox_step: composite term '" + g.name() +
                      "' is not supported by this geometry");
  }
  internal::CheckDim(map, x, "prox_step(x)");
  internal::CheckDim(map, w_bar_dual.coords, "prox_step(w_bar_dual)");
  internal::CheckDim(map, delta.coords, "prox_step(delta)");
  internal::CheckFinite(delta.coords, "prox_step(delta)");
  DualVector<Scalar> theta = ProxDualTarget(map, x, w_bar_dual, gamma, eta, delta);
  if (g.is_zero()) return GradInverse(map, theta);
  return g.Solve(map, theta.coords, eta);
}

// Coordinate-wise mean of grad h over the points.
template <typename Scalar>
DualVector<Scalar> DualAverage(const MirrorMap<Scalar>& map,
                               std::span<const VectorX<Scalar>> points) {
  if (points.empty()) throw DomainError("dual_average: empty point list");
  VectorX<Scalar> sum = VectorX<Scalar>::Zero(map.dim());
  for (const auto& p : points) sum += Grad(map, p).coords;
  return {sum / Scalar(points.size())};
}

// Norm with respect to which h is 1-strongly convex: l2 for Euclidean, and
// sqrt(sum_blocks |v_block|_1^2) for entropy on a product of simplices.
template <typename Scalar, typename Derived>
Scalar ReferenceNorm(const MirrorMap<Scalar>& map,
                     const Eigen::MatrixBase<Derived>& v) {
  internal::CheckDim(map, v, "reference_norm");
  if (!map.is_entropy()) return v.norm();
  Scalar sq = 0;
  for (const Block& b : map.blocks()) {
    const Scalar l1 = v.segment(b.offset, b.size).template lpNorm<1>();
    sq += l1 * l1;
  }
  return std::sqrt(sq);
}

// Barycenter of every simplex block, or the origin on the full space.
template <typename Scalar>
VectorX<Scalar> CenterPoint(const MirrorMap<Scalar>& map) {
  VectorX<Scalar> x = VectorX<Scalar>::Zero(map.dim());
  if (!map.on_simplex()) return x;
  for (const Block& b : map.blocks()) {
    x.segment(b.offset, b.size).setConstant(Scalar(1) / Scalar(b.size));
  }
  return x;
}

// Strictly interior for entropy, on the simplex for Euclidean-on-simplex.
template <typename Scalar, typename Derived>
bool IsInDomain(const MirrorMap<Scalar>& map,
                const Eigen::MatrixBase<Derived>& x) {
  if (x.size() != map.dim() || !x.allFinite()) return false;
  if (!map.on_simplex()) return true;
  for (const Block& b : map.blocks()) {
    auto seg = x.segment(b.offset, b.size);
    if (map.is_entropy() ? !(seg.array() > Scalar(0)).all()
                         : (seg.array() < Scalar(0)).any()) {
      return false;
    }
    if (std::abs(seg.sum() - Scalar(1)) > Scalar(kSimplexTolerance)) return false;
  }
  return true;
}

}  // namespace bvi

#endif  // BVI_GEOMETRY_H_
