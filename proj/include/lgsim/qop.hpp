// Copyright 2026 The lgsim Authors
//
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

#pragma once

// Dense quantum-operation primitives: density operators, unitaries, Kraus
// channels, tensor products, partial traces and diagonal readout.
//
// Composite index convention: the left tensor factor owns the slow index,
// so (A ⊗ B)(i*db + k, j*db + l) = A(i, j) * B(k, l).

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "lgsim/numerics.hpp"

namespace lgsim {

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Matrix projector(std::size_t dim, std::size_t k) {
  require(k < dim, "projector: basis index out of range");
  Matrix p = Matrix::Zero(dim, dim);
  p(k, k) = 1.0;
  return p;
}

/// Hermitian, positive semidefinite operator with trace at most one. A trace
/// below one marks a sub-normalized (post-selected) state; the trace is the
/// retained probability and is never silently rescaled.
class DensityOperator {
 public:
  explicit DensityOperator(Matrix m) : m_(std::move(m)) {
    const auto& tol = tolerances();
    require(m_.rows() == m_.cols() && m_.rows() > 0, "DensityOperator: matrix must be square and non-empty");
    require(max_abs_diff(m_, m_.adjoint()) <= tol.structural, "DensityOperator: matrix is not Hermitian");
    const Complex tr = m_.trace();
    require(std::abs(tr.imag()) <= tol.structural, "DensityOperator: trace is not real");
    trace_ = tr.real();
    require(trace_ >= -tol.structural && trace_ <= 1.0 + tol.structural,
            "DensityOperator: trace " + std::to_string(trace_) + " outside [0, 1]");
    // Symmetrize so downstream eigen-solvers see an exactly Hermitian matrix.
    m_ = 0.5 * (m_ + m_.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
    require(es.eigenvalues().minCoeff() >= -tol.eigen_floor, "DensityOperator: matrix is not positive semidefinite");
  }

  static DensityOperator basis(std::size_t dim, std::size_t k) { return DensityOperator(projector(dim, k)); }

  static DensityOperator pure(const Vector& psi) {
    require(psi.size() > 0, "DensityOperator::pure: empty vector");
    const Vector unit = psi / psi.norm();
    return DensityOperator(unit * unit.adjoint());
  }

  static DensityOperator maximally_mixed(std::size_t dim) {
    return DensityOperator(Matrix::Identity(dim, dim) / static_cast<double>(dim));
  }

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double trace() const { return trace_; }
  double purity() const { return (m_ * m_).trace().real(); }

  /// Explicit renormalization to unit trace. A zero-trace state cannot be
  /// renormalized.
  DensityOperator normalized() const {
    require(trace_ > tolerances().algebraic, "DensityOperator::normalized: zero-trace state");
    return DensityOperator(m_ / trace_);
  }

 private:
  Matrix m_;
  double trace_ = 0.0;
};

class UnitaryOperator {
 public:
  explicit UnitaryOperator(Matrix u) : u_(std::move(u)) {
    require(u_.rows() == u_.cols() && u_.rows() > 0, "UnitaryOperator: matrix must be square and non-empty");
    const Matrix id = Matrix::Identity(u_.rows(), u_.cols());
    require(max_abs_diff(u_ * u_.adjoint(), id) <= tolerances().structural, "UnitaryOperator: U U^dagger != I");
  }

  static UnitaryOperator identity(std::size_t dim) { return UnitaryOperator(Matrix::Identity(dim, dim)); }

  std::size_t dim() const { return static_cast<std::size_t>(u_.rows()); }
  const Matrix& matrix() const { return u_; }
  UnitaryOperator adjoint() const { return UnitaryOperator(u_.adjoint()); }

  /// Operator product: (a * b) applies b first.
  friend UnitaryOperator operator*(const UnitaryOperator& a, const UnitaryOperator& b) {
    require(a.dim() == b.dim(), "UnitaryOperator: dimension mismatch in product");
    return UnitaryOperator(a.u_ * b.u_);
  }

 private:
  Matrix u_;
};

/// A list of Kraus operators. `complete` channels are trace preserving;
/// incomplete ones are post-selected sub-channels.
class KrausChannel {
 public:
  KrausChannel(std::vector<Matrix> operators, bool complete) : ops_(std::move(operators)), complete_(complete) {
    require(!ops_.empty(), "KrausChannel: at least one operator required");
    const auto rows = ops_.front().rows();
    const auto cols = ops_.front().cols();
    const double tol = tolerances().structural;
    for (const auto& k : ops_) {
      require(k.rows() == rows && k.cols() == cols, "KrausChannel: operators must share one shape");
      Eigen::SelfAdjointEigenSolver<Matrix> es(k.adjoint() * k, Eigen::EigenvaluesOnly);
      require(es.eigenvalues().maxCoeff() <= 1.0 + tol, "KrausChannel: operator violates K^dagger K <= I");
    }
    if (complete_) {
      require(completeness_defect() <= tol, "KrausChannel: sum K^dagger K != I for a complete channel");
    }
  }

  static KrausChannel identity(std::size_t dim) { return KrausChannel({Matrix::Identity(dim, dim)}, true); }
  static KrausChannel from_unitary(const UnitaryOperator& u) { return KrausChannel({u.matrix()}, true); }

  const std::vector<Matrix>& operators() const { return ops_; }
  bool is_complete() const { return complete_; }
  std::size_t dim_in() const { return static_cast<std::size_t>(ops_.front().cols()); }
  std::size_t dim_out() const { return static_cast<std::size_t>(ops_.front().rows()); }

  /// Σ K†K, the effect of the whole channel.
  Matrix effect() const {
    Matrix sum = Matrix::Zero(ops_.front().cols(), ops_.front().cols());
    for (const auto& k : ops_) sum += k.adjoint() * k;
    return sum;
  }

  double completeness_defect() const {
    return max_abs_diff(effect(), Matrix::Identity(ops_.front().cols(), ops_.front().cols()));
  }

  /// Sequential composition: this channel acts first, `next` second.
  KrausChannel then(const KrausChannel& next) const {
    require(next.dim_in() == dim_out(), "KrausChannel::then: dimension mismatch");
    std::vector<Matrix> ops;
    ops.reserve(ops_.size() * next.ops_.size());
    for (const auto& b : next.ops_)
      for (const auto& a : ops_) ops.push_back(b * a);
    return KrausChannel(std::move(ops), complete_ && next.complete_);
  }

 private:
  std::vector<Matrix> ops_;
  bool complete_;
};

inline DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator(kron(a.matrix(), b.matrix()));
}

inline UnitaryOperator tensor_product(const UnitaryOperator& a, const UnitaryOperator& b) {
  return UnitaryOperator(kron(a.matrix(), b.matrix()));
}

inline KrausChannel tensor_product(const KrausChannel& a, const KrausChannel& b) {
  std::vector<Matrix> ops;
  ops.reserve(a.operators().size() * b.operators().size());
  for (const auto& ka : a.operators())
    for (const auto& kb : b.operators()) {
      Matrix k = kron(ka, kb);
      if (k.cwiseAbs().maxCoeff() > 0.0) ops.push_back(std::move(k));
    }
  return KrausChannel(std::move(ops), a.is_complete() && b.is_complete());
}

/// Traces out every factor not listed in `keep`. `dims` lists the factor
/// dimensions in tensor order; `keep` holds factor indices.
inline DensityOperator partial_trace(const DensityOperator& rho, std::vector<std::size_t> keep,
                                     const std::vector<std::size_t>& dims) {
  require(!dims.empty(), "partial_trace: no factor dimensions given");
  const std::size_t total = std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
  require(total == rho.dim(), "partial_trace: product of factor dimensions " + std::to_string(total) +
                                  " does not match state dimension " + std::to_string(rho.dim()));
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  for (auto k : keep) require(k < dims.size(), "partial_trace: kept factor index out of range");

  const std::size_t n = dims.size();
  std::vector<bool> kept(n, false);
  for (auto k : keep) kept[k] = true;

  std::size_t dim_keep = 1;
  for (auto k : keep) dim_keep *= dims[k];

  // Row-major digit decomposition of a composite index.
  auto digits = [&](std::size_t index) {
    std::vector<std::size_t> d(n);
    for (std::size_t f = n; f-- > 0;) {
      d[f] = index % dims[f];
      index /= dims[f];
    }
    return d;
  };
  auto kept_index = [&](const std::vector<std::size_t>& d) {
    std::size_t idx = 0;
    for (auto k : keep) idx = idx * dims[k] + d[k];
    return idx;
  };

  Matrix out = Matrix::Zero(dim_keep, dim_keep);
  const Matrix& m = rho.matrix();
  for (std::size_t r = 0; r < total; ++r) {
    const auto dr = digits(r);
    for (std::size_t c = 0; c < total; ++c) {
      const auto dc = digits(c);
      bool traced_match = true;
      for (std::size_t f = 0; f < n && traced_match; ++f)
        if (!kept[f] && dr[f] != dc[f]) traced_match = false;
      if (traced_match) out(kept_index(dr), kept_index(dc)) += m(r, c);
    }
  }
  return DensityOperator(std::move(out));
}

/// Σ K ρ K†. The trace of the result is the retained probability.
inline DensityOperator apply_channel(const DensityOperator& rho, const KrausChannel& ch) {
  require(ch.dim_in() == rho.dim(), "apply_channel: channel input dimension " + std::to_string(ch.dim_in()) +
                                        " does not match state dimension " + std::to_string(rho.dim()));
  Matrix out = Matrix::Zero(ch.dim_out(), ch.dim_out());
  for (const auto& k : ch.operators()) out.noalias() += k * rho.matrix() * k.adjoint();
  return DensityOperator(std::move(out));
}

inline DensityOperator evolve(const DensityOperator& rho, const UnitaryOperator& u) {
  require(u.dim() == rho.dim(), "evolve: dimension mismatch");
  return DensityOperator(u.matrix() * rho.matrix() * u.matrix().adjoint());
}

/// Real diagonal of ρ. Entries within the eigenvalue floor below zero are
/// clipped to zero.
inline RealVector diagonal_populations(const DensityOperator& rho) {
  RealVector p = rho.matrix().diagonal().real();
  const double floor = tolerances().eigen_floor;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    require(p(i) >= -floor, "diagonal_populations: negative population");
    if (p(i) < 0.0) p(i) = 0.0;
  }
  return p;
}

}  // namespace lgsim
