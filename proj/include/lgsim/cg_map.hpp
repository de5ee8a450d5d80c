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

// Two spin-1/2 particles as spin-1 ⊕ spin-0:
//   |0>_s = |00>, |1>_s = (|01> + |10>)/√2, |2>_s = |11>, |s> = (|01> - |10>)/√2.
// Two-qubit computational index is 2*q1 + q2.

#include <cmath>
#include <numbers>

#include "lgsim/lg_protocol.hpp"

namespace lgsim {

inline constexpr std::size_t kSingletIndex = 3;

/// U_B: column k is the k-th spin-1/singlet ket in the computational basis.
inline const UnitaryOperator& basis_map() {
  static const UnitaryOperator ub = [] {
    const double r = 1.0 / std::numbers::sqrt2;
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = 1.0;
    m(1, 1) = r;
    m(2, 1) = r;
    m(3, 2) = 1.0;
    m(1, 3) = r;
    m(2, 3) = -r;
    return UnitaryOperator(m);
  }();
  return ub;
}

/// Lifts an operator on the spin-1 sector to the two-qubit space, acting as
/// `singlet_factor` on |s>.
inline Matrix embed_spin1(const Matrix& op3, Complex singlet_factor) {
  require(op3.rows() == 3 && op3.cols() == 3, "embed_spin1: expected a 3x3 operator");
  Matrix block = Matrix::Zero(4, 4);
  block.topLeftCorner(3, 3) = op3;
  block(kSingletIndex, kSingletIndex) = singlet_factor;
  const Matrix& ub = basis_map().matrix();
  return ub * block * ub.adjoint();
}

/// Two-qubit operator expressed in the spin-1/singlet basis.
inline Matrix to_spin1_basis(const Matrix& op4) {
  const Matrix& ub = basis_map().matrix();
  return ub.adjoint() * op4 * ub;
}

/// Inverse of to_spin1_basis.
inline Matrix from_spin1_basis(const Matrix& op4) {
  const Matrix& ub = basis_map().matrix();
  return ub * op4 * ub.adjoint();
}

struct Spin1Sector {
  DensityOperator triplet;  // sub-normalized 3x3 block
  double singlet_population;
};

inline Spin1Sector to_spin1_sector(const DensityOperator& rho_2q) {
  require(rho_2q.dim() == 4, "to_spin1_sector: expected a two-qubit state");
  const Matrix m = to_spin1_basis(rho_2q.matrix());
  return {DensityOperator(m.topLeftCorner(3, 3)), m(kSingletIndex, kSingletIndex).real()};
}

/// ρ = (1 - ε)/8 · 1 + ε |0><0|_s ⊗ |0><0| on system ⊗ ancilla.
inline DensityOperator pps_state(double epsilon) {
  require(epsilon > 0.0 && epsilon <= 1.0, "pps_state: epsilon must lie in (0, 1]");
  Matrix m = Matrix::Identity(8, 8) * ((1.0 - epsilon) / 8.0);
  m(0, 0) += epsilon;
  return DensityOperator(std::move(m));
}

/// Recovers the pure-component readout from a PPS readout given the readout
/// of the maximally mixed background.
inline RealVector deviation_readout(const RealVector& pps_readout, const RealVector& background_readout,
                                    double epsilon) {
  require(pps_readout.size() == background_readout.size(), "deviation_readout: size mismatch");
  require(epsilon > 0.0 && epsilon <= 1.0, "deviation_readout: epsilon must lie in (0, 1]");
  return (pps_readout - (1.0 - epsilon) * background_readout) / epsilon;
}

/// The noiseless channel sequence of one two-time setting on the qutrit:
/// evolve to the first time, dephase, evolve to the second time.
inline std::vector<KrausChannel> lg_protocol_channel(const RotationDynamics& dyn, const Schedule& schedule,
                                                     TimePair pair) {
  const auto [ta, tb] = pair_times(schedule, pair);
  return {KrausChannel::from_unitary(dyn.unitary(ta)), UpdateRule::dephasing_inrm(dyn.dimension()).channel(),
          KrausChannel::from_unitary(dyn.unitary(tb - ta))};
}

/// The same sequence lifted to two qubits; the singlet is left untouched and
/// kept as its own measurement outcome.
inline std::vector<KrausChannel> two_qubit_protocol_channel(const RotationDynamics& dyn, const Schedule& schedule,
                                                            TimePair pair) {
  require(dyn.dimension() == 3, "two_qubit_protocol_channel: requires the spin-1 dynamics");
  std::vector<KrausChannel> out;
  for (const auto& step : lg_protocol_channel(dyn, schedule, pair)) {
    std::vector<Matrix> ops;
    for (const auto& k : step.operators()) ops.push_back(embed_spin1(k, step.operators().size() == 1 ? 1.0 : 0.0));
    if (step.operators().size() > 1) ops.push_back(embed_spin1(Matrix::Zero(3, 3), 1.0));
    out.emplace_back(std::move(ops), true);
  }
  return out;
}

/// Runs `protocol` on 1/dim and returns max |output - 1/dim| elementwise.
inline double identity_background_run(const std::vector<KrausChannel>& protocol) {
  require(!protocol.empty(), "identity_background_run: empty protocol");
  const std::size_t dim = protocol.front().dim_in();
  DensityOperator rho = DensityOperator::maximally_mixed(dim);
  for (const auto& step : protocol) rho = apply_channel(rho, step);
  require(rho.dim() == dim, "identity_background_run: protocol changes the dimension");
  return max_abs_diff(rho.matrix(), Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

}  // namespace lgsim
