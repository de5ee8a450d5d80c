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

// Circuit-level ideal negative result measurement (INRM): system ⊗ ancilla
// qubit, controlled gates CG_k that leave the ancilla in |0> only when the
// system occupies |k>, and post-selection on the ancilla.
//
// Composite basis |s, a> with the ancilla as the fast index.

#include "lgsim/lg_protocol.hpp"

namespace lgsim {

inline const Matrix& pauli_x() {
  static const Matrix x = (Matrix(2, 2) << 0.0, 1.0, 1.0, 0.0).finished();
  return x;
}

inline const Matrix& ancilla_zero() {
  static const Matrix p = projector(2, 0);
  return p;
}

struct ControlledGate {
  std::size_t target;
  UnitaryOperator gate;
};

/// CG_target = |target><target| ⊗ 1 + Σ_{k != target} |k><k| ⊗ X.
inline ControlledGate cg_unitary(std::size_t target, std::size_t dimension = 3) {
  require(target < dimension, "cg_unitary: target out of range");
  Matrix g = Matrix::Zero(2 * dimension, 2 * dimension);
  const Matrix id2 = Matrix::Identity(2, 2);
  for (std::size_t k = 0; k < dimension; ++k) g += kron(projector(dimension, k), k == target ? id2 : pauli_x());
  return {target, UnitaryOperator(std::move(g))};
}

struct PostSelectionRecord {
  double retained = 0.0;
  double lost = 0.0;
  std::size_t branch_target = 0;
};

struct InrmOutcome {
  DensityOperator system;
  PostSelectionRecord record;
};

/// Attach the ancilla in |0>, apply CG_target, keep the ancilla-|0> part and
/// trace the ancilla out. The system state stays sub-normalized.
inline InrmOutcome inrm_run(const DensityOperator& rho_s, std::size_t target) {
  const std::size_t n = rho_s.dim();
  const auto cg = cg_unitary(target, n);
  const DensityOperator composite = evolve(tensor_product(rho_s, DensityOperator::basis(2, 0)), cg.gate);
  const KrausChannel keep_zero({kron(Matrix::Identity(n, n), ancilla_zero())}, false);
  const DensityOperator kept = apply_channel(composite, keep_zero);
  DensityOperator system = partial_trace(kept, {0}, {n, 2});
  const double retained = system.trace();
  return {std::move(system), {retained, rho_s.trace() - retained, target}};
}

/// The post-selected sub-channel of one INRM, read off the circuit:
/// K = (1 ⊗ <0|) CG_target (1 ⊗ |0>).
inline KrausChannel inrm_subchannel(std::size_t target, std::size_t dimension = 3) {
  const auto cg = cg_unitary(target, dimension);
  Matrix k(dimension, dimension);
  for (std::size_t r = 0; r < dimension; ++r)
    for (std::size_t c = 0; c < dimension; ++c) k(r, c) = cg.gate.matrix()(2 * r, 2 * c);
  return KrausChannel({k}, false);
}

/// Sum of the post-selected sub-channels over all targets: the complete
/// dephasing channel {|i><i|}.
inline KrausChannel assemble_full_channel(std::size_t dimension = 3) {
  std::vector<Matrix> ops;
  for (std::size_t t = 0; t < dimension; ++t) ops.push_back(inrm_subchannel(t, dimension).operators().front());
  return KrausChannel(std::move(ops), true);
}

/// Diagonal entries at (system j, ancilla 0) of the composite state: the
/// row P(applied_target, j).
inline RealVector final_readout(const DensityOperator& rho_sa, std::size_t applied_target) {
  require(rho_sa.dim() % 2 == 0, "final_readout: composite dimension must be even");
  const std::size_t n = rho_sa.dim() / 2;
  require(applied_target < n, "final_readout: target out of range");
  const RealVector diag = diagonal_populations(rho_sa);
  RealVector row(n);
  for (std::size_t j = 0; j < n; ++j) row(j) = diag(2 * j);
  return row;
}

/// One two-time setting run entirely through the ancilla circuit: one run
/// per gate target, each evolved to the second time and read out.
inline SettingResult run_setting_circuit(const RotationDynamics& dyn, const Schedule& schedule, TimePair pair,
                                         const DensityOperator& initial) {
  const std::size_t n = dyn.dimension();
  require(initial.dim() == n, "run_setting_circuit: dimension mismatch");
  const auto [ta, tb] = pair_times(schedule, pair);
  const DensityOperator at_first = evolve(initial, dyn.unitary(ta));
  const UnitaryOperator between = tensor_product(dyn.unitary(tb - ta), UnitaryOperator::identity(2));
  const DensityOperator with_ancilla = tensor_product(at_first, DensityOperator::basis(2, 0));

  SettingResult result;
  result.t_first = ta;
  result.t_second = tb;
  result.joint = RealMatrix::Zero(n, n);
  for (std::size_t target = 0; target < n; ++target) {
    const DensityOperator after_gate = evolve(with_ancilla, cg_unitary(target, n).gate);
    result.joint.row(target) = final_readout(evolve(after_gate, between), target).transpose();
    result.row_support.push_back({target});
  }
  result.retained_mass = result.joint.sum();
  return result;
}

inline K3Report k3_circuit(const RotationDynamics& dyn, const Schedule& schedule,
                           std::optional<DensityOperator> initial = std::nullopt) {
  const DensityOperator rho = initial ? *initial : DensityOperator::basis(dyn.dimension(), 0);
  return k3_from_settings(run_setting_circuit(dyn, schedule, TimePair::t1_t2, rho),
                          run_setting_circuit(dyn, schedule, TimePair::t2_t3, rho),
                          run_setting_circuit(dyn, schedule, TimePair::t1_t3, rho),
                          DichotomicObservable::standard(dyn.dimension()));
}

}  // namespace lgsim
