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

// Imperfection models on the physical register: two system spins (the
// spin-1 ⊕ singlet pair) and one ancilla spin, 8 dimensions in total with
// index 4*q1 + 2*q2 + a.
//
// Every gate and every free evolution is followed by relaxation over its
// duration and by a depolarizing pulse error. Gates are additionally
// followed by ancilla dark counts and singlet leakage.

#include <array>
#include <cmath>
#include <limits>
#include <optional>

#include "lgsim/cg_map.hpp"
#include "lgsim/inrm_ancilla.hpp"
#include "lgsim/ledger.hpp"

namespace lgsim {

inline constexpr double kInfiniteTime = std::numeric_limits<double>::infinity();

/// Per-spin T1/T2 in seconds for (system spin 1, system spin 2, ancilla).
/// Infinite values disable the corresponding channel.
struct RelaxationParams {
  std::array<double, 3> t1_s{kInfiniteTime, kInfiniteTime, kInfiniteTime};
  std::array<double, 3> t2_s{kInfiniteTime, kInfiniteTime, kInfiniteTime};

  void validate() const {
    for (std::size_t i = 0; i < 3; ++i) {
      require(t1_s[i] > 0.0 && t2_s[i] > 0.0, "RelaxationParams: T1 and T2 must be positive");
      require(t2_s[i] <= 2.0 * t1_s[i], "RelaxationParams: T2 must not exceed 2 T1");
    }
  }
};

/// Gate lengths in ms. `pulse` is the length of the pulse that realizes a
/// free evolution.
struct GateDurations {
  double cg0 = 40.0;
  double cg1 = 116.0;
  double cg2 = 76.0;
  double pulse = 1.0;

  double gate(std::size_t target) const {
    require(target < 3, "GateDurations::gate: target out of range");
    return target == 0 ? cg0 : (target == 1 ? cg1 : cg2);
  }

  GateDurations scaled(double factor) const {
    require(factor >= 0.0, "GateDurations::scaled: factor must be non-negative");
    return {cg0 * factor, cg1 * factor, cg2 * factor, pulse * factor};
  }

  void validate() const {
    require(cg0 >= 0.0 && cg1 >= 0.0 && cg2 >= 0.0 && pulse >= 0.0, "GateDurations: durations must be non-negative");
  }
};

struct ErrorKnobs {
  double pulse_fidelity = 0.997;
  double dark_count_prob = 0.0;
  double singlet_leak_prob = 0.0;

  static ErrorKnobs neutral() { return {1.0, 0.0, 0.0}; }

  void validate() const {
    require(pulse_fidelity > 0.0 && pulse_fidelity <= 1.0, "ErrorKnobs: pulse fidelity must lie in (0, 1]");
    require(dark_count_prob >= 0.0 && dark_count_prob < 1.0, "ErrorKnobs: dark count probability must lie in [0, 1)");
    require(singlet_leak_prob >= 0.0 && singlet_leak_prob < 1.0, "ErrorKnobs: leak probability must lie in [0, 1)");
  }
};

struct NoiseProfile {
  RelaxationParams relaxation;
  ErrorKnobs knobs;
  GateDurations durations;

  /// Every knob at its neutral value.
  static NoiseProfile ideal() { return {RelaxationParams{}, ErrorKnobs::neutral(), GateDurations{}}; }

  void validate() const {
    relaxation.validate();
    knobs.validate();
    durations.validate();
  }
};

/// Amplitude damping at rate 1/T1 composed with pure dephasing, so that
/// coherences decay as exp(-t/T2) overall.
inline KrausChannel qubit_relaxation(double duration_ms, double t1_s, double t2_s) {
  require(duration_ms >= 0.0, "relax_channel: duration must be non-negative");
  require(t1_s > 0.0 && t2_s > 0.0 && t2_s <= 2.0 * t1_s, "relax_channel: need 0 < T2 <= 2 T1");
  const double t = duration_ms * 1e-3;
  const double gamma = 1.0 - std::exp(-t / t1_s);
  const double f = std::min(1.0, std::exp(-t / t2_s + t / (2.0 * t1_s)));

  std::vector<Matrix> damping;
  damping.push_back((Matrix(2, 2) << 1.0, 0.0, 0.0, std::sqrt(1.0 - gamma)).finished());
  if (gamma > 0.0) damping.push_back((Matrix(2, 2) << 0.0, std::sqrt(gamma), 0.0, 0.0).finished());
  std::vector<Matrix> dephasing;
  dephasing.push_back(Matrix::Identity(2, 2) * std::sqrt((1.0 + f) / 2.0));
  if (f < 1.0) dephasing.push_back((Matrix(2, 2) << 1.0, 0.0, 0.0, -1.0).finished() * std::sqrt((1.0 - f) / 2.0));

  std::vector<Matrix> ops;
  for (const auto& p : dephasing)
    for (const auto& a : damping) ops.push_back(p * a);
  return KrausChannel(std::move(ops), true);
}

/// Relaxation of all three spins over `duration_ms`.
inline KrausChannel relax_channel(double duration_ms, const RelaxationParams& params) {
  params.validate();
  return tensor_product(tensor_product(qubit_relaxation(duration_ms, params.t1_s[0], params.t2_s[0]),
                                       qubit_relaxation(duration_ms, params.t1_s[1], params.t2_s[1])),
                        qubit_relaxation(duration_ms, params.t1_s[2], params.t2_s[2]));
}

/// ρ -> (1 - λ) ρ + λ tr(ρ) 1/d, written with the d² Weyl operators X^a Z^b.
inline KrausChannel depolarizing_channel(std::size_t dim, double lambda) {
  const double d2 = static_cast<double>(dim * dim);
  require(lambda >= 0.0 && lambda <= d2 / (d2 - 1.0), "depolarizing_channel: strength outside the CP range");
  Matrix shift = Matrix::Zero(dim, dim);
  Matrix clock = Matrix::Zero(dim, dim);
  for (std::size_t k = 0; k < dim; ++k) {
    shift((k + 1) % dim, k) = 1.0;
    clock(k, k) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(dim));
  }
  std::vector<Matrix> ops{Matrix::Identity(dim, dim) * std::sqrt(1.0 - lambda + lambda / d2)};
  if (lambda > 0.0) {
    Matrix xa = Matrix::Identity(dim, dim);
    for (std::size_t a = 0; a < dim; ++a) {
      Matrix w = xa;
      for (std::size_t b = 0; b < dim; ++b) {
        if (a != 0 || b != 0) ops.push_back(w * std::sqrt(lambda / d2));
        w = w * clock;
      }
      xa = shift * xa;
    }
  }
  return KrausChannel(std::move(ops), true);
}

/// Depolarizing channel on `dim` levels with the given average gate
/// fidelity F: λ = (1 - F) d / (d - 1).
inline KrausChannel pulse_error_channel(double fidelity, std::size_t dim = 8) {
  require(dim >= 2, "pulse_error_channel: dimension must be at least 2");
  require(fidelity > 0.0 && fidelity <= 1.0, "pulse_error_channel: fidelity must lie in (0, 1]");
  const double d = static_cast<double>(dim);
  require(fidelity >= 1.0 / (d + 1.0), "pulse_error_channel: fidelity below the fully depolarizing value");
  return depolarizing_channel(dim, (1.0 - fidelity) * d / (d - 1.0));
}

/// Ancilla found in |0> although the gate should have flipped it: |1> -> |0>
/// with probability p.
inline KrausChannel dark_count_channel(double p) {
  require(p >= 0.0 && p < 1.0, "dark_count_channel: probability must lie in [0, 1)");
  std::vector<Matrix> anc{(Matrix(2, 2) << 1.0, 0.0, 0.0, std::sqrt(1.0 - p)).finished()};
  if (p > 0.0) anc.push_back((Matrix(2, 2) << 0.0, std::sqrt(p), 0.0, 0.0).finished());
  return tensor_product(KrausChannel::identity(4), KrausChannel(std::move(anc), true));
}

/// Exchange between |s> and |1>_s (the two states sharing the 01/10
/// subspace) with probability p, in both directions.
inline KrausChannel singlet_leak_channel(double p) {
  require(p >= 0.0 && p < 1.0, "singlet_leak_channel: probability must lie in [0, 1)");
  Matrix keep = Matrix::Identity(4, 4);
  keep(1, 1) = std::sqrt(1.0 - p);
  keep(kSingletIndex, kSingletIndex) = std::sqrt(1.0 - p);
  std::vector<Matrix> ops{from_spin1_basis(keep)};
  if (p > 0.0) {
    Matrix up = Matrix::Zero(4, 4);
    up(1, kSingletIndex) = std::sqrt(p);
    ops.push_back(from_spin1_basis(up));
    ops.push_back(from_spin1_basis(up.adjoint()));
  }
  return tensor_product(KrausChannel(std::move(ops), true), KrausChannel::identity(2));
}

/// Collective rotation exp(iφ(σx⊗1 + 1⊗σx)/2) ⊗ 1_ancilla: the spin-1
/// evolution on the triplet, identity on the singlet.
inline UnitaryOperator register_evolution(const RotationDynamics& dyn, double t_ms) {
  require(dyn.dimension() == 3, "register_evolution: requires the spin-1 dynamics");
  const UnitaryOperator sys(embed_spin1(dyn.unitary(t_ms).matrix(), 1.0));
  return tensor_product(sys, UnitaryOperator::identity(2));
}

/// CG_target on the register. The singlet counts as "not the target" and
/// flips the ancilla.
inline UnitaryOperator register_cg(std::size_t target) {
  require(target < 3, "register_cg: target out of range");
  Matrix g = Matrix::Zero(8, 8);
  for (std::size_t k = 0; k < 3; ++k) {
    Matrix p3 = Matrix::Zero(3, 3);
    p3(k, k) = 1.0;
    g += kron(embed_spin1(p3, 0.0), k == target ? Matrix::Identity(2, 2) : pauli_x());
  }
  g += kron(embed_spin1(Matrix::Zero(3, 3), 1.0), pauli_x());
  return UnitaryOperator(std::move(g));
}

/// Channel sequence for one step of the physical protocol.
using StepChannels = std::vector<KrausChannel>;

inline StepChannels evolution_step(const RotationDynamics& dyn, double t_ms, const NoiseProfile& profile) {
  StepChannels steps{KrausChannel::from_unitary(register_evolution(dyn, t_ms))};
  steps.push_back(relax_channel(t_ms + profile.durations.pulse, profile.relaxation));
  if (profile.knobs.pulse_fidelity < 1.0) steps.push_back(pulse_error_channel(profile.knobs.pulse_fidelity));
  return steps;
}

inline StepChannels gate_step(std::size_t target, const NoiseProfile& profile) {
  StepChannels steps{KrausChannel::from_unitary(register_cg(target))};
  if (profile.knobs.dark_count_prob > 0.0) steps.push_back(dark_count_channel(profile.knobs.dark_count_prob));
  if (profile.knobs.singlet_leak_prob > 0.0) steps.push_back(singlet_leak_channel(profile.knobs.singlet_leak_prob));
  steps.push_back(relax_channel(profile.durations.gate(target), profile.relaxation));
  if (profile.knobs.pulse_fidelity < 1.0) steps.push_back(pulse_error_channel(profile.knobs.pulse_fidelity));
  return steps;
}

inline DensityOperator apply_steps(DensityOperator rho, const StepChannels& steps) {
  for (const auto& ch : steps) rho = apply_channel(rho, ch);
  return rho;
}

/// Diagonal of the register state in (level ∈ {0, 1, S, 2}) × (ancilla)
/// order, matching ledger::kRowKeys.
inline std::array<double, ledger::kRows> register_readout(const DensityOperator& rho) {
  require(rho.dim() == 8, "register_readout: expected the 8-level register");
  const Matrix ub = kron(basis_map().matrix(), Matrix::Identity(2, 2));
  const RealVector diag = (ub.adjoint() * rho.matrix() * ub).diagonal().real();
  constexpr std::array<std::size_t, 4> spin1_index = {0, 1, kSingletIndex, 2};  // level -> U_B column
  std::array<double, ledger::kRows> out{};
  for (std::size_t level = 0; level < 4; ++level)
    for (int a = 0; a < 2; ++a) out[2 * level + a] = std::max(0.0, diag(2 * spin1_index[level] + a));
  return out;
}

/// Spin-1 ancilla-0 readout P(j) for j = 0, 1, 2.
inline RealVector spin1_readout(const DensityOperator& rho) {
  const auto rows = register_readout(rho);
  RealVector out(3);
  out << rows[ledger::row_index(ledger::Level::zero, 0)], rows[ledger::row_index(ledger::Level::one, 0)],
      rows[ledger::row_index(ledger::Level::two, 0)];
  return out;
}

/// |0>_s ⊗ |0>, the pure component of the pseudo-pure state.
inline DensityOperator register_ground() { return DensityOperator::basis(8, 0); }

/// One two-time setting on the noisy register, starting from `initial`
/// (default |0>_s|0>). Rows are gate targets; entries are the raw
/// post-selected probabilities, which need not sum to one.
inline SettingResult noisy_run_setting(const RotationDynamics& dyn, const Schedule& schedule, TimePair pair,
                                       const NoiseProfile& profile,
                                       std::optional<DensityOperator> initial = std::nullopt) {
  profile.validate();
  const auto [ta, tb] = pair_times(schedule, pair);
  const DensityOperator start = initial ? *initial : register_ground();
  require(start.dim() == 8, "noisy_run_setting: initial state must live on the 8-level register");
  const DensityOperator at_first = apply_steps(start, evolution_step(dyn, ta, profile));
  const StepChannels between = evolution_step(dyn, tb - ta, profile);

  SettingResult result;
  result.t_first = ta;
  result.t_second = tb;
  result.joint = RealMatrix::Zero(3, 3);
  for (std::size_t target = 0; target < 3; ++target) {
    const DensityOperator after = apply_steps(apply_steps(at_first, gate_step(target, profile)), between);
    result.joint.row(target) = spin1_readout(after).transpose();
    result.row_support.push_back({target});
  }
  result.retained_mass = result.joint.sum();
  return result;
}

inline K3Report noisy_k3(const RotationDynamics& dyn, const Schedule& schedule, const NoiseProfile& profile,
                         std::optional<DensityOperator> initial = std::nullopt) {
  return k3_from_settings(noisy_run_setting(dyn, schedule, TimePair::t1_t2, profile, initial),
                          noisy_run_setting(dyn, schedule, TimePair::t2_t3, profile, initial),
                          noisy_run_setting(dyn, schedule, TimePair::t1_t3, profile, initial),
                          DichotomicObservable::standard(3));
}

inline K3Report noisy_k3(const RotationDynamics& dyn, const Schedule& schedule, const ErrorKnobs& knobs,
                         const RelaxationParams& params, const GateDurations& durations) {
  return noisy_k3(dyn, schedule, NoiseProfile{params, knobs, durations});
}

/// One column of the invasiveness test: prepare |start>_s|0>, then either
/// apply CG_gate or, with no gate, let the register relax for the length of
/// the gate matched to the starting state.
inline ledger::Column simulate_invasiveness(std::size_t start, std::optional<std::size_t> gate,
                                            const NoiseProfile& profile) {
  require(start < 3, "simulate_invasiveness: start must be 0, 1 or 2");
  profile.validate();
  const Matrix system_ket = basis_map().matrix().col(start);
  const Matrix ancilla_ket = Vector::Unit(2, 0);
  DensityOperator rho = DensityOperator::pure(kron(system_ket, ancilla_ket).col(0));
  if (gate) {
    rho = apply_steps(rho, gate_step(*gate, profile));
  } else {
    rho = apply_channel(rho, relax_channel(profile.durations.gate(start), profile.relaxation));
  }
  return ledger::Column::from_values(register_readout(rho));
}

inline ledger::InvasivenessTable simulate_invasiveness_table(const NoiseProfile& profile) {
  ledger::InvasivenessTable t;
  for (std::size_t p = 0; p < 3; ++p) {
    t.states[p].ng = simulate_invasiveness(p, std::nullopt, profile);
    t.states[p].cg = simulate_invasiveness(p, p, profile);
  }
  return t;
}

}  // namespace lgsim
