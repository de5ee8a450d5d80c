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

#include "lgsim/noise.hpp"

#include <fstream>
#include <random>

#include "gtest/gtest.h"
#include "lgsim/inrm_ancilla.hpp"
#include "lgsim/json_io.hpp"
#include "support/oracles.hpp"

using namespace lgsim;

namespace {

const RotationDynamics kDyn(1.0, 3);
const Schedule kRef(0.5, 0.208);

NoiseProfile fitted() {
  std::ifstream in(oracle::data_path("noise_profile_fit.json"));
  return io::parse_noise_profile(nlohmann::json::parse(in));
}

double min_eigenvalue(const DensityOperator& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  return es.eigenvalues().minCoeff();
}

}  // namespace

TEST(QubitRelaxation, coherence_decay_matches_t2) {
  Matrix plus = Matrix::Constant(2, 2, 0.5);
  const auto out = apply_channel(DensityOperator(plus), qubit_relaxation(76.0, kInfiniteTime, 0.5));
  EXPECT_NEAR(out.matrix()(0, 1).real(), 0.5 * std::exp(-0.152), 1e-12);
  EXPECT_NEAR(out.matrix()(0, 0).real(), 0.5, 1e-15);

  // With finite T1 the total coherence decay is still exp(-t/T2).
  const auto both = apply_channel(DensityOperator(plus), qubit_relaxation(76.0, 1.0, 0.5));
  EXPECT_NEAR(std::abs(both.matrix()(0, 1)), 0.5 * std::exp(-0.152), 1e-12);
}

TEST(QubitRelaxation, population_decays_to_ground) {
  const auto out = apply_channel(DensityOperator::basis(2, 1), qubit_relaxation(100.0, 0.5, 0.5));
  EXPECT_NEAR(out.matrix()(1, 1).real(), std::exp(-0.2), 1e-12);
  EXPECT_NEAR(out.trace(), 1.0, 1e-12);
}

TEST(QubitRelaxation, rejects_unphysical_parameters) {
  EXPECT_THROW(qubit_relaxation(10.0, 0.1, 0.3), ContractViolation);
  EXPECT_THROW(qubit_relaxation(-1.0, 1.0, 1.0), ContractViolation);
  EXPECT_THROW(qubit_relaxation(10.0, 0.0, 0.0), ContractViolation);
}

TEST(Channels, all_are_complete) {
  RelaxationParams params;
  params.t1_s = {1.0, 2.0, 3.0};
  params.t2_s = {0.4, 0.35, 1.0};
  EXPECT_LE(relax_channel(116.0, params).completeness_defect(), 1e-10);
  EXPECT_LE(pulse_error_channel(0.997).completeness_defect(), 1e-10);
  EXPECT_LE(depolarizing_channel(3, 0.4).completeness_defect(), 1e-10);
  EXPECT_LE(dark_count_channel(0.1).completeness_defect(), 1e-10);
  EXPECT_LE(singlet_leak_channel(0.2).completeness_defect(), 1e-10);
  EXPECT_LE(KrausChannel::from_unitary(register_cg(1)).completeness_defect(), 1e-10);
}

TEST(Depolarizing, action_and_semigroup) {
  std::mt19937_64 rng(43);
  const DensityOperator rho(oracle::random_density_matrix(4, rng));
  const auto once = apply_channel(rho, depolarizing_channel(4, 0.3));
  const Matrix expected = 0.7 * rho.matrix() + 0.3 * Matrix::Identity(4, 4) / 4.0;
  EXPECT_LT(max_abs_diff(once.matrix(), expected), 1e-12);

  // Two depolarizations compose to one with 1 - λ = (1 - λ1)(1 - λ2).
  const auto twice = apply_channel(apply_channel(rho, depolarizing_channel(4, 0.2)), depolarizing_channel(4, 0.25));
  const auto direct = apply_channel(rho, depolarizing_channel(4, 1.0 - 0.8 * 0.75));
  EXPECT_LT(max_abs_diff(twice.matrix(), direct.matrix()), 1e-12);
}

TEST(PulseError, fidelity_maps_to_strength) {
  // Average gate fidelity of the depolarizing channel on a pure state.
  const auto out = apply_channel(register_ground(), pulse_error_channel(0.997));
  const double lambda = 0.003 * 8.0 / 7.0;
  EXPECT_NEAR(out.matrix()(0, 0).real(), 1.0 - lambda + lambda / 8.0, 1e-12);
  EXPECT_NEAR(out.matrix()(0, 0).real(), 0.997, 1e-12);
  EXPECT_THROW(pulse_error_channel(0.05), ContractViolation);
  EXPECT_THROW(pulse_error_channel(1.2), ContractViolation);
}

TEST(DarkCount, moves_ancilla_one_to_zero) {
  const auto start = DensityOperator::basis(8, 1);  // |00>|1>
  const auto out = apply_channel(start, dark_count_channel(0.1));
  EXPECT_NEAR(out.matrix()(0, 0).real(), 0.1, 1e-15);
  EXPECT_NEAR(out.matrix()(1, 1).real(), 0.9, 1e-15);
  EXPECT_THROW(dark_count_channel(1.0), ContractViolation);
}

TEST(SingletLeak, exchanges_middle_triplet_and_singlet) {
  const Vector t1 = basis_map().matrix().col(1);
  const DensityOperator start = DensityOperator::pure(kron(t1, Vector::Unit(2, 0)).col(0));
  const auto rows = register_readout(apply_channel(start, singlet_leak_channel(0.2)));
  EXPECT_NEAR(rows[ledger::row_index(ledger::Level::one, 0)], 0.8, 1e-12);
  EXPECT_NEAR(rows[ledger::row_index(ledger::Level::singlet, 0)], 0.2, 1e-12);
  // Other levels are untouched.
  const auto ground = register_readout(apply_channel(register_ground(), singlet_leak_channel(0.2)));
  EXPECT_NEAR(ground[0], 1.0, 1e-12);
}

TEST(RegisterCg, singlet_flips_ancilla) {
  const Vector s = basis_map().matrix().col(kSingletIndex);
  const DensityOperator start = DensityOperator::pure(kron(s, Vector::Unit(2, 0)).col(0));
  for (std::size_t t = 0; t < 3; ++t) {
    const auto rows = register_readout(evolve(start, register_cg(t)));
    EXPECT_NEAR(rows[ledger::row_index(ledger::Level::singlet, 1)], 1.0, 1e-12);
  }
}

TEST(RegisterEvolution, leaves_singlet_invariant) {
  const Vector s = basis_map().matrix().col(kSingletIndex);
  const DensityOperator start = DensityOperator::pure(kron(s, Vector::Unit(2, 1)).col(0));
  const auto out = evolve(start, register_evolution(kDyn, 0.31));
  EXPECT_LT(max_abs_diff(out.matrix(), start.matrix()), 1e-12);
}

TEST(NoiseOff, reduces_to_circuit_protocol) {
  const auto ideal = NoiseProfile::ideal();
  for (double tau : {0.1, 0.208}) {
    const Schedule s(0.5, tau);
    for (auto pair : kAllPairs) {
      const auto noisy = noisy_run_setting(kDyn, s, pair, ideal);
      const auto circuit = run_setting_circuit(kDyn, s, pair, DensityOperator::basis(3, 0));
      EXPECT_LE((noisy.joint - circuit.joint).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
  EXPECT_NEAR(noisy_k3(kDyn, kRef, ideal).k3, 1.7564736606, 1e-9);
}

TEST(Noise, channels_keep_states_physical) {
  auto profile = fitted();
  profile.knobs.dark_count_prob = 0.02;
  profile.knobs.singlet_leak_prob = 0.01;
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 5; ++trial) {
    DensityOperator rho(oracle::random_density_matrix(8, rng));
    for (const auto& steps : {evolution_step(kDyn, 0.3, profile), gate_step(trial % 3, profile)}) {
      rho = apply_steps(rho, steps);
      EXPECT_NEAR(rho.trace(), 1.0, 1e-10);
      EXPECT_GE(min_eigenvalue(rho), -1e-9);
    }
  }
}

TEST(Noise, relaxation_contracts_distances) {
  const auto profile = fitted();
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 5; ++trial) {
    const DensityOperator a(oracle::random_density_matrix(8, rng));
    const DensityOperator b(oracle::random_density_matrix(8, rng));
    const auto ch = relax_channel(116.0, profile.relaxation);
    auto trace_norm = [](const Matrix& m) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(m);
      return es.eigenvalues().cwiseAbs().sum();
    };
    const double before = trace_norm(a.matrix() - b.matrix());
    const double after = trace_norm(apply_channel(a, ch).matrix() - apply_channel(b, ch).matrix());
    EXPECT_LE(after, before + 1e-12);
  }
}

TEST(Noise, pulse_error_alone_costs_about_a_hundredth) {
  NoiseProfile p = NoiseProfile::ideal();
  p.knobs.pulse_fidelity = 0.997;
  const double drop = 1.7564736606 - noisy_k3(kDyn, kRef, p).k3;
  EXPECT_NEAR(drop, 0.01, 0.01);
}

TEST(Noise, fitted_profile_lands_near_measurement) {
  const double k = noisy_k3(kDyn, kRef, fitted()).k3;
  EXPECT_GE(k, 1.47);
  EXPECT_LE(k, 1.52);
}

TEST(Noise, k3_decreases_along_each_axis) {
  const auto base = fitted();
  auto k3_of = [&](const NoiseProfile& p) { return noisy_k3(kDyn, kRef, p).k3; };
  auto decreasing = [](const std::array<double, 3>& v) { return v[0] >= v[1] && v[1] >= v[2]; };

  std::array<double, 3> by_duration{};
  std::array<double, 3> by_t1_rate{};
  std::array<double, 3> by_t2_rate{};
  std::array<double, 3> by_infidelity{};
  const std::array<double, 3> factors = {0.5, 1.0, 2.0};
  for (std::size_t i = 0; i < 3; ++i) {
    NoiseProfile p = base;
    p.durations = base.durations.scaled(std::array{1.0, 2.0, 4.0}[i]);
    by_duration[i] = k3_of(p);

    p = base;
    for (auto& t : p.relaxation.t1_s) t /= factors[i];
    by_t1_rate[i] = k3_of(p);

    p = base;
    for (auto& t : p.relaxation.t2_s) t /= factors[i];
    by_t2_rate[i] = k3_of(p);

    p = base;
    p.knobs.pulse_fidelity = 1.0 - std::array{0.0, 0.003, 0.006}[i];
    by_infidelity[i] = k3_of(p);
  }
  EXPECT_TRUE(decreasing(by_duration));
  EXPECT_TRUE(decreasing(by_t1_rate));
  EXPECT_TRUE(decreasing(by_t2_rate));
  EXPECT_TRUE(decreasing(by_infidelity));
}

TEST(Invasiveness, ideal_profile_gives_clean_columns) {
  const auto table = simulate_invasiveness_table(NoiseProfile::ideal());
  for (std::size_t p = 0; p < 3; ++p) {
    const auto level = ledger::level_of(p);
    EXPECT_NEAR(table.states[p].ng.at(level, 0), 1.0, 1e-12);
    EXPECT_NEAR(table.states[p].cg.at(level, 0), 1.0, 1e-12);
  }
  const auto report = ledger::audit(table, {});
  EXPECT_NEAR(report.km1_strict, 0.0, 1e-12);
  EXPECT_NEAR(report.malicious, 0.0, 1e-12);
  EXPECT_NEAR(report.bound_strict, 1.0, 1e-12);
}

TEST(Invasiveness, wrong_target_flips_ancilla) {
  const auto col = simulate_invasiveness(0, 2, NoiseProfile::ideal());
  EXPECT_NEAR(col.at(ledger::Level::zero, 1), 1.0, 1e-12);
}

TEST(Invasiveness, noise_produces_losses) {
  auto profile = fitted();
  profile.knobs.dark_count_prob = 0.02;
  const auto table = simulate_invasiveness_table(profile);
  for (std::size_t p = 0; p < 3; ++p) {
    double sum = 0.0;
    for (std::size_t r = 0; r < ledger::kRows; ++r) sum += table.states[p].cg.at(r);
    EXPECT_NEAR(sum, 1.0, 1e-10);
  }
  EXPECT_GT(ledger::losses(table.states[1].ng), 0.0);
  EXPECT_TRUE(table.warnings().empty());
}
