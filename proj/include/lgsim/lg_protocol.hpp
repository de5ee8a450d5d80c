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

// The three-time Leggett-Garg protocol on an N-level system: spin x-rotation
// dynamics, dichotomic observable, measurement update rules, two-time
// settings, correlations and the K3 string.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lgsim/golden_section.hpp"
#include "lgsim/qop.hpp"

namespace lgsim {

/// Spin-(N-1)/2 operator S_x in the basis m = j, j-1, ..., -j.
inline RealMatrix spin_x(std::size_t dimension) {
  require(dimension >= 2, "spin_x: dimension must be at least 2");
  const double j = 0.5 * static_cast<double>(dimension - 1);
  RealMatrix sx = RealMatrix::Zero(dimension, dimension);
  for (std::size_t k = 0; k + 1 < dimension; ++k) {
    const double m = j - static_cast<double>(k);
    const double v = 0.5 * std::sqrt(j * (j + 1.0) - m * (m - 1.0));
    sx(k, k + 1) = v;
    sx(k + 1, k) = v;
  }
  return sx;
}

/// Free evolution U(t) = exp(i 2π Ω t S_x): a rotation about x by φ = 2πΩt.
/// Ω in kHz, t in ms.
class RotationDynamics {
 public:
  explicit RotationDynamics(double omega_khz = 1.0, std::size_t dimension = 3)
      : omega_khz_(omega_khz), dimension_(dimension) {
    require(omega_khz > 0.0, "RotationDynamics: omega must be positive");
    require(dimension >= 2 && dimension <= 32, "RotationDynamics: dimension must be in [2, 32]");
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(spin_x(dimension));
    eigenvalues_ = es.eigenvalues();
    eigenvectors_ = es.eigenvectors();
  }

  double omega_khz() const { return omega_khz_; }
  std::size_t dimension() const { return dimension_; }
  double angle(double t_ms) const { return 2.0 * std::numbers::pi * omega_khz_ * t_ms; }

  UnitaryOperator unitary(double t_ms) const {
    require(t_ms >= 0.0, "evolution_unitary: time must be non-negative");
    const double phi = angle(t_ms);
    Vector phases(dimension_);
    for (std::size_t k = 0; k < dimension_; ++k) phases(k) = std::polar(1.0, phi * eigenvalues_(k));
    const Matrix v = eigenvectors_.cast<Complex>();
    return UnitaryOperator(v * phases.asDiagonal() * v.adjoint());
  }

 private:
  double omega_khz_;
  std::size_t dimension_;
  RealVector eigenvalues_;
  RealMatrix eigenvectors_;
};

inline UnitaryOperator evolution_unitary(const RotationDynamics& dyn, double t_ms) { return dyn.unitary(t_ms); }

/// Measurement times t1, t2 = t1 + τ, t3 = t2 + τ (ms).
class Schedule {
 public:
  Schedule(double t1_ms, double tau_ms) : t1_(t1_ms), tau_(tau_ms) {
    require(t1_ms >= 0.0, "Schedule: t1 must be non-negative");
    require(tau_ms > 0.0, "Schedule: tau must be positive");
  }
  double t1() const { return t1_; }
  double tau() const { return tau_; }
  double t2() const { return t1_ + tau_; }
  double t3() const { return t1_ + 2.0 * tau_; }

 private:
  double t1_;
  double tau_;
};

enum class TimePair { t1_t2, t2_t3, t1_t3 };

inline constexpr std::array<TimePair, 3> kAllPairs = {TimePair::t1_t2, TimePair::t2_t3, TimePair::t1_t3};

inline std::string_view pair_label(TimePair pair) {
  switch (pair) {
    case TimePair::t1_t2: return "12";
    case TimePair::t2_t3: return "23";
    case TimePair::t1_t3: return "13";
  }
  return "";
}

inline std::optional<TimePair> parse_pair(std::string_view label) {
  for (auto p : kAllPairs)
    if (pair_label(p) == label) return p;
  return std::nullopt;
}

inline std::pair<double, double> pair_times(const Schedule& s, TimePair pair) {
  switch (pair) {
    case TimePair::t1_t2: return {s.t1(), s.t2()};
    case TimePair::t2_t3: return {s.t2(), s.t3()};
    case TimePair::t1_t3: return {s.t1(), s.t3()};
  }
  return {0.0, 0.0};
}

/// Q with eigenvalue -1 on `minus_states` and +1 elsewhere.
class DichotomicObservable {
 public:
  DichotomicObservable(std::size_t dimension, const std::vector<std::size_t>& minus_states)
      : values_(dimension, 1) {
    require(dimension >= 2, "DichotomicObservable: dimension must be at least 2");
    for (auto k : minus_states) {
      require(k < dimension, "DichotomicObservable: state index out of range");
      values_[k] = -1;
    }
    const auto minus = std::count(values_.begin(), values_.end(), -1);
    require(minus > 0 && static_cast<std::size_t>(minus) < dimension,
            "DichotomicObservable: minus set must be non-empty and proper");
  }

  /// Q = -|0><0| + Σ_{i>0} |i><i|.
  static DichotomicObservable standard(std::size_t dimension) { return DichotomicObservable(dimension, {0}); }

  std::size_t dimension() const { return values_.size(); }
  int value(std::size_t k) const { return values_.at(k); }
  RealVector as_vector() const {
    RealVector v(values_.size());
    for (std::size_t k = 0; k < values_.size(); ++k) v(k) = values_[k];
    return v;
  }

 private:
  std::vector<int> values_;
};

enum class RuleKind { luders, dephasing_inrm, custom };

/// One Kraus operator of a measurement together with the basis states it
/// certifies (all of which must share one Q eigenvalue).
struct BranchSpec {
  Matrix kraus;
  std::vector<std::size_t> support;
};

class UpdateRule {
 public:
  /// Two projectors onto the Q = -1 and Q = +1 eigenspaces.
  static UpdateRule luders(const DichotomicObservable& q) {
    const std::size_t n = q.dimension();
    BranchSpec minus{Matrix::Zero(n, n), {}};
    BranchSpec plus{Matrix::Zero(n, n), {}};
    for (std::size_t k = 0; k < n; ++k) {
      auto& b = q.value(k) < 0 ? minus : plus;
      b.kraus(k, k) = 1.0;
      b.support.push_back(k);
    }
    return UpdateRule(RuleKind::luders, {minus, plus});
  }

  /// N rank-one projectors |i><i|: complete dephasing in the measured basis.
  static UpdateRule dephasing_inrm(std::size_t dimension) {
    std::vector<BranchSpec> branches;
    for (std::size_t k = 0; k < dimension; ++k) branches.push_back({projector(dimension, k), {k}});
    return UpdateRule(RuleKind::dephasing_inrm, std::move(branches));
  }

  static UpdateRule custom(const KrausChannel& channel, std::vector<std::vector<std::size_t>> supports) {
    require(channel.is_complete(), "UpdateRule::custom: channel must be complete");
    require(supports.size() == channel.operators().size(), "UpdateRule::custom: one support set per operator");
    std::vector<BranchSpec> branches;
    for (std::size_t i = 0; i < supports.size(); ++i) branches.push_back({channel.operators()[i], supports[i]});
    return UpdateRule(RuleKind::custom, std::move(branches));
  }

  static UpdateRule of_kind(RuleKind kind, std::size_t dimension) {
    require(kind != RuleKind::custom, "UpdateRule::of_kind: custom rules need an explicit channel");
    return kind == RuleKind::luders ? luders(DichotomicObservable::standard(dimension)) : dephasing_inrm(dimension);
  }

  RuleKind kind() const { return kind_; }
  const std::vector<BranchSpec>& branches() const { return branches_; }
  std::size_t dimension() const { return static_cast<std::size_t>(branches_.front().kraus.cols()); }

  KrausChannel channel() const {
    std::vector<Matrix> ops;
    for (const auto& b : branches_) ops.push_back(b.kraus);
    return KrausChannel(std::move(ops), true);
  }

 private:
  UpdateRule(RuleKind kind, std::vector<BranchSpec> branches) : kind_(kind), branches_(std::move(branches)) {
    require(!branches_.empty(), "UpdateRule: no branches");
    channel();  // validates completeness
  }

  RuleKind kind_;
  std::vector<BranchSpec> branches_;
};

struct MeasurementBranch {
  std::size_t branch;  // index into UpdateRule::branches()
  DensityOperator state;
  double probability;
};

/// Branches of a measurement with non-zero probability. States are left
/// sub-normalized; their trace equals the branch probability.
inline std::vector<MeasurementBranch> measure_with_update(const DensityOperator& rho, const UpdateRule& rule) {
  require(rule.dimension() == rho.dim(), "measure_with_update: dimension mismatch");
  require(std::abs(rho.trace() - 1.0) <= tolerances().structural, "measure_with_update: state must be normalized");
  std::vector<MeasurementBranch> out;
  const auto& branches = rule.branches();
  for (std::size_t b = 0; b < branches.size(); ++b) {
    const Matrix& k = branches[b].kraus;
    DensityOperator post(k * rho.matrix() * k.adjoint());
    if (post.trace() > tolerances().algebraic) out.push_back({b, post, post.trace()});
  }
  return out;
}

/// Joint probabilities of one two-time experiment: rows are branches of the
/// first measurement, columns the basis state found at the second time.
struct SettingResult {
  RealMatrix joint;
  std::vector<std::vector<std::size_t>> row_support;
  double retained_mass = 0.0;
  double t_first = 0.0;
  double t_second = 0.0;

  /// Wraps a square table whose row i certifies basis state i.
  static SettingResult from_table(const RealMatrix& table) {
    require(table.rows() == table.cols() && table.rows() >= 2, "SettingResult::from_table: table must be square");
    SettingResult r;
    r.joint = table;
    for (Eigen::Index i = 0; i < table.rows(); ++i) r.row_support.push_back({static_cast<std::size_t>(i)});
    r.retained_mass = table.sum();
    return r;
  }
};

inline SettingResult run_setting(const RotationDynamics& dyn, const Schedule& schedule, const UpdateRule& rule,
                                 TimePair pair, const DensityOperator& initial) {
  require(initial.dim() == dyn.dimension() && rule.dimension() == dyn.dimension(), "run_setting: dimension mismatch");
  require(std::abs(initial.trace() - 1.0) <= tolerances().structural, "run_setting: initial state must be normalized");
  const auto [ta, tb] = pair_times(schedule, pair);
  const DensityOperator at_first = evolve(initial, dyn.unitary(ta));
  const UnitaryOperator between = dyn.unitary(tb - ta);

  SettingResult result;
  result.t_first = ta;
  result.t_second = tb;
  const auto& branches = rule.branches();
  result.joint = RealMatrix::Zero(branches.size(), dyn.dimension());
  for (std::size_t b = 0; b < branches.size(); ++b) {
    const Matrix& k = branches[b].kraus;
    const DensityOperator post(k * at_first.matrix() * k.adjoint());
    result.joint.row(b) = diagonal_populations(evolve(post, between)).transpose();
    result.row_support.push_back(branches[b].support);
  }
  result.retained_mass = result.joint.sum();
  return result;
}

/// Σ q(first) q(j) P(first, j).
inline double correlation(const SettingResult& result, const DichotomicObservable& q) {
  require(static_cast<std::size_t>(result.joint.cols()) == q.dimension(), "correlation: dimension mismatch");
  require(result.row_support.size() == static_cast<std::size_t>(result.joint.rows()),
          "correlation: every row needs a support set");
  const RealVector qv = q.as_vector();
  double c = 0.0;
  for (Eigen::Index r = 0; r < result.joint.rows(); ++r) {
    const auto& support = result.row_support[r];
    require(!support.empty(), "correlation: empty row support");
    const int first = q.value(support.front());
    for (auto s : support) require(q.value(s) == first, "correlation: row support mixes Q eigenvalues");
    c += first * result.joint.row(r).dot(qv);
  }
  return c;
}

struct K3Report {
  double c12 = 0.0;
  double c23 = 0.0;
  double c13 = 0.0;
  double k3 = 0.0;

  static K3Report from_correlations(double c12, double c23, double c13) { return {c12, c23, c13, c12 + c23 - c13}; }
};

inline K3Report k3_from_settings(const SettingResult& s12, const SettingResult& s23, const SettingResult& s13,
                                 const DichotomicObservable& q) {
  return K3Report::from_correlations(correlation(s12, q), correlation(s23, q), correlation(s13, q));
}

inline K3Report k3(const RotationDynamics& dyn, const Schedule& schedule, const UpdateRule& rule,
                   const DensityOperator& initial, const DichotomicObservable& q) {
  return k3_from_settings(run_setting(dyn, schedule, rule, TimePair::t1_t2, initial),
                          run_setting(dyn, schedule, rule, TimePair::t2_t3, initial),
                          run_setting(dyn, schedule, rule, TimePair::t1_t3, initial), q);
}

/// K3 with the standard observable and, by default, the |0> initial state.
inline K3Report k3(const RotationDynamics& dyn, const Schedule& schedule, const UpdateRule& rule,
                   std::optional<DensityOperator> initial = std::nullopt) {
  const DensityOperator rho = initial ? *initial : DensityOperator::basis(dyn.dimension(), 0);
  return k3(dyn, schedule, rule, rho, DichotomicObservable::standard(dyn.dimension()));
}

struct ScanPoint {
  double tau_ms;
  double k3;
};

/// Evenly spaced τ grid over [start, stop] inclusive.
inline std::vector<double> tau_grid(double start, double stop, double step) {
  std::vector<double> grid;
  if (!(step > 0.0) || stop < start) return grid;
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  grid.reserve(n);
  for (std::size_t i = 0; i < n; ++i) grid.push_back(start + static_cast<double>(i) * step);
  return grid;
}

inline std::vector<ScanPoint> scan_tau(const RotationDynamics& dyn, double t1_ms, const UpdateRule& rule,
                                       const DensityOperator& initial, const std::vector<double>& grid) {
  require(!grid.empty(), "scan_tau: empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require(grid[i] > 0.0, "scan_tau: grid values must be positive");
    if (i > 0) require(grid[i] > grid[i - 1], "scan_tau: grid must be strictly increasing");
  }
  const auto q = DichotomicObservable::standard(dyn.dimension());
  std::vector<ScanPoint> out;
  out.reserve(grid.size());
  for (double tau : grid) out.push_back({tau, k3(dyn, Schedule(t1_ms, tau), rule, initial, q).k3});
  return out;
}

struct OptimizeOptions {
  double omega_khz = 1.0;
  double t1_ms = 0.5;
  double tau_max_ms = 0.5;
  double grid_step_ms = 0.001;
  double tau_tolerance_ms = 1e-9;
};

struct K3Optimum {
  double tau_ms;
  double k3;
};

/// Maximizes K3 over τ for the spin-(N-1)/2 x-rotation family started in |0>:
/// a grid scan (ties to the smaller τ) refined by golden-section search on
/// the neighbouring grid cells.
inline K3Optimum optimize_k3(std::size_t dimension, RuleKind kind, const OptimizeOptions& opt = {}) {
  require(dimension >= 2 && dimension <= 32, "optimize_k3: dimension must be in [2, 32]");
  const RotationDynamics dyn(opt.omega_khz, dimension);
  const UpdateRule rule = UpdateRule::of_kind(kind, dimension);
  const DensityOperator initial = DensityOperator::basis(dimension, 0);
  const auto q = DichotomicObservable::standard(dimension);
  auto value = [&](double tau) { return k3(dyn, Schedule(opt.t1_ms, tau), rule, initial, q).k3; };

  const auto scan = scan_tau(dyn, opt.t1_ms, rule, initial, tau_grid(opt.grid_step_ms, opt.tau_max_ms, opt.grid_step_ms));
  ScanPoint best = scan.front();
  for (const auto& p : scan)
    if (p.k3 > best.k3) best = p;

  const double lo = std::max(best.tau_ms - opt.grid_step_ms, 0.5 * opt.grid_step_ms);
  const double hi = std::min(best.tau_ms + opt.grid_step_ms, opt.tau_max_ms);
  const auto refined = golden_section_minimize([&](double tau) { return -value(tau); }, lo, hi, opt.tau_tolerance_ms);
  if (-refined.value > best.k3) return {refined.x, -refined.value};
  return {best.tau_ms, best.k3};
}

}  // namespace lgsim
