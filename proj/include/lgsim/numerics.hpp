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

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace lgsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Thrown when a caller breaks an operation's precondition (dimension
/// mismatch, out-of-range parameter, malformed table).
class ContractViolation : public std::invalid_argument {
 public:
  explicit ContractViolation(const std::string& what) : std::invalid_argument(what) {}
};

/// Global numerics configuration. Every tolerance used for validating
/// states, unitaries and channels is read from here.
struct Tolerances {
  double structural = 1e-10;  // hermiticity, trace, unitarity, completeness
  double algebraic = 1e-12;   // identities that should hold to rounding
  double eigen_floor = 1e-9;  // smallest admissible eigenvalue of a state
};

inline Tolerances& tolerances() {
  static Tolerances config;
  return config;
}

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ContractViolation(message);
}

/// Largest absolute elementwise difference between two matrices of equal shape.
template <typename A, typename B>
double max_abs_diff(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace lgsim
