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

#include <cmath>
#include <utility>

#include "lgsim/numerics.hpp"

namespace lgsim {

struct LineMinimum {
  double x;
  double value;
  int iterations;
};

/// Golden-section search for a minimum of a unimodal `f` on [lo, hi].
/// Stops once the bracket is narrower than `x_tol`.
template <typename F>
LineMinimum golden_section_minimize(F&& f, double lo, double hi, double x_tol = 1e-9, int max_iterations = 500) {
  require(lo < hi, "golden_section_minimize: empty bracket");
  require(x_tol > 0.0, "golden_section_minimize: tolerance must be positive");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int it = 0;
  for (; it < max_iterations && (b - a) > x_tol; ++it) {
    // On ties keep the left part of the bracket.
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x), it};
}

}  // namespace lgsim
