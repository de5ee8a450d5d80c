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

// Fits the system-spin T1 of a noise profile so that the noisy K3 at the
// reference schedule (t1 = 0.5 ms, tau = 0.208 ms) hits a target value, and
// writes the fitted profile as JSON.
//
//   fit_noise_profile [target_k3] [output.json]

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "lgsim/json_io.hpp"
#include "lgsim/lgsim.hpp"

int main(int argc, char** argv) {
  using namespace lgsim;
  const double target = argc > 1 ? std::atof(argv[1]) : 1.495;
  const std::string out_path = argc > 2 ? argv[2] : "noise_profile_fit.json";

  const RotationDynamics dyn(1.0, 3);
  const Schedule schedule(0.5, 0.208);

  // Held fixed: ancilla T1, every T2, pulse fidelity, gate lengths.
  NoiseProfile profile;
  profile.relaxation.t1_s = {1.0, 1.0, 6.0};
  profile.relaxation.t2_s = {0.40, 0.35, 1.0};
  profile.knobs = {0.997, 0.0, 0.0};

  auto with_t1 = [&](double t1) {
    NoiseProfile p = profile;
    p.relaxation.t1_s[0] = t1;
    p.relaxation.t1_s[1] = t1;
    return p;
  };
  auto mismatch = [&](double t1) {
    const double k = noisy_k3(dyn, schedule, with_t1(t1)).k3;
    return (k - target) * (k - target);
  };

  const auto fit = golden_section_minimize(mismatch, 0.5, 5.0, 1e-6);
  const double t1 = std::round(fit.x * 1e4) / 1e4;
  profile = with_t1(t1);
  const double achieved = noisy_k3(dyn, schedule, profile).k3;

  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "cannot write " << out_path << '\n';
    return 1;
  }
  out << io::noise_profile_to_json(profile).dump(2) << '\n';
  std::printf("system T1 = %.4f s, noisy K3 = %.6f (target %.4f)\n", t1, achieved, target);
  return 0;
}
