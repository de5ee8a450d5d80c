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

// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../tools/lgsim_cli.hpp"
#include "lgsim/lgsim.hpp"
#include "support/oracles.hpp"

using namespace lgsim;
using nlohmann::json;

namespace {

const RotationDynamics kDyn(1.0, 3);
const Schedule kRef(0.5, 0.208);

json load(const std::string& name) {
  std::ifstream in(oracle::data_path(name));
  return json::parse(in);
}

RealMatrix matrix_of(const json& rows) {
  RealMatrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j].get<double>();
  return m;
}

struct Check {
  std::vector<std::string> failures;
  void near(const std::string& what, double got, double want, double tol) {
    if (!(std::abs(got - want) <= tol)) {
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s = %.10g, want %.10g +/- %.1e", what.c_str(), got, want, tol);
      failures.emplace_back(buf);
    }
  }
  void at_most(const std::string& what, double got, double limit) {
    if (!(got <= limit)) {
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s = %.10g exceeds %.10g", what.c_str(), got, limit);
      failures.emplace_back(buf);
    }
  }
  void that(const std::string& what, bool ok) {
    if (!ok) failures.push_back(what);
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ScanPoint best_of(const std::vector<ScanPoint>& scan) {
  ScanPoint best = scan.front();
  for (const auto& p : scan)
    if (p.k3 > best.k3) best = p;
  return best;
}

const std::vector<double>& micro_grid() {
  static const auto grid = tau_grid(0.001, 0.5, 0.001);
  return grid;
}

void theoretical_maximum(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  c.near("K3(0.208)", k3(kDyn, kRef, UpdateRule::dephasing_inrm(3)).k3, 1.7566, 1e-3);
  const auto best = best_of(scan_tau(kDyn, 0.5, UpdateRule::dephasing_inrm(3), DensityOperator::basis(3, 0), micro_grid()));
  c.near("argmax tau", best.tau_ms, 0.208, 1e-3);
  c.at_most("runtime [s]", seconds_since(t0), 10.0);
}

void luders_ceiling(Check& c) {
  const auto scan = scan_tau(kDyn, 0.5, UpdateRule::luders(DichotomicObservable::standard(3)),
                             DensityOperator::basis(3, 0), micro_grid());
  c.at_most("max Lueders K3", best_of(scan).k3, 1.5 + 1e-6);
  c.near("optimize N=2", optimize_k3(2, RuleKind::dephasing_inrm).k3, 1.5, 1e-3);
}

void table_theory(Check& c) {
  const json reference = load("noiseless_joint_tables.json")["settings"];
  for (auto pair : kAllPairs) {
    const std::string label(pair_label(pair));
    const RealMatrix want = matrix_of(reference[label]);
    const auto got = run_setting(kDyn, kRef, UpdateRule::dephasing_inrm(3), pair, DensityOperator::basis(3, 0));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const std::string entry = label + "/" + std::to_string(i) + std::to_string(j);
        if (pair == TimePair::t2_t3 && i == 0 && j == 0)
          c.near(entry, got.joint(i, j), 0.0541, 1e-3);
        else
          c.near(entry, got.joint(i, j), want(i, j), 1e-3);
      }
  }
  std::vector<std::string> args = {"lgsim", "setting", "23"};
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  c.that("setting 23 exits 0", code == 0);
  if (code == 0) {
    const json doc = json::parse(out.str());
    c.that("setting 23 emits the 00 discrepancy note",
           doc["notes"].size() == 1 && doc["notes"][0].get<std::string>().find("0.0778") != std::string::npos);
  }
}

void experimental_correlations(Check& c) {
  const json settings = load("measured_joint_tables.json")["settings"];
  const auto q = DichotomicObservable::standard(3);
  const auto s12 = SettingResult::from_table(matrix_of(settings["12"]));
  const auto s23 = SettingResult::from_table(matrix_of(settings["23"]));
  const auto s13 = SettingResult::from_table(matrix_of(settings["13"]));
  const auto r = k3_from_settings(s12, s23, s13, q);
  c.near("C12", r.c12, 0.5415, 5e-4);
  c.near("C23", r.c23, 0.2941, 5e-4);
  c.near("C13", r.c13, -0.6758, 5e-4);
  c.near("K3", r.k3, 1.5114, 5e-4);
}

void ledger_golden(Check& c) {
  const auto in = io::parse_ledger_input(load("measured_invasiveness.json"));
  c.near("P.E.0", in.pe.pe[0], 0.0187, 1e-12);
  c.near("P.E.1", in.pe.pe[1], 0.0436, 1e-12);
  c.near("P.E.2", in.pe.pe[2], 0.0152, 1e-12);
  const auto r = ledger::audit(in.table, in.pe, in.k3_exp);
  const std::array<double, 3> c_ng = {-0.1686, 0.0443, 0.6360};
  const std::array<double, 3> c_cg = {-0.1743, 0.0468, 0.5498};
  const std::array<double, 3> dc = {-0.0057, 0.0025, -0.0862};
  for (std::size_t p = 0; p < 3; ++p) {
    c.near("C ng " + std::to_string(p), r.c_ng[p], c_ng[p], 5e-4);
    c.near("C cg " + std::to_string(p), r.c_cg[p], c_cg[p], 5e-4);
    c.near("dC " + std::to_string(p), r.delta_c[p], dc[p], 5e-4);
  }
  c.near("KM1 strict", r.km1_strict, 0.1936, 5e-4);
  c.near("KM1 liberal", r.km1_liberal, 0.0912, 5e-4);
  c.near("Non.Mal", r.non_malicious, 0.0544, 5e-4);
  c.near("Mal", r.malicious, 0.2095, 5e-4);
  c.near("bound strict", r.bound_strict, 1.4031, 5e-4);
  c.near("bound liberal", r.bound_liberal, 1.3007, 5e-4);
  c.that("dark-count range present", r.dark_count_range.has_value());
  if (r.dark_count_range) {
    c.near("dark-count low", r.dark_count_range->first, 0.1081, 2e-3);
    c.near("dark-count high", r.dark_count_range->second, 0.2105, 2e-3);
  }
}

void circuit_equivalence(Check& c) {
  for (auto pair : kAllPairs) {
    const auto rho = DensityOperator::basis(3, 0);
    const auto abstract = run_setting(kDyn, kRef, UpdateRule::dephasing_inrm(3), pair, rho);
    const auto circuit = run_setting_circuit(kDyn, kRef, pair, rho);
    c.at_most("circuit vs abstract " + std::string(pair_label(pair)),
              (abstract.joint - circuit.joint).cwiseAbs().maxCoeff(), 1e-12);
  }
  c.at_most("subchannel completeness defect", assemble_full_channel().completeness_defect(), 1e-10);
}

// Deviation-normalized joint tables from a PPS run.
K3Report pps_k3(double eps) {
  const auto ideal = NoiseProfile::ideal();
  std::array<SettingResult, 3> settings;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto pps = noisy_run_setting(kDyn, kRef, kAllPairs[i], ideal, pps_state(eps));
    const auto bg = noisy_run_setting(kDyn, kRef, kAllPairs[i], ideal, DensityOperator::maximally_mixed(8));
    RealMatrix dev(3, 3);
    for (int r = 0; r < 3; ++r) dev.row(r) = deviation_readout(pps.joint.row(r).transpose(), bg.joint.row(r).transpose(), eps).transpose();
    settings[i] = SettingResult::from_table(dev);
  }
  return k3_from_settings(settings[0], settings[1], settings[2], DichotomicObservable::standard(3));
}

void unitality(Check& c) {
  const auto ideal = NoiseProfile::ideal();
  for (auto pair : kAllPairs) {
    const std::string label(pair_label(pair));
    c.at_most("qutrit background " + label, identity_background_run(lg_protocol_channel(kDyn, kRef, pair)), 1e-12);
    c.at_most("two-qubit background " + label, identity_background_run(two_qubit_protocol_channel(kDyn, kRef, pair)),
              1e-12);
    const auto [ta, tb] = pair_times(kRef, pair);
    for (std::size_t target = 0; target < 3; ++target) {
      std::vector<KrausChannel> register_protocol;
      for (const auto& steps : {evolution_step(kDyn, ta, ideal), gate_step(target, ideal), evolution_step(kDyn, tb - ta, ideal)})
        register_protocol.insert(register_protocol.end(), steps.begin(), steps.end());
      c.at_most("register background " + label + " CG" + std::to_string(target),
                identity_background_run(register_protocol), 1e-12);
    }
  }
  const double k_pure = pps_k3(1.0).k3;
  const double k_small = pps_k3(1e-5).k3;
  c.near("PPS K3 eps=1e-5 vs eps=1", k_small, k_pure, 1e-10);
  c.near("PPS K3 vs noiseless", k_pure, k3(kDyn, kRef, UpdateRule::dephasing_inrm(3)).k3, 1e-10);
}

void macrorealist_oracle(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20260101);
  double worst = -3.0;
  for (int i = 0; i < 10000; ++i) {
    const auto m = oracle::ClassicalModel::random(rng);
    std::vector<std::size_t> minus;
    for (std::size_t s = 0; s < 3; ++s)
      if (m.outcome[s] < 0) minus.push_back(s);
    double value = m.k3_direct();
    if (!minus.empty() && minus.size() < 3) {
      // Route the model through the library's correlation path as well.
      const DichotomicObservable q(3, minus);
      value = k3_from_settings(SettingResult::from_table(m.joint(1, 2)), SettingResult::from_table(m.joint(2, 3)),
                               SettingResult::from_table(m.joint(1, 3)), q)
                  .k3;
      c.near("library vs direct K3 (model " + std::to_string(i) + ")", value, m.k3_direct(), 1e-12);
    }
    worst = std::max(worst, value);
  }
  c.at_most("max classical K3", worst, 1.0 + 1e-12);
  c.at_most("runtime [s]", seconds_since(t0), 30.0);
}

void noise_behaviour(Check& c) {
  const auto ideal = NoiseProfile::ideal();
  for (auto pair : kAllPairs) {
    const auto noisy = noisy_run_setting(kDyn, kRef, pair, ideal);
    const auto clean = run_setting(kDyn, kRef, UpdateRule::dephasing_inrm(3), pair, DensityOperator::basis(3, 0));
    c.at_most("noise-off " + std::string(pair_label(pair)), (noisy.joint - clean.joint).cwiseAbs().maxCoeff(), 1e-10);
  }

  const auto base = io::parse_noise_profile(load("noise_profile_fit.json"));
  auto k3_of = [&](const NoiseProfile& p) { return noisy_k3(kDyn, kRef, p).k3; };
  auto monotone = [&](const std::string& axis, const std::function<NoiseProfile(std::size_t)>& at) {
    std::array<double, 3> v{};
    for (std::size_t i = 0; i < 3; ++i) v[i] = k3_of(at(i));
    c.that(axis + " grid non-increasing", v[0] >= v[1] && v[1] >= v[2]);
  };
  monotone("duration scale", [&](std::size_t i) {
    NoiseProfile p = base;
    p.durations = base.durations.scaled(std::array{1.0, 2.0, 4.0}[i]);
    return p;
  });
  monotone("1/T1", [&](std::size_t i) {
    NoiseProfile p = base;
    for (auto& t : p.relaxation.t1_s) t /= std::array{0.5, 1.0, 2.0}[i];
    return p;
  });
  monotone("1/T2", [&](std::size_t i) {
    NoiseProfile p = base;
    for (auto& t : p.relaxation.t2_s) t /= std::array{0.5, 1.0, 2.0}[i];
    return p;
  });
  monotone("pulse infidelity", [&](std::size_t i) {
    NoiseProfile p = base;
    p.knobs.pulse_fidelity = 1.0 - std::array{0.0, 0.003, 0.006}[i];
    return p;
  });
  const double fitted = k3_of(base);
  c.that("fitted profile K3 = " + std::to_string(fitted) + " in [1.47, 1.52]", fitted >= 1.47 && fitted <= 1.52);
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria = {
      {"theoretical maximum K3 = 1.7566 at tau = 0.208 ms", theoretical_maximum},
      {"Lueders ceiling 1.5", luders_ceiling},
      {"noiseless joint tables", table_theory},
      {"experimental correlations", experimental_correlations},
      {"ledger golden values", ledger_golden},
      {"circuit equivalence", circuit_equivalence},
      {"unitality and PPS invariance", unitality},
      {"macrorealist oracle", macrorealist_oracle},
      {"noise behaviour", noise_behaviour},
  };
  const auto t0 = std::chrono::steady_clock::now();
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    const bool ok = c.failures.empty();
    std::printf("%s %zu %s\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str());
    for (const auto& f : c.failures) std::printf("    %s\n", f.c_str());
    failed += ok ? 0 : 1;
  }
  const double total = seconds_since(t0);
  std::printf("%d/%zu criteria passed in %.2f s\n", static_cast<int>(criteria.size()) - failed, criteria.size(), total);
  return failed == 0 && total < 60.0 ? 0 : 1;
}
