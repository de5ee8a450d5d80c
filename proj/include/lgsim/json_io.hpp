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

// JSON encodings of the ledger input/report and of noise profiles.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "lgsim/ledger.hpp"
#include "lgsim/noise.hpp"

namespace lgsim::io {

using nlohmann::json;

/// Input that does not match the expected schema; `path` is a JSON pointer
/// to the offending field.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

namespace detail {

inline const json& member(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + "/" + key, "missing required key \"" + key + "\"");
  return *it;
}

inline double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path, "expected a number");
  return v.get<double>();
}

/// Number, or null meaning +infinity.
inline double time_or_infinity(const json& v, const std::string& path) {
  if (v.is_null()) return kInfiniteTime;
  return number(v, path);
}

inline std::array<double, 3> triple(const json& v, const std::string& path, bool null_is_infinity = false) {
  if (!v.is_array() || v.size() != 3) throw SchemaError(path, "expected an array of three numbers");
  std::array<double, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    const std::string p = path + "/" + std::to_string(i);
    out[i] = null_is_infinity ? time_or_infinity(v[i], p) : number(v[i], p);
  }
  return out;
}

inline json time_value(double t) { return std::isinf(t) ? json(nullptr) : json(t); }

}  // namespace detail

/// Rows are either plain probabilities or {"p": value, "sigma": uncertainty}.
inline ledger::Column parse_column(const json& obj, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path, "expected an object of rows");
  ledger::Column col;
  for (std::size_t r = 0; r < ledger::kRows; ++r) {
    const std::string key(ledger::kRowKeys[r]);
    const json& v = detail::member(obj, key, path);
    const std::string p = path + "/" + key;
    if (v.is_object()) {
      col.p[r] = detail::number(detail::member(v, "p", p), p + "/p");
      if (v.contains("sigma")) col.sigma[r] = detail::number(v["sigma"], p + "/sigma");
    } else {
      col.p[r] = detail::number(v, p);
    }
  }
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!ledger::row_from_key(it.key())) throw SchemaError(path + "/" + it.key(), "unknown row key");
  return col;
}

struct LedgerInput {
  ledger::InvasivenessTable table;
  ledger::PreparationErrors pe;
  std::optional<double> k3_exp;
};

inline LedgerInput parse_ledger_input(const json& doc) {
  LedgerInput in;
  const json& states = detail::member(doc, "states", "");
  for (std::size_t p = 0; p < 3; ++p) {
    const std::string key = std::to_string(p);
    const std::string path = "/states/" + key;
    const json& s = detail::member(states, key, "/states");
    in.table.states[p].ng = parse_column(detail::member(s, "ng", path), path + "/ng");
    in.table.states[p].cg = parse_column(detail::member(s, "cg", path), path + "/cg");
  }
  in.pe.pe = detail::triple(detail::member(doc, "pe", ""), "/pe");
  for (std::size_t i = 0; i < 3; ++i)
    if (in.pe.pe[i] < 0.0 || in.pe.pe[i] >= 1.0)
      throw SchemaError("/pe/" + std::to_string(i), "preparation error must lie in [0, 1)");
  if (doc.contains("k3_exp") && !doc["k3_exp"].is_null()) in.k3_exp = detail::number(doc["k3_exp"], "/k3_exp");
  return in;
}

inline json column_to_json(const ledger::Column& col) {
  json obj = json::object();
  for (std::size_t r = 0; r < ledger::kRows; ++r) {
    if (!col.p[r]) continue;
    const std::string key(ledger::kRowKeys[r]);
    if (col.sigma[r])
      obj[key] = {{"p", *col.p[r]}, {"sigma", *col.sigma[r]}};
    else
      obj[key] = *col.p[r];
  }
  return obj;
}

inline json ledger_input_to_json(const LedgerInput& in) {
  json states = json::object();
  for (std::size_t p = 0; p < 3; ++p)
    states[std::to_string(p)] = {{"ng", column_to_json(in.table.states[p].ng)},
                                 {"cg", column_to_json(in.table.states[p].cg)}};
  json doc = {{"states", states}, {"pe", in.pe.pe}};
  if (in.k3_exp) doc["k3_exp"] = *in.k3_exp;
  return doc;
}

inline json report_to_json(const ledger::LedgerReport& r) {
  json doc = {{"c_ng", r.c_ng},
              {"c_cg", r.c_cg},
              {"delta_c", r.delta_c},
              {"pe", r.pe},
              {"km1_strict", r.km1_strict},
              {"km1_liberal", r.km1_liberal},
              {"non_malicious", r.non_malicious},
              {"loss_spread", r.loss_spread},
              {"malicious", r.malicious},
              {"bound_strict", r.bound_strict},
              {"bound_liberal", r.bound_liberal}};
  if (r.k3_exp) doc["k3_exp"] = *r.k3_exp;
  if (r.dark_count_range) doc["dark_count_range"] = {r.dark_count_range->first, r.dark_count_range->second};
  return doc;
}

inline NoiseProfile parse_noise_profile(const json& doc) {
  if (!doc.is_object()) throw SchemaError("", "expected an object");
  NoiseProfile profile;
  profile.knobs = ErrorKnobs::neutral();
  profile.relaxation.t1_s = detail::triple(detail::member(doc, "t1_s", ""), "/t1_s", true);
  profile.relaxation.t2_s = detail::triple(detail::member(doc, "t2_s", ""), "/t2_s", true);
  if (doc.contains("pulse_fidelity")) profile.knobs.pulse_fidelity = detail::number(doc["pulse_fidelity"], "/pulse_fidelity");
  if (doc.contains("dark_count")) profile.knobs.dark_count_prob = detail::number(doc["dark_count"], "/dark_count");
  if (doc.contains("singlet_leak")) profile.knobs.singlet_leak_prob = detail::number(doc["singlet_leak"], "/singlet_leak");
  if (doc.contains("durations_ms")) {
    const json& d = doc["durations_ms"];
    if (!d.is_object()) throw SchemaError("/durations_ms", "expected an object");
    if (d.contains("cg0")) profile.durations.cg0 = detail::number(d["cg0"], "/durations_ms/cg0");
    if (d.contains("cg1")) profile.durations.cg1 = detail::number(d["cg1"], "/durations_ms/cg1");
    if (d.contains("cg2")) profile.durations.cg2 = detail::number(d["cg2"], "/durations_ms/cg2");
    if (d.contains("pulse")) profile.durations.pulse = detail::number(d["pulse"], "/durations_ms/pulse");
  }
  try {
    profile.validate();
  } catch (const ContractViolation& e) {
    throw SchemaError("", e.what());
  }
  return profile;
}

inline json noise_profile_to_json(const NoiseProfile& p) {
  json t1 = json::array(), t2 = json::array();
  for (std::size_t i = 0; i < 3; ++i) {
    t1.push_back(detail::time_value(p.relaxation.t1_s[i]));
    t2.push_back(detail::time_value(p.relaxation.t2_s[i]));
  }
  return {{"t1_s", t1},
          {"t2_s", t2},
          {"pulse_fidelity", p.knobs.pulse_fidelity},
          {"dark_count", p.knobs.dark_count_prob},
          {"singlet_leak", p.knobs.singlet_leak_prob},
          {"durations_ms",
           {{"cg0", p.durations.cg0}, {"cg1", p.durations.cg1}, {"cg2", p.durations.cg2}, {"pulse", p.durations.pulse}}}};
}

}  // namespace lgsim::io
