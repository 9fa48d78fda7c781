/**
 * Copyright 2026 The wexpand Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "wexpand/serialize.hpp"

#include <cstdio>
#include <set>

namespace wexpand {

using nlohmann::json;

namespace {

const char* kind_name(Element::Kind kind) {
  switch (kind) {
    case Element::Kind::Pdbs: return "pdbs";
    case Element::Kind::Bs: return "bs";
    case Element::Kind::Phase: return "phase";
    case Element::Kind::Waveplate: return "waveplate";
    case Element::Kind::Loss: return "loss";
  }
  return "unknown";
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw CircuitFormatError(where + ": " + what);
}

void require_object_keys(const json& j, const std::set<std::string>& keys,
                         const std::string& where) {
  if (!j.is_object()) fail(where, "expected a JSON object");
  for (const auto& item : j.items())
    if (keys.find(item.key()) == keys.end())
      fail(where, "unknown field \"" + item.key() + "\"");
  for (const std::string& key : keys)
    if (!j.contains(key)) fail(where, "missing field \"" + key + "\"");
}

int get_int(const json& j, const std::string& key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_number_integer()) fail(where, "field \"" + key + "\" must be an integer");
  return v.get<int>();
}

double get_real(const json& j, const std::string& key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_number()) fail(where, "field \"" + key + "\" must be a number");
  return v.get<double>();
}

Complex complex_from_json(const json& j, const std::string& where) {
  require_object_keys(j, {"re", "im"}, where);
  return {get_real(j, "re", where), get_real(j, "im", where)};
}

Element element_from_json(const json& j, int index) {
  const std::string where = "elements[" + std::to_string(index) + "]";
  require_object_keys(j, {"kind", "modes", "params"}, where);

  const json& jk = j.at("kind");
  if (!jk.is_string()) fail(where, "field \"kind\" must be a string");
  const std::string kind = jk.get<std::string>();

  const json& jm = j.at("modes");
  if (!jm.is_array()) fail(where, "field \"modes\" must be an array");
  std::vector<int> modes;
  for (const json& v : jm) {
    if (!v.is_number_integer()) fail(where, "mode indices must be integers");
    modes.push_back(v.get<int>());
  }
  const json& jp = j.at("params");
  const std::string pw = where + ".params";

  const bool needs_two = kind == "pdbs" || kind == "bs";
  if (needs_two && modes.size() != 2)
    fail(where, "\"" + kind + "\" takes exactly two modes");
  if (!needs_two && modes.size() != 1)
    fail(where, "\"" + kind + "\" takes exactly one mode");

  if (kind == "pdbs") {
    require_object_keys(jp, {"t_h", "t_v"}, pw);
    return Element::pdbs(modes[0], modes[1], get_real(jp, "t_h", pw),
                         get_real(jp, "t_v", pw));
  }
  if (kind == "bs") {
    require_object_keys(jp, {"t"}, pw);
    return Element::bs(modes[0], modes[1], get_real(jp, "t", pw));
  }
  if (kind == "phase") {
    require_object_keys(jp, {"phase", "polarization"}, pw);
    const json& jpol = jp.at("polarization");
    if (!jpol.is_string()) fail(pw, "field \"polarization\" must be a string");
    const std::string pol = jpol.get<std::string>();
    std::optional<Polarization> which;
    if (pol == "H") which = Polarization::H;
    else if (pol == "V") which = Polarization::V;
    else if (pol != "both") fail(pw, "polarization must be \"H\", \"V\", or \"both\"");
    return Element::phase_shift(modes[0], get_real(jp, "phase", pw), which);
  }
  if (kind == "waveplate") {
    require_object_keys(jp, {"u"}, pw);
    const json& ju = jp.at("u");
    if (!ju.is_array() || ju.size() != 2) fail(pw, "\"u\" must be a 2x2 array");
    Eigen::Matrix2cd u;
    for (int r = 0; r < 2; ++r) {
      const json& row = ju.at(static_cast<size_t>(r));
      if (!row.is_array() || row.size() != 2) fail(pw, "\"u\" must be a 2x2 array");
      for (int c = 0; c < 2; ++c)
        u(r, c) = complex_from_json(row.at(static_cast<size_t>(c)),
                                    pw + ".u[" + std::to_string(r) + "][" +
                                        std::to_string(c) + "]");
    }
    return Element::waveplate(modes[0], u);
  }
  if (kind == "loss") {
    require_object_keys(jp, {"t_h", "t_v"}, pw);
    return Element::loss(modes[0], get_real(jp, "t_h", pw),
                         get_real(jp, "t_v", pw));
  }
  fail(where, "unknown element kind \"" + kind + "\"");
}

json element_to_json(const Element& e) {
  json j;
  j["kind"] = kind_name(e.kind);
  switch (e.kind) {
    case Element::Kind::Pdbs:
      j["modes"] = {e.mode_a, e.mode_b};
      j["params"] = {{"t_h", e.t_h}, {"t_v", e.t_v}};
      break;
    case Element::Kind::Bs:
      j["modes"] = {e.mode_a, e.mode_b};
      j["params"] = {{"t", e.t}};
      break;
    case Element::Kind::Phase: {
      j["modes"] = {e.mode_a};
      const char* pol = !e.pol ? "both"
                               : (*e.pol == Polarization::H ? "H" : "V");
      j["params"] = {{"phase", e.phase}, {"polarization", pol}};
      break;
    }
    case Element::Kind::Waveplate: {
      j["modes"] = {e.mode_a};
      json u = json::array();
      for (int r = 0; r < 2; ++r) {
        json row = json::array();
        for (int c = 0; c < 2; ++c) row.push_back(complex_to_json(e.wave(r, c)));
        u.push_back(row);
      }
      j["params"] = {{"u", u}};
      break;
    }
    case Element::Kind::Loss:
      j["modes"] = {e.mode_a};
      j["params"] = {{"t_h", e.t_h}, {"t_v", e.t_v}};
      break;
  }
  return j;
}

}  // namespace

json complex_to_json(Complex z) {
  return json{{"re", z.real()}, {"im", z.imag()}};
}

json circuit_to_json(const CircuitSpec& spec) {
  json j;
  j["n"] = spec.n;
  j["width"] = spec.width;
  j["output_modes"] = spec.output_modes;
  j["elements"] = json::array();
  for (const Element& e : spec.elements) j["elements"].push_back(element_to_json(e));
  j["label"] = spec.label;
  return j;
}

CircuitSpec circuit_from_json(const json& j) {
  require_object_keys(j, {"n", "width", "output_modes", "elements", "label"},
                      "circuit");
  CircuitSpec spec;
  spec.n = get_int(j, "n", "circuit");
  spec.width = get_int(j, "width", "circuit");

  const json& jo = j.at("output_modes");
  if (!jo.is_array()) fail("circuit", "\"output_modes\" must be an array");
  for (const json& v : jo) {
    if (!v.is_number_integer()) fail("circuit", "output modes must be integers");
    spec.output_modes.push_back(v.get<int>());
  }

  const json& je = j.at("elements");
  if (!je.is_array()) fail("circuit", "\"elements\" must be an array");
  int index = 0;
  for (const json& v : je) spec.elements.push_back(element_from_json(v, index++));

  const json& jl = j.at("label");
  if (!jl.is_string()) fail("circuit", "\"label\" must be a string");
  spec.label = jl.get<std::string>();

  try {
    spec.validate();
  } catch (const std::exception& e) {
    fail("circuit", e.what());
  }
  return spec;
}

json expansion_report_to_json(const ExpansionReport& report) {
  json j;
  j["eta0"] = complex_to_json(report.eta.eta0);
  j["eta"] = json::array();
  for (Complex e : report.eta.eta) j["eta"].push_back(complex_to_json(e));
  j["p_suc"] = report.p_suc;
  j["exact_w"] = report.exact_w;
  j["violations"] = json::array();
  for (const Violation& v : report.violations)
    j["violations"].push_back({{"condition", v.condition},
                               {"location", v.location},
                               {"magnitude", v.magnitude}});
  j["N"] = report.N;
  j["n"] = report.n;
  return j;
}

json optimization_result_to_json(const OptimizationResult& result) {
  json j;
  j["best_P"] = result.best_P;
  j["best_H"] = result.best_H;
  j["converged"] = result.converged;
  const char* kind = "boundary_other";
  if (result.classification.kind == OptimumKind::lossless_m) kind = "lossless_m";
  if (result.classification.kind == OptimumKind::lossy_symmetric)
    kind = "lossy_symmetric";
  j["classification"] = {{"kind", kind}, {"m", result.classification.m}};
  j["runs"] = result.trace.size();
  return j;
}

json appendix_report_to_json(const AppendixReport& report) {
  json j;
  j["all_pass"] = report.all_pass;
  j["checks"] = json::array();
  for (const AppendixCheck& c : report.checks)
    j["checks"].push_back({{"id", c.id},
                           {"n", c.n},
                           {"m", c.m},
                           {"margin", c.margin},
                           {"pass", c.pass}});
  return j;
}

json sweep_report_to_json(const SweepReport& report) {
  json j;
  j["trials"] = report.trials;
  j["exact_count"] = report.exact_count;
  j["exceed_count"] = report.exceed_count;
  j["max_p_suc"] = report.max_p_suc;
  j["p_max_reference"] = report.p_max_reference;
  j["N_ref"] = report.N_ref;
  j["pass"] = report.pass;
  return j;
}

std::vector<ScanRow> scan_table(int n_max, int N_max) {
  if (n_max < 1) throw std::domain_error("scan_table: n_max must be >= 1");
  if (N_max < 2) throw std::domain_error("scan_table: N_max must be >= 2");
  std::vector<ScanRow> rows;
  for (int n = 1; n <= n_max; ++n)
    for (int N = 2; N <= N_max; ++N)
      rows.push_back({n, N, P_max_of(n, N), P_lossy_of(n, N), H_1_of(n),
                      H_lossy_of(n)});
  return rows;
}

json scan_to_json(const std::vector<ScanRow>& rows) {
  json j = json::array();
  for (const ScanRow& r : rows)
    j.push_back({{"n", r.n},
                 {"N", r.N},
                 {"P_max", r.P_max},
                 {"P_lossy", r.P_lossy},
                 {"H_1", r.H_1},
                 {"H_lossy", r.H_lossy}});
  return j;
}

std::string scan_to_csv(const std::vector<ScanRow>& rows) {
  std::string out = "n,N,P_max,P_lossy,H_1,H_lossy\n";
  char line[160];
  for (const ScanRow& r : rows) {
    std::snprintf(line, sizeof(line), "%d,%d,%.17g,%.17g,%.17g,%.17g\n", r.n,
                  r.N, r.P_max, r.P_lossy, r.H_1, r.H_lossy);
    out += line;
  }
  return out;
}

}  // namespace wexpand
