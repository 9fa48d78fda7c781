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

#ifndef WEXPAND_SERIALIZE_HPP
#define WEXPAND_SERIALIZE_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wexpand/bounds.hpp"
#include "wexpand/circuit.hpp"
#include "wexpand/expansion.hpp"
#include "wexpand/optimizer.hpp"

namespace wexpand {

/// Raised for any structural problem in a circuit document: bad JSON types,
/// missing or unknown fields, or parameter values that fail validation.
class CircuitFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Circuit document schema:
/// {"n": int, "width": int, "output_modes": [int], "elements": [...],
///  "label": string}
/// with each element {"kind": "pdbs"|"bs"|"phase"|"waveplate"|"loss",
/// "modes": [int(,int)], "params": {...}}.  Unknown fields are rejected at
/// every level; complex numbers appear as {"re": real, "im": real}.
nlohmann::json circuit_to_json(const CircuitSpec& spec);
CircuitSpec circuit_from_json(const nlohmann::json& j);

nlohmann::json complex_to_json(Complex z);

nlohmann::json expansion_report_to_json(const ExpansionReport& report);
nlohmann::json optimization_result_to_json(const OptimizationResult& result);
nlohmann::json appendix_report_to_json(const AppendixReport& report);
nlohmann::json sweep_report_to_json(const SweepReport& report);

/// One row of the closed-form success-probability table.
struct ScanRow {
  int n = 1;
  int N = 2;
  double P_max = 0.0;
  double P_lossy = 0.0;
  double H_1 = 0.0;
  double H_lossy = 0.0;
};

/// Rows over n = 1..n_max and N = 2..N_max, n-major.
std::vector<ScanRow> scan_table(int n_max, int N_max);

nlohmann::json scan_to_json(const std::vector<ScanRow>& rows);
std::string scan_to_csv(const std::vector<ScanRow>& rows);

}  // namespace wexpand

#endif  // WEXPAND_SERIALIZE_HPP
