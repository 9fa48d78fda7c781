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

#include "wexpand/expansion.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace wexpand {

WExpansionProblem::WExpansionProblem(int N_, int n_, CompiledCircuit c)
    : N(N_), n(n_), circuit(std::move(c)) {
  if (N < 2) throw std::domain_error("WExpansionProblem: N must be >= 2");
  if (n < 1) throw std::domain_error("WExpansionProblem: n must be >= 1");
  if (static_cast<int>(circuit.output_modes.size()) != n + 1)
    throw std::invalid_argument(
        "WExpansionProblem: circuit must have exactly n+1 output modes");
}

double success_probability(int N, int n, Complex eta0) {
  if (N < 2) throw std::domain_error("success_probability: N must be >= 2");
  if (n < 1) throw std::domain_error("success_probability: n must be >= 1");
  return factorial(n) * (static_cast<double>(N + n) / N) * std::norm(eta0);
}

EtaVector eta_closed_form(const Coefficients& coeffs, int n) {
  const auto& outs = coeffs.output_modes;
  if (static_cast<int>(outs.size()) != n + 1)
    throw std::invalid_argument("eta_closed_form: need exactly n+1 output modes");

  const int k = n + 1;
  std::vector<Complex> aH(k), aV(k), bH(k), gH(k), gV(k);
  for (int i = 0; i < k; ++i) {
    aH[i] = coeffs.alpha_h(outs[i]);
    aV[i] = coeffs.alpha_v(outs[i]);
    bH[i] = coeffs.beta_h(outs[i]);
    gH[i] = coeffs.gamma_h(outs[i]);
    gV[i] = coeffs.gamma_v(outs[i]);
  }

  // prod_except(i) = prod_{j != i} aH[j]; computed as an explicit product
  // rather than a quotient so that zero couplings stay exact.
  auto prod_except = [&](int skip) {
    Complex p{1.0, 0.0};
    for (int j = 0; j < k; ++j)
      if (j != skip) p *= aH[j];
    return p;
  };
  auto prod_except2 = [&](int skip_a, int skip_b) {
    Complex p{1.0, 0.0};
    for (int j = 0; j < k; ++j)
      if (j != skip_a && j != skip_b) p *= aH[j];
    return p;
  };

  EtaVector result;
  for (int i = 0; i < k; ++i) result.eta0 += bH[i] * prod_except(i);

  result.eta.resize(k);
  for (int i = 0; i < k; ++i) {
    Complex mixed{0.0, 0.0};
    for (int j = 0; j < k; ++j)
      if (j != i) mixed += gH[j] * prod_except2(i, j);
    result.eta[i] = gV[i] * prod_except(i) + aV[i] * mixed;
  }
  return result;
}

namespace {

/// Occupation vector with one input photon at `single_flat` and the n-photon
/// ancilla in the H rail of spatial mode 2.
FockState make_input(int dim, int single_flat, int n) {
  std::vector<int> occ(dim, 0);
  occ[single_flat] += 1;
  occ[PolarizedMode{2, Polarization::H}.flat()] += n;
  return FockState(std::move(occ));
}

/// Occupation vector with one photon on each output mode, V-polarized at the
/// modes whose bit is set in `v_mask` and H-polarized elsewhere.
FockState make_output(int dim, const std::vector<int>& outs, unsigned v_mask) {
  std::vector<int> occ(dim, 0);
  for (size_t i = 0; i < outs.size(); ++i) {
    const Polarization pol =
        (v_mask >> i) & 1u ? Polarization::V : Polarization::H;
    occ[PolarizedMode{outs[i], pol}.flat()] += 1;
  }
  return FockState(std::move(occ));
}

std::string pattern_string(const std::vector<int>& outs, unsigned v_mask) {
  std::string s;
  for (size_t i = 0; i < outs.size(); ++i)
    s += ((v_mask >> i) & 1u) ? 'V' : 'H';
  return s;
}

}  // namespace

EtaVector eta_via_engine(const CompiledCircuit& circuit, int n) {
  if (n < 1) throw std::domain_error("eta_via_engine: n must be >= 1");
  const auto& outs = circuit.output_modes;
  if (static_cast<int>(outs.size()) != n + 1)
    throw std::invalid_argument("eta_via_engine: need exactly n+1 output modes");

  const int dim = circuit.unitary.dim();
  const double norm = std::sqrt(factorial(n));
  const FockState in_h =
      make_input(dim, PolarizedMode{1, Polarization::H}.flat(), n);
  const FockState in_v =
      make_input(dim, PolarizedMode{1, Polarization::V}.flat(), n);

  EtaVector result;
  result.eta0 =
      transition_amplitude(circuit.unitary, in_h, make_output(dim, outs, 0u)) /
      norm;
  result.eta.resize(n + 1);
  for (int i = 0; i <= n; ++i)
    result.eta[i] = transition_amplitude(circuit.unitary, in_v,
                                         make_output(dim, outs, 1u << i)) /
                    norm;
  return result;
}

std::vector<Violation> appendix_a_conditions(const Coefficients& coeffs, int n,
                                             double tol) {
  const auto& outs = coeffs.output_modes;
  if (static_cast<int>(outs.size()) != n + 1)
    throw std::invalid_argument(
        "appendix_a_conditions: need exactly n+1 output modes");

  std::vector<Violation> violations;
  double product = 1.0;
  for (int mode : outs) {
    const double av = std::abs(coeffs.alpha_v(mode));
    const double bv = std::abs(coeffs.beta_v(mode));
    if (av > tol)
      violations.push_back({"alpha_v", "output mode " + std::to_string(mode), av});
    if (bv > tol)
      violations.push_back({"beta_v", "output mode " + std::to_string(mode), bv});
    product *= std::abs(coeffs.alpha_h(mode));
  }
  if (!(product > tol))
    violations.push_back({"alpha_h_product", "all output modes", product});
  return violations;
}

ExpansionReport verify_exact_w(const WExpansionProblem& problem, double tol) {
  if (!(tol > 0.0)) throw std::domain_error("verify_exact_w: tol must be > 0");

  const CompiledCircuit& circuit = problem.circuit;
  const int n = problem.n;
  const auto& outs = circuit.output_modes;
  const int dim = circuit.unitary.dim();
  const double norm = std::sqrt(factorial(n));
  const unsigned pattern_count = 1u << (n + 1);

  ExpansionReport report;
  report.N = problem.N;
  report.n = n;
  report.eta.eta.resize(n + 1);

  const FockState in_h =
      make_input(dim, PolarizedMode{1, Polarization::H}.flat(), n);
  const FockState in_v =
      make_input(dim, PolarizedMode{1, Polarization::V}.flat(), n);

  // Input term 1H + ancilla: only the all-H pattern may survive.  A single
  // stray V photon at output i is the Gamma_i amplitude; richer V patterns
  // are grouped under one condition id.
  for (unsigned mask = 0; mask < pattern_count; ++mask) {
    const Complex amp =
        transition_amplitude(circuit.unitary, in_h, make_output(dim, outs, mask)) /
        norm;
    if (mask == 0) {
      report.eta.eta0 = amp;
      continue;
    }
    if (std::abs(amp) <= tol) continue;
    const int v_count = std::popcount(mask);
    if (v_count == 1) {
      const int i = std::countr_zero(mask);
      report.violations.push_back(
          {"gamma_nonzero", "output mode " + std::to_string(outs[i]),
           std::abs(amp)});
    } else {
      report.violations.push_back(
          {"h_input_pattern", pattern_string(outs, mask), std::abs(amp)});
    }
  }

  // Input term 1V + ancilla: exactly the single-V patterns survive, with
  // mutually equal amplitudes eta_i.
  for (unsigned mask = 0; mask < pattern_count; ++mask) {
    const Complex amp =
        transition_amplitude(circuit.unitary, in_v, make_output(dim, outs, mask)) /
        norm;
    const int v_count = std::popcount(mask);
    if (v_count == 1) {
      report.eta.eta[std::countr_zero(mask)] = amp;
      continue;
    }
    if (std::abs(amp) > tol)
      report.violations.push_back(
          {"v_input_pattern", pattern_string(outs, mask), std::abs(amp)});
  }

  for (int i = 0; i <= n; ++i) {
    const double dev = std::abs(report.eta.eta[i] - report.eta.eta0);
    if (dev > tol)
      report.violations.push_back(
          {"eta_mismatch", "output mode " + std::to_string(outs[i]), dev});
  }
  if (std::abs(report.eta.eta0) <= tol)
    report.violations.push_back(
        {"eta0_zero", "all-H pattern", std::abs(report.eta.eta0)});

  const auto coeff_violations =
      appendix_a_conditions(extract_coefficients(circuit), n, tol);
  report.violations.insert(report.violations.end(), coeff_violations.begin(),
                           coeff_violations.end());

  report.exact_w = report.violations.empty();
  report.p_suc = report.exact_w
                     ? success_probability(problem.N, n, report.eta.eta0)
                     : 0.0;
  return report;
}

}  // namespace wexpand
