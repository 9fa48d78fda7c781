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

#ifndef WEXPAND_EXPANSION_HPP
#define WEXPAND_EXPANSION_HPP

#include <string>
#include <vector>

#include "wexpand/circuit.hpp"
#include "wexpand/fock.hpp"

namespace wexpand {

/// The post-selected amplitudes of a candidate expander.  eta0 is the
/// amplitude for the all-H output pattern fed by a 1H input photon; eta[i-1]
/// is the amplitude for the single-V-at-output-i pattern fed by a 1V input
/// photon, for i = 1..n+1.  A circuit produces the expanded W state exactly
/// when all n+2 amplitudes coincide.
struct EtaVector {
  Complex eta0{0.0, 0.0};
  std::vector<Complex> eta;
};

/// One failed exact-expansion condition: a short condition id, the pattern or
/// mode where it fired, and the size of the offending amplitude or mismatch.
struct Violation {
  std::string condition;
  std::string location;
  double magnitude = 0.0;
};

/// Full evaluation record for one circuit at one initial state size N.
struct ExpansionReport {
  EtaVector eta;
  double p_suc = 0.0;
  bool exact_w = false;
  std::vector<Violation> violations;
  int N = 2;
  int n = 1;
};

/// An expansion instance: grow an N-photon W state by n ancilla photons
/// through the given compiled circuit.
struct WExpansionProblem {
  int N = 2;
  int n = 1;
  CompiledCircuit circuit;

  WExpansionProblem(int N_, int n_, CompiledCircuit c);
};

/// Success probability n!(N+n)/N |eta0|^2 of the post-selected expansion.
double success_probability(int N, int n, Complex eta0);

/**
 * @brief Computes the eta amplitudes directly from the circuit coefficients.
 *
 * eta0  = sum_i beta_iH prod_{j != i} alpha_jH
 * eta_i = gamma_iV prod_{j != i} alpha_jH
 *       + alpha_iV sum_{j != i} gamma_jH prod_{k != i,j} alpha_kH
 *
 * with i, j, k ranging over the n+1 output modes.  The second eta_i term
 * covers circuits that mix polarizations; it vanishes for the standard
 * constructions where alpha_iV = 0.
 */
EtaVector eta_closed_form(const Coefficients& coeffs, int n);

/**
 * @brief Computes the same amplitudes as multi-photon transition amplitudes.
 *
 * Feeds one photon (1H for eta0, 1V for eta_i) together with the n-photon
 * ancilla (n photons in 2H) through the compiled unitary and projects onto
 * the one-photon-per-output-mode patterns, vacuum elsewhere.  Each amplitude
 * carries a 1/sqrt(n!) ancilla normalization so that the result matches
 * eta_closed_form exactly.
 */
EtaVector eta_via_engine(const CompiledCircuit& circuit, int n);

/**
 * @brief Checks the coefficient preconditions for an exact expansion.
 *
 * Returns violations unless |alpha_iV| <= tol and |beta_iV| <= tol for every
 * output mode i, and the product of |alpha_jH| over output modes exceeds tol
 * (the ancilla must be able to reach every output arm).
 */
std::vector<Violation> appendix_a_conditions(const Coefficients& coeffs, int n,
                                             double tol);

/**
 * @brief Decides whether the circuit is an exact W-state expander.
 *
 * Enumerates all 2^(n+1) polarization patterns on the output modes for both
 * input terms (1H + n ancilla photons, 1V + n ancilla photons).  From the 1H
 * input only the all-H pattern may survive (its amplitude is eta0); from the
 * 1V input only the single-V patterns may survive and their amplitudes must
 * all equal eta0.  Coefficient preconditions are folded into the violation
 * list, and |eta0| must itself exceed tol.  p_suc is reported as
 * n!(N+n)/N |eta0|^2 when every condition holds and 0 otherwise.  The checks
 * are independent of N; it enters only through the scalar prefactor.
 */
ExpansionReport verify_exact_w(const WExpansionProblem& problem,
                               double tol = 1e-10);

}  // namespace wexpand

#endif  // WEXPAND_EXPANSION_HPP
