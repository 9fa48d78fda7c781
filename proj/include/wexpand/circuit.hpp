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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wexpand/fock.hpp"

namespace wexpand {

/**
 * One passive optical element acting on one or two spatial modes.
 *
 * Matrix conventions, per polarization, for an element on ordered modes
 * (a, b):
 *
 *  - bs{t}: transmittance t keeps light on its own rail,
 *        out_a =  sqrt(t) in_a + sqrt(1-t) in_b
 *        out_b = -sqrt(1-t) in_a + sqrt(t) in_b
 *    so t = 1 is the identity.  Both polarizations see the same rotation.
 *
 *  - pdbs{t_h, t_v}: transmittance here labels the a<->b crossing, so that
 *    |out_a|^2 = t_h for an H photon entering on b.  The H block rotates one
 *    way, the V block the other:
 *        H: out_a = sqrt(1-t_h) in_a + sqrt(t_h) in_b
 *           out_b = -sqrt(t_h) in_a + sqrt(1-t_h) in_b
 *        V: out_a = sqrt(1-t_v) in_a - sqrt(t_v) in_b
 *           out_b =  sqrt(t_v) in_a + sqrt(1-t_v) in_b
 *    The counter-rotation keeps the three input columns of interest in a
 *    common phase on every output arm of the standard constructions.
 *
 *  - phase{phase, pol}: multiplies the selected polarization(s) of one mode
 *    by exp(i*phase).
 *
 *  - waveplate{u}: arbitrary 2x2 unitary on the (H, V) pair of one mode.
 *
 *  - loss{t_h, t_v}: per-polarization transmission of one mode; compiled as
 *    a coupling of strength 1-t into a fresh auxiliary spatial mode, so the
 *    overall transformation stays unitary.
 */
struct Element {
  enum class Kind { Pdbs, Bs, Phase, Waveplate, Loss };

  Kind kind = Kind::Bs;
  int mode_a = 1;
  int mode_b = 0;  // unused for single-mode kinds
  double t_h = 1.0, t_v = 1.0;        // pdbs, loss
  double t = 1.0;                     // bs
  double phase = 0.0;                 // phase
  std::optional<Polarization> pol;    // phase; nullopt = both polarizations
  Eigen::Matrix2cd wave = Eigen::Matrix2cd::Identity();  // waveplate

  static Element pdbs(int a, int b, double t_h, double t_v);
  static Element bs(int a, int b, double t);
  static Element phase_shift(int a, double phase, std::optional<Polarization> pol);
  static Element waveplate(int a, const Eigen::Matrix2cd& u);
  static Element loss(int a, double t_h, double t_v);
};

/// Declarative circuit: elements applied in order to `width` spatial modes,
/// with `output_modes` naming the n+1 modes that are post-selected on.
struct CircuitSpec {
  int n = 1;
  int width = 2;
  std::vector<Element> elements;
  std::vector<int> output_modes;
  std::string label;

  /// Throws std::invalid_argument on any structural problem (modes out of
  /// range, parameters outside [0,1], non-unitary waveplate, wrong number of
  /// output modes, ...).
  void validate() const;
};

/// The compiled transformation.  Loss elements add auxiliary spatial modes,
/// so spatial_modes >= the declared width.
struct CompiledCircuit {
  ModeUnitary unitary;
  int spatial_modes = 0;
  std::vector<int> output_modes;
  int n = 0;

  /// Wraps an externally supplied even-dimensional unitary; used by tests
  /// and by callers evaluating transformations not built from elements.
  static CompiledCircuit from_unitary(ModeUnitary u, std::vector<int> output_modes,
                                      int n);
};

/**
 * @brief Multiplies out the element list into a single mode transformation.
 *
 * Elements apply in list order, i.e. the resulting matrix is the product of
 * the per-element matrices with the last element leftmost.  The result is
 * checked for unitarity at 1e-12.
 */
CompiledCircuit compile(const CircuitSpec& spec);

/// The three input columns the expansion analysis needs: alpha for the
/// ancilla input (mode 2, H), beta for the accessed photon's H component
/// (mode 1, H), gamma for its V component (mode 1, V).
struct Coefficients {
  Eigen::VectorXcd alpha, beta, gamma;
  std::vector<int> output_modes;

  Complex alpha_h(int spatial) const { return alpha(2 * (spatial - 1)); }
  Complex alpha_v(int spatial) const { return alpha(2 * (spatial - 1) + 1); }
  Complex beta_h(int spatial) const { return beta(2 * (spatial - 1)); }
  Complex beta_v(int spatial) const { return beta(2 * (spatial - 1) + 1); }
  Complex gamma_h(int spatial) const { return gamma(2 * (spatial - 1)); }
  Complex gamma_v(int spatial) const { return gamma(2 * (spatial - 1) + 1); }
};

Coefficients extract_coefficients(const CompiledCircuit& circuit);

/**
 * @brief Expansion circuit with the best possible success probability.
 *
 * A polarization-dependent splitter mixes the accessed photon (mode 1) with
 * the n-photon ancilla (mode 2), with crossing transmittances t_h = P1_opt
 * and t_v = 1 - P1_opt, followed by a splitter chain that spreads the
 * remaining ancilla intensity evenly over modes 2..n+1.  Lossless, width
 * n+1, post-selects every mode.
 */
CircuitSpec build_optimal(int n);

/// Two-sided variant reaching H_m: the splitter crossing is m*xi_m and each
/// splitter output feeds its own even-split chain (m arms off mode 1,
/// n+1-m arms off mode 2).  build_hm(n, 1) coincides with build_optimal(n).
CircuitSpec build_hm(int n, int m);

/// Symmetric lossy variant reaching H_lossy: one splitter arm is discarded
/// (mode 1 is not post-selected) and a serial chain spreads the rest evenly
/// over modes 2..n+2.  Width n+2; includes the half-wave phase that aligns
/// the polarization-flipped amplitudes with the retained ones.
CircuitSpec build_lossy(int n);

}  // namespace wexpand
