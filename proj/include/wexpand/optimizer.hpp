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

#ifndef WEXPAND_OPTIMIZER_HPP
#define WEXPAND_OPTIMIZER_HPP

#include <cstdint>
#include <ostream>
#include <vector>

#include "wexpand/bounds.hpp"

namespace wexpand {

/// Multi-start search settings.  The seed makes restart sampling, and hence
/// the whole search, reproducible.
struct SearchConfig {
  int restarts = 40;
  int max_iters = 2000;
  double tol_x = 1e-10;
  double tol_f = 1e-12;
  std::uint64_t seed = 1234;

  void validate() const;
};

/// Which stationary family the search landed on: an unequal-coupling
/// lossless point with m small couplings (classification carries m), the
/// symmetric deliberate-loss point, or neither.
enum class OptimumKind { lossless_m, lossy_symmetric, boundary_other };

struct Classification {
  OptimumKind kind = OptimumKind::boundary_other;
  int m = 0;  // meaningful only for lossless_m
};

/// One restart's journey: where it started, where it ended, the value it
/// reached, and the best-so-far value after each simplex iteration.
struct RestartTrace {
  int restart = 0;
  std::vector<double> start;
  std::vector<double> end;
  double value = 0.0;
  std::vector<double> history;
};

struct OptimizationResult {
  std::vector<double> best_P;
  double best_H = 0.0;
  bool converged = false;
  std::vector<RestartTrace> trace;
  Classification classification;
};

/**
 * @brief Maximizes H(P) = min(F(P), G(P)) over the coupling region.
 *
 * Runs derivative-free simplex descent on -H from `restarts` random interior
 * starts (projected back into the region), then the same number of starts in
 * an n-coordinate parametrization of the sum-one face, then polishes the
 * best candidate with a cascade of shrinking initial simplices.  Ties within
 * tol_f break toward the lexicographically smallest sorted point.  Restarts
 * may run concurrently; the reduction is ordered, so results are
 * reproducible for a fixed seed.
 */
OptimizationResult maximize_H(int n, const SearchConfig& config);

/// Pair of perturbation directions used by the local-maximum checks.  The
/// unconstrained pair probes the first and last coordinates; the constrained
/// pair is the same after projecting out the direction that changes S, so it
/// stays on the sum-one face.
struct PerturbationBasis {
  std::vector<double> u;
  std::vector<double> v;
  bool constrained = false;

  static PerturbationBasis unconstrained(int n);
  static PerturbationBasis constrained_on_face(int n);
};

struct LocalMaxReport {
  int directions = 0;
  int skipped_outside_region = 0;
  double max_improvement = 0.0;  // max of H(P+dP) - H(P) over sampled dP
  double cross_residual = 0.0;   // relative gradient cross-condition residual
  bool no_improving_direction = false;
  bool cross_condition_holds = false;
  bool pass = false;
};

/**
 * @brief Tests the two necessary conditions for a local maximum of H.
 *
 * (a) samples displacements a*u + b*v on a disc of radius eps (at least 64
 * directions), requiring H not to improve beyond 1e-12; displacements that
 * leave the region are skipped and counted.  (b) evaluates the gradient
 * cross condition <u,grad F><v,grad G> = <v,grad F><u,grad G> with analytic
 * gradients, reporting the residual relative to the larger side.
 */
LocalMaxReport verify_local_max(const DistributionVector& P, int n,
                                const PerturbationBasis& basis, double eps);

struct SymmetricScanResult {
  double S_star = 0.0;
  double H_star = 0.0;
};

/// Golden-section maximization of min(F, G) along the symmetric family
/// P_i = S/(n+1), locating the crossing of the two bounds.
SymmetricScanResult scan_symmetric_lossy(int n);

struct SweepReport {
  int trials = 0;
  int exact_count = 0;    // trials passing the exact-expansion check
  int exceed_count = 0;   // exact passers with p_suc > P_max + 1e-9
  double max_p_suc = 0.0; // best success probability among exact passers
  double p_max_reference = 0.0;
  int N_ref = 2;
  bool pass = false;      // exceed_count == 0
};

/**
 * @brief Monte-Carlo search for circuits beating the analytic optimum.
 *
 * Samples `trials` circuits from a mixed family (the optimal construction
 * itself as trial 0, perturbed variants, reduced-coupling lossy variants,
 * two-level constructions at and away from their crossing points, and fully
 * random splitter networks), evaluates each as an expander, and checks that
 * no exact passer exceeds the closed-form maximum for the reference state
 * size.  Trials run concurrently with per-trial seeding.
 */
SweepReport end_to_end_optimality(int n, int trials,
                                  std::uint64_t seed = 20260816,
                                  int N_ref = 2);

/// Writes trace rows as CSV lines "restart,iteration,H".
void write_trace_csv(std::ostream& out, const std::vector<RestartTrace>& trace);

}  // namespace wexpand

#endif  // WEXPAND_OPTIMIZER_HPP
