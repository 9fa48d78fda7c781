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

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace wexpand {

using Complex = std::complex<double>;

enum class Polarization { H, V };

/// A spatial mode (1-based) together with a polarization label.  The flat
/// index interleaves polarizations spatial-major, H before V, so a circuit
/// over L spatial modes acts on flat modes 0..2L-1.
struct PolarizedMode {
  int spatial = 1;
  Polarization pol = Polarization::H;

  int flat() const { return 2 * (spatial - 1) + (pol == Polarization::V ? 1 : 0); }
  static PolarizedMode from_flat(int flat);
};

/// exact n! as a double (n <= 170)
double factorial(int n);

/// Photon occupation numbers per mode.  Immutable total bookkeeping; the
/// engine itself is agnostic about how modes are labelled.
class FockState {
 public:
  explicit FockState(std::vector<int> occupations);
  static FockState vacuum(int mode_count);

  /// Copy of this state with `count` extra photons in flat mode `mode`.
  FockState with_photons(int mode, int count) const;

  int occupation(int mode) const { return occ_[static_cast<std::size_t>(mode)]; }
  int mode_count() const { return static_cast<int>(occ_.size()); }
  int total_photons() const { return total_; }
  const std::vector<int>& occupations() const { return occ_; }

  bool operator==(const FockState& other) const { return occ_ == other.occ_; }

 private:
  std::vector<int> occ_;
  int total_ = 0;
};

/// A passive mode transformation: a square matrix whose column c lists the
/// output-mode coefficients an input photon in mode c is scattered into.
class ModeUnitary {
 public:
  explicit ModeUnitary(Eigen::MatrixXcd m);
  static ModeUnitary identity(int dim);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return mat_; }
  Complex coeff(int out, int in) const { return mat_(out, in); }
  ModeUnitary adjoint() const { return ModeUnitary(mat_.adjoint()); }

 private:
  Eigen::MatrixXcd mat_;
};

struct UnitarityViolation {
  int row = 0;
  int col = 0;
  double magnitude = 0.0;
};

/**
 * @brief Permanent of a square complex matrix.
 *
 * Evaluated with Ryser's inclusion-exclusion formula using Gray-code subset
 * ordering, so each step updates the running row sums by a single column:
 * O(2^d * d) work for a d x d matrix.  Exact (up to rounding) for d <= 12;
 * dimensions above 30 are rejected outright.
 *
 * @param m square matrix; the empty 0 x 0 matrix has permanent 1
 */
Complex permanent(const Eigen::MatrixXcd& m);

/**
 * @brief Transition amplitude <out| U |in> between Fock states.
 *
 * Builds the matrix with column c of U repeated in_c times and row r repeated
 * out_r times, and returns its permanent divided by sqrt(prod in_c! prod
 * out_r!).  A passive transformation conserves photon number, so mismatched
 * totals yield amplitude 0; pass `photon_mismatch` to observe that case.
 */
Complex transition_amplitude(const ModeUnitary& u, const FockState& in,
                             const FockState& out,
                             bool* photon_mismatch = nullptr);

/// Entries of U^dagger U - I whose magnitude exceeds tol.  Empty result
/// certifies unitarity at that tolerance.
std::vector<UnitarityViolation> check_unitary(const ModeUnitary& u, double tol);

/// All occupation vectors over `mode_count` modes with exactly `photons`
/// photons, in lexicographic order.
std::vector<FockState> enumerate_fock_states(int mode_count, int photons);

/// Haar-distributed random unitary (QR of a complex Gaussian matrix with the
/// R-diagonal phase fix).
ModeUnitary random_unitary(int dim, std::mt19937_64& rng);

}  // namespace wexpand
