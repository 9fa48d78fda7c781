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

#include "wexpand/fock.hpp"

#include <bit>
#include <cstdint>
#include <stdexcept>

namespace wexpand {

PolarizedMode PolarizedMode::from_flat(int flat) {
  if (flat < 0) throw std::invalid_argument("PolarizedMode: negative flat index");
  PolarizedMode m;
  m.spatial = flat / 2 + 1;
  m.pol = (flat % 2 == 0) ? Polarization::H : Polarization::V;
  return m;
}

double factorial(int n) {
  if (n < 0) throw std::domain_error("factorial: negative argument");
  if (n > 170) throw std::domain_error("factorial: overflows double");
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

FockState::FockState(std::vector<int> occupations) : occ_(std::move(occupations)) {
  if (occ_.empty()) throw std::invalid_argument("FockState: no modes");
  for (int c : occ_) {
    if (c < 0) throw std::invalid_argument("FockState: negative occupation");
    total_ += c;
  }
}

FockState FockState::vacuum(int mode_count) {
  if (mode_count < 1) throw std::invalid_argument("FockState: mode_count < 1");
  return FockState(std::vector<int>(static_cast<std::size_t>(mode_count), 0));
}

FockState FockState::with_photons(int mode, int count) const {
  if (mode < 0 || mode >= mode_count())
    throw std::invalid_argument("FockState: mode out of range");
  if (count < 0) throw std::invalid_argument("FockState: negative photon count");
  std::vector<int> occ = occ_;
  occ[static_cast<std::size_t>(mode)] += count;
  return FockState(std::move(occ));
}

ModeUnitary::ModeUnitary(Eigen::MatrixXcd m) : mat_(std::move(m)) {
  if (mat_.rows() != mat_.cols() || mat_.rows() < 1)
    throw std::invalid_argument("ModeUnitary: matrix must be square and nonempty");
}

ModeUnitary ModeUnitary::identity(int dim) {
  if (dim < 1) throw std::invalid_argument("ModeUnitary: dim < 1");
  return ModeUnitary(Eigen::MatrixXcd::Identity(dim, dim));
}

Complex permanent(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("permanent: matrix must be square");
  const int d = static_cast<int>(m.rows());
  if (d == 0) return Complex(1.0, 0.0);
  if (d > 30) throw std::invalid_argument("permanent: dimension exceeds 30");

  // Ryser: per(A) = (-1)^d sum_{S != empty} (-1)^|S| prod_i sum_{j in S} a_ij.
  // Successive Gray codes differ in one column, so the row sums are updated
  // incrementally instead of being rebuilt per subset.
  std::vector<Complex> row_sums(static_cast<std::size_t>(d), Complex(0.0, 0.0));
  Complex total(0.0, 0.0);
  std::uint64_t gray = 0;
  const std::uint64_t last = (std::uint64_t{1} << d) - 1;
  for (std::uint64_t k = 1; k <= last; ++k) {
    const std::uint64_t next = k ^ (k >> 1);
    const std::uint64_t changed = next ^ gray;
    const int j = std::countr_zero(changed);
    if (next & changed) {
      for (int i = 0; i < d; ++i) row_sums[static_cast<std::size_t>(i)] += m(i, j);
    } else {
      for (int i = 0; i < d; ++i) row_sums[static_cast<std::size_t>(i)] -= m(i, j);
    }
    gray = next;
    Complex prod(1.0, 0.0);
    for (int i = 0; i < d; ++i) prod *= row_sums[static_cast<std::size_t>(i)];
    const int popc = std::popcount(gray);
    if ((d - popc) % 2 == 0)
      total += prod;
    else
      total -= prod;
  }
  return total;
}

Complex transition_amplitude(const ModeUnitary& u, const FockState& in,
                             const FockState& out, bool* photon_mismatch) {
  if (photon_mismatch) *photon_mismatch = false;
  if (in.mode_count() != u.dim() || out.mode_count() != u.dim())
    throw std::invalid_argument("transition_amplitude: state/unitary dimension mismatch");
  if (in.total_photons() != out.total_photons()) {
    if (photon_mismatch) *photon_mismatch = true;
    return Complex(0.0, 0.0);
  }
  const int p = in.total_photons();
  if (p == 0) return Complex(1.0, 0.0);

  std::vector<int> cols, rows;
  cols.reserve(static_cast<std::size_t>(p));
  rows.reserve(static_cast<std::size_t>(p));
  double norm_sq = 1.0;
  for (int c = 0; c < u.dim(); ++c) {
    const int nc = in.occupation(c);
    for (int k = 0; k < nc; ++k) cols.push_back(c);
    norm_sq *= factorial(nc);
  }
  for (int r = 0; r < u.dim(); ++r) {
    const int mr = out.occupation(r);
    for (int k = 0; k < mr; ++k) rows.push_back(r);
    norm_sq *= factorial(mr);
  }

  Eigen::MatrixXcd sub(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      sub(i, j) = u.coeff(rows[static_cast<std::size_t>(i)],
                          cols[static_cast<std::size_t>(j)]);
  return permanent(sub) / std::sqrt(norm_sq);
}

std::vector<UnitarityViolation> check_unitary(const ModeUnitary& u, double tol) {
  if (tol <= 0.0) throw std::domain_error("check_unitary: tol must be positive");
  const int d = u.dim();
  const Eigen::MatrixXcd err =
      u.matrix().adjoint() * u.matrix() - Eigen::MatrixXcd::Identity(d, d);
  std::vector<UnitarityViolation> out;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double mag = std::abs(err(i, j));
      if (mag > tol) out.push_back({i, j, mag});
    }
  return out;
}

namespace {

void enumerate_rec(int mode, int remaining, std::vector<int>& occ,
                   std::vector<FockState>& out) {
  const int modes = static_cast<int>(occ.size());
  if (mode == modes - 1) {
    occ[static_cast<std::size_t>(mode)] = remaining;
    out.emplace_back(occ);
    occ[static_cast<std::size_t>(mode)] = 0;
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    occ[static_cast<std::size_t>(mode)] = k;
    enumerate_rec(mode + 1, remaining - k, occ, out);
  }
  occ[static_cast<std::size_t>(mode)] = 0;
}

}  // namespace

std::vector<FockState> enumerate_fock_states(int mode_count, int photons) {
  if (mode_count < 1) throw std::invalid_argument("enumerate_fock_states: mode_count < 1");
  if (photons < 0) throw std::invalid_argument("enumerate_fock_states: photons < 0");
  std::vector<FockState> out;
  std::vector<int> occ(static_cast<std::size_t>(mode_count), 0);
  enumerate_rec(0, photons, occ, out);
  return out;
}

ModeUnitary random_unitary(int dim, std::mt19937_64& rng) {
  if (dim < 1) throw std::invalid_argument("random_unitary: dim < 1");
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the diagonal phases so the distribution is Haar, not QR-skewed.
  for (int j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    const double a = std::abs(d);
    q.col(j) *= (a > 0.0) ? d / a : Complex(1.0, 0.0);
  }
  return ModeUnitary(std::move(q));
}

}  // namespace wexpand
