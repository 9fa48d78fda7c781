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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "oracles.hpp"
#include "wexpand/fock.hpp"

using wexpand::Complex;
using wexpand::FockState;
using wexpand::ModeUnitary;
using wexpand::Polarization;
using wexpand::PolarizedMode;

namespace {

Eigen::MatrixXcd random_complex_matrix(int rows, int cols,
                                       std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::MatrixXcd m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = Complex(unit(rng), unit(rng));
  return m;
}

}  // namespace

TEST_CASE("permanent of the identity and of small hand-expanded matrices") {
  CHECK(std::abs(wexpand::permanent(Eigen::MatrixXcd::Identity(3, 3)) -
                 Complex(1.0, 0.0)) < 1e-15);

  Eigen::MatrixXcd m(2, 2);
  const Complex a(0.3, -0.2), b(1.1, 0.4), c(-0.7, 0.9), d(0.5, 0.25);
  m << a, b, c, d;
  CHECK(std::abs(wexpand::permanent(m) - (a * d + b * c)) < 1e-15);

  Eigen::MatrixXcd one(1, 1);
  one << Complex(2.5, -1.5);
  CHECK(std::abs(wexpand::permanent(one) - Complex(2.5, -1.5)) < 1e-15);

  CHECK(std::abs(wexpand::permanent(Eigen::MatrixXcd(0, 0)) -
                 Complex(1.0, 0.0)) < 1e-15);
}

TEST_CASE("permanent agrees with the brute-force permutation sum") {
  std::mt19937_64 rng(8041);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXcd m = random_complex_matrix(5, 5, rng);
    const Complex fast = wexpand::permanent(m);
    const Complex slow = oracles::naive_permanent(m);
    CHECK(std::abs(fast - slow) < 1e-12);
  }
  for (int d = 1; d <= 7; ++d) {
    const Eigen::MatrixXcd m = random_complex_matrix(d, d, rng);
    CHECK(std::abs(wexpand::permanent(m) - oracles::naive_permanent(m)) <
          1e-11);
  }
}

TEST_CASE("permanent is linear in each row") {
  std::mt19937_64 rng(117);
  const Eigen::MatrixXcd m = random_complex_matrix(4, 4, rng);
  const Complex base = wexpand::permanent(m);
  const Complex scale(0.37, -1.2);
  for (int row = 0; row < 4; ++row) {
    Eigen::MatrixXcd scaled = m;
    scaled.row(row) *= scale;
    CHECK(std::abs(wexpand::permanent(scaled) - scale * base) <
          1e-12 * std::abs(base));
  }
}

TEST_CASE("permanent rejects non-square and oversized matrices") {
  CHECK_THROWS_AS(wexpand::permanent(Eigen::MatrixXcd::Zero(2, 3)),
                  std::invalid_argument);
  CHECK_THROWS_AS(wexpand::permanent(Eigen::MatrixXcd::Identity(31, 31)),
                  std::invalid_argument);
}

TEST_CASE("single photon through the identity stays put") {
  const ModeUnitary u = ModeUnitary::identity(3);
  const FockState in({1, 0, 0});
  CHECK(std::abs(wexpand::transition_amplitude(u, in, in) -
                 Complex(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(wexpand::transition_amplitude(u, in, FockState({0, 1, 0}))) <
        1e-15);
}

TEST_CASE("two photons on a balanced splitter never exit separately") {
  const double t = 0.5;
  Eigen::MatrixXcd g(2, 2);
  g << std::sqrt(t), std::sqrt(1.0 - t), -std::sqrt(1.0 - t), std::sqrt(t);
  const ModeUnitary u{g};
  const FockState in({1, 1});

  const Complex both_apart =
      wexpand::transition_amplitude(u, in, FockState({1, 1}));
  CHECK(std::abs(both_apart) < 1e-15);

  const Complex bunched_a =
      wexpand::transition_amplitude(u, in, FockState({2, 0}));
  const Complex bunched_b =
      wexpand::transition_amplitude(u, in, FockState({0, 2}));
  CHECK(std::abs(std::abs(bunched_a) - 1.0 / std::sqrt(2.0)) < 1e-14);
  CHECK(std::abs(std::abs(bunched_b) - 1.0 / std::sqrt(2.0)) < 1e-14);
}

TEST_CASE("two-photon amplitudes match the hand-expanded operator product") {
  std::mt19937_64 rng(5150);
  const FockState in({1, 1});
  for (int trial = 0; trial < 20; ++trial) {
    const ModeUnitary u = wexpand::random_unitary(2, rng);
    Eigen::Matrix2cd g = u.matrix();
    const auto expect = oracles::two_photon_on_two_modes(g);
    CHECK(std::abs(wexpand::transition_amplitude(u, in, FockState({2, 0})) -
                   expect.to_20) < 1e-13);
    CHECK(std::abs(wexpand::transition_amplitude(u, in, FockState({1, 1})) -
                   expect.to_11) < 1e-13);
    CHECK(std::abs(wexpand::transition_amplitude(u, in, FockState({0, 2})) -
                   expect.to_02) < 1e-13);
  }
}

TEST_CASE("amplitudes over all outputs are complete for a unitary") {
  std::mt19937_64 rng(424242);
  const struct {
    int dim;
    int photons;
  } cases[] = {{2, 2}, {3, 3}, {4, 3}, {6, 2}, {8, 4}};
  for (const auto& c : cases) {
    const ModeUnitary u = wexpand::random_unitary(c.dim, rng);
    std::vector<int> occ(static_cast<size_t>(c.dim), 0);
    for (int p = 0; p < c.photons; ++p)
      occ[static_cast<size_t>(static_cast<int>(rng() % c.dim))] += 1;
    const FockState in(occ);
    double total = 0.0;
    for (const FockState& out :
         wexpand::enumerate_fock_states(c.dim, c.photons)) {
      const Complex amp = wexpand::transition_amplitude(u, in, out);
      total += std::norm(amp);
    }
    CHECK(std::abs(total - 1.0) < 1e-10);
  }
}

TEST_CASE("reversing a transition conjugates its amplitude") {
  std::mt19937_64 rng(90210);
  for (int trial = 0; trial < 12; ++trial) {
    const int dim = 3 + static_cast<int>(rng() % 3);
    const int photons = 1 + static_cast<int>(rng() % 3);
    const ModeUnitary u = wexpand::random_unitary(dim, rng);
    const auto states = wexpand::enumerate_fock_states(dim, photons);
    const FockState& a = states[rng() % states.size()];
    const FockState& b = states[rng() % states.size()];
    const Complex fwd = wexpand::transition_amplitude(u, a, b);
    const Complex rev = wexpand::transition_amplitude(u.adjoint(), b, a);
    CHECK(std::abs(fwd - std::conj(rev)) < 1e-12);
  }
}

TEST_CASE("photon-number mismatch is flagged and yields amplitude zero") {
  const ModeUnitary u = ModeUnitary::identity(2);
  bool mismatch = false;
  const Complex amp = wexpand::transition_amplitude(
      u, FockState({1, 0}), FockState({1, 1}), &mismatch);
  CHECK(mismatch);
  CHECK(std::abs(amp) == 0.0);

  mismatch = true;
  wexpand::transition_amplitude(u, FockState({1, 0}), FockState({0, 1}),
                                &mismatch);
  CHECK_FALSE(mismatch);
}

TEST_CASE("unitarity check accepts unitaries and localizes defects") {
  CHECK(wexpand::check_unitary(ModeUnitary::identity(4), 1e-12).empty());

  std::mt19937_64 rng(777);
  const ModeUnitary u = wexpand::random_unitary(6, rng);
  CHECK(wexpand::check_unitary(u, 1e-12).empty());

  Eigen::MatrixXcd damaged = u.matrix();
  damaged(0, 1) += Complex(1e-3, 0.0);
  const auto violations = wexpand::check_unitary(ModeUnitary{damaged}, 1e-6);
  CHECK_FALSE(violations.empty());
  double worst = 0.0;
  for (const auto& v : violations) worst = std::max(worst, v.magnitude);
  CHECK(worst > 1e-4);

  CHECK_THROWS_AS(wexpand::check_unitary(u, 0.0), std::domain_error);
}

TEST_CASE("factorial handles the exact range and rejects the rest") {
  CHECK(wexpand::factorial(0) == 1.0);
  CHECK(wexpand::factorial(1) == 1.0);
  CHECK(wexpand::factorial(5) == 120.0);
  CHECK(wexpand::factorial(12) == 479001600.0);
  CHECK_THROWS_AS(wexpand::factorial(-1), std::domain_error);
  CHECK_THROWS_AS(wexpand::factorial(171), std::domain_error);
}

TEST_CASE("fock state enumeration is exhaustive and ordered") {
  const auto states = wexpand::enumerate_fock_states(3, 2);
  CHECK(states.size() == 6);  // C(3 + 2 - 1, 2)
  for (const auto& s : states) CHECK(s.total_photons() == 2);
  for (size_t i = 1; i < states.size(); ++i)
    CHECK(states[i - 1].occupations() > states[i].occupations());

  const auto single = wexpand::enumerate_fock_states(4, 0);
  CHECK(single.size() == 1);
  CHECK(single[0] == FockState::vacuum(4));
}

TEST_CASE("polarized mode flat indexing round-trips") {
  for (int flat = 0; flat < 12; ++flat) {
    const PolarizedMode m = PolarizedMode::from_flat(flat);
    CHECK(m.flat() == flat);
  }
  CHECK(PolarizedMode{1, Polarization::H}.flat() == 0);
  CHECK(PolarizedMode{1, Polarization::V}.flat() == 1);
  CHECK(PolarizedMode{3, Polarization::H}.flat() == 4);
  CHECK_THROWS_AS(PolarizedMode::from_flat(-1), std::invalid_argument);
}

TEST_CASE("fock state constructors police their inputs") {
  CHECK_THROWS_AS(FockState({}), std::invalid_argument);
  CHECK_THROWS_AS(FockState({1, -1}), std::invalid_argument);
  CHECK_THROWS_AS(FockState::vacuum(0), std::invalid_argument);

  const FockState s = FockState::vacuum(3).with_photons(1, 2);
  CHECK(s.occupation(1) == 2);
  CHECK(s.total_photons() == 2);
  CHECK_THROWS_AS(s.with_photons(3, 1), std::invalid_argument);
  CHECK_THROWS_AS(s.with_photons(0, -1), std::invalid_argument);
}

TEST_CASE("random unitaries are unitary and seed-reproducible") {
  std::mt19937_64 a(31337), b(31337);
  const ModeUnitary ua = wexpand::random_unitary(5, a);
  const ModeUnitary ub = wexpand::random_unitary(5, b);
  CHECK((ua.matrix() - ub.matrix()).norm() == 0.0);
  CHECK(wexpand::check_unitary(ua, 1e-12).empty());
}
