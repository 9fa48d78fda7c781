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

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "oracles.hpp"
#include "wexpand/bounds.hpp"
#include "wexpand/circuit.hpp"
#include "wexpand/expansion.hpp"

using wexpand::CircuitSpec;
using wexpand::Coefficients;
using wexpand::CompiledCircuit;
using wexpand::Complex;
using wexpand::Element;
using wexpand::EtaVector;
using wexpand::ExpansionReport;
using wexpand::ModeUnitary;
using wexpand::Polarization;
using wexpand::WExpansionProblem;

namespace {

CompiledCircuit compile_identity(int n) {
  CircuitSpec spec;
  spec.n = n;
  spec.width = n + 1;
  for (int j = 1; j <= n + 1; ++j) spec.output_modes.push_back(j);
  return wexpand::compile(spec);
}

bool has_condition(const ExpansionReport& report, const std::string& id) {
  return std::any_of(report.violations.begin(), report.violations.end(),
                     [&](const wexpand::Violation& v) {
                       return v.condition == id;
                     });
}

double max_eta_deviation(const EtaVector& a, const EtaVector& b) {
  double dev = std::abs(a.eta0 - b.eta0);
  for (size_t i = 0; i < a.eta.size(); ++i)
    dev = std::max(dev, std::abs(a.eta[i] - b.eta[i]));
  return dev;
}

}  // namespace

TEST_CASE("the identity circuit has the obvious amplitudes") {
  // One extra photon: both the direct formula and the engine see the input
  // photon pass through on mode 1 while the ancilla photon stays on mode 2,
  // so the surviving amplitudes are exactly one.
  const CompiledCircuit id1 = compile_identity(1);
  const EtaVector closed = wexpand::eta_closed_form(
      wexpand::extract_coefficients(id1), 1);
  CHECK(std::abs(closed.eta0 - Complex(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(closed.eta[0] - Complex(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(closed.eta[1]) < 1e-15);
  const EtaVector engine = wexpand::eta_via_engine(id1, 1);
  CHECK(max_eta_deviation(closed, engine) < 1e-14);

  // Two extra photons: the ancilla cannot reach mode 3, so every
  // post-selected amplitude vanishes in both routes.
  const CompiledCircuit id2 = compile_identity(2);
  const EtaVector closed2 = wexpand::eta_closed_form(
      wexpand::extract_coefficients(id2), 2);
  CHECK(std::abs(closed2.eta0) < 1e-15);
  for (const Complex& e : closed2.eta) CHECK(std::abs(e) < 1e-15);
  CHECK(max_eta_deviation(closed2, wexpand::eta_via_engine(id2, 2)) < 1e-14);
}

TEST_CASE("the best construction reaches the known amplitude sizes") {
  const CompiledCircuit one = wexpand::compile(wexpand::build_optimal(1));
  const EtaVector eta1 = wexpand::eta_closed_form(
      wexpand::extract_coefficients(one), 1);
  CHECK(std::abs(std::norm(eta1.eta0) - 0.2) < 1e-14);

  const CompiledCircuit two = wexpand::compile(wexpand::build_optimal(2));
  const EtaVector eta2 = wexpand::eta_closed_form(
      wexpand::extract_coefficients(two), 2);
  CHECK(std::abs(std::norm(eta2.eta0) - 4.0 / 125.0) < 1e-14);
  for (const Complex& e : eta2.eta) CHECK(std::abs(e - eta2.eta0) < 1e-12);
}

TEST_CASE("the engine and the closed form agree on random circuits") {
  std::mt19937_64 rng(202601);
  for (int n = 1; n <= 3; ++n) {
    const int spatial = n + 2;
    std::vector<int> outputs;
    for (int j = 1; j <= n + 1; ++j) outputs.push_back(j);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      const ModeUnitary u = wexpand::random_unitary(2 * spatial, rng);
      const CompiledCircuit c = CompiledCircuit::from_unitary(u, outputs, n);
      const EtaVector closed =
          wexpand::eta_closed_form(wexpand::extract_coefficients(c), n);
      const EtaVector engine = wexpand::eta_via_engine(c, n);
      worst = std::max(worst, max_eta_deviation(closed, engine));
    }
    CHECK(worst < 1e-11);
  }
}

TEST_CASE("exact expansion holds for every builder and fails off it") {
  for (int n = 1; n <= 4; ++n) {
    const ExpansionReport report = wexpand::verify_exact_w(
        WExpansionProblem(2, n, wexpand::compile(wexpand::build_optimal(n))));
    CHECK(report.exact_w);
    CHECK(report.violations.empty());
    CHECK(std::abs(report.p_suc - wexpand::P_max_of(n, 2)) < 1e-10);

    // Once the amplitudes are mutually equal, the success probability can be
    // rebuilt from any single entry of the eta vector, not just eta0.
    const double prefactor = wexpand::factorial(n) * (2.0 + n) / 2.0;
    for (const Complex& e : report.eta.eta) {
      CHECK(std::abs(prefactor * std::norm(e) - report.p_suc) < 1e-12);
    }
  }

  const ExpansionReport lossy = wexpand::verify_exact_w(
      WExpansionProblem(2, 2, wexpand::compile(wexpand::build_lossy(2))));
  CHECK(lossy.exact_w);
  CHECK(std::abs(std::norm(lossy.eta.eta0) - 64.0 / 2187.0) < 1e-14);
  CHECK(std::abs(lossy.p_suc - 128.0 * 4.0 / (2187.0 * 2.0)) < 1e-12);

  const ExpansionReport hm = wexpand::verify_exact_w(
      WExpansionProblem(2, 3, wexpand::compile(wexpand::build_hm(3, 2))));
  CHECK(hm.exact_w);
  const double want =
      wexpand::factorial(3) * 5.0 / 2.0 * wexpand::H_m_of(3, 2);
  CHECK(std::abs(hm.p_suc - want) < 1e-12);
}

TEST_CASE("a balanced polarization splitter is not an expander") {
  CircuitSpec spec;
  spec.n = 1;
  spec.width = 2;
  spec.elements = {Element::pdbs(1, 2, 0.5, 0.5)};
  spec.output_modes = {1, 2};
  const ExpansionReport report =
      wexpand::verify_exact_w(WExpansionProblem(2, 1, wexpand::compile(spec)));
  CHECK_FALSE(report.exact_w);
  CHECK(report.p_suc == 0.0);
  CHECK(has_condition(report, "eta_mismatch"));
  CHECK(has_condition(report, "eta0_zero"));
}

TEST_CASE("polarization mixing ahead of the core is detected") {
  const double c = std::cos(M_PI / 4.0), s = std::sin(M_PI / 4.0);
  Eigen::Matrix2cd rot;
  rot << c, -s, s, c;

  // Rotating the accessed photon's mode leaks the 1H input into forbidden
  // patterns and shows up as a nonzero flipped component on an output arm.
  CircuitSpec spec = wexpand::build_optimal(1);
  spec.elements.insert(spec.elements.begin(), Element::waveplate(1, rot));
  const ExpansionReport front =
      wexpand::verify_exact_w(WExpansionProblem(2, 1, wexpand::compile(spec)));
  CHECK_FALSE(front.exact_w);
  CHECK(front.p_suc == 0.0);
  CHECK(has_condition(front, "beta_v"));

  const Coefficients coeffs =
      wexpand::extract_coefficients(wexpand::compile(spec));
  CHECK_FALSE(wexpand::appendix_a_conditions(coeffs, 1, 1e-10).empty());

  // Rotating the ancilla mode instead contaminates the coupling column.
  CircuitSpec anc = wexpand::build_optimal(1);
  anc.elements.insert(anc.elements.begin(), Element::waveplate(2, rot));
  const ExpansionReport back =
      wexpand::verify_exact_w(WExpansionProblem(2, 1, wexpand::compile(anc)));
  CHECK_FALSE(back.exact_w);
  CHECK(has_condition(back, "alpha_v"));

  // The untampered builders sail through the precondition check.
  for (int n = 1; n <= 6; ++n) {
    std::vector<CircuitSpec> family = {wexpand::build_optimal(n),
                                       wexpand::build_lossy(n)};
    for (int m = 1; m <= n; ++m) family.push_back(wexpand::build_hm(n, m));
    for (const CircuitSpec& member : family) {
      const Coefficients clean =
          wexpand::extract_coefficients(wexpand::compile(member));
      CHECK(wexpand::appendix_a_conditions(clean, n, 1e-10).empty());
    }
  }
}

TEST_CASE("success probability scales correctly with the initial state size") {
  const CompiledCircuit c = wexpand::compile(wexpand::build_optimal(2));
  double previous = 1.0;
  for (int N = 2; N <= 10; ++N) {
    const ExpansionReport report =
        wexpand::verify_exact_w(WExpansionProblem(N, 2, c));
    CHECK(report.exact_w);
    CHECK(report.p_suc > 0.0);
    CHECK(report.p_suc <= 1.0);
    CHECK(report.p_suc < previous);
    CHECK(std::abs(report.p_suc - 8.0 * (N + 2.0) / (125.0 * N)) < 1e-12);
    previous = report.p_suc;
  }

  // The pattern checks themselves are independent of N.
  const ExpansionReport at2 = wexpand::verify_exact_w(WExpansionProblem(2, 2, c));
  const ExpansionReport at9 = wexpand::verify_exact_w(WExpansionProblem(9, 2, c));
  CHECK(at2.exact_w == at9.exact_w);
  CHECK(at2.violations.size() == at9.violations.size());
  CHECK(std::abs(at2.eta.eta0 - at9.eta.eta0) == 0.0);
}

TEST_CASE("an evenly spread coupling forces complete destructive interference") {
  std::mt19937_64 rng(40311);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int n = 1; n <= 4; ++n) {
    const int k = n + 1;
    const double a = 1.0 / std::sqrt(static_cast<double>(k));
    Coefficients coeffs;
    coeffs.alpha = Eigen::VectorXcd::Zero(2 * k);
    coeffs.beta = Eigen::VectorXcd::Zero(2 * k);
    coeffs.gamma = Eigen::VectorXcd::Zero(2 * k);
    for (int j = 1; j <= k; ++j) coeffs.output_modes.push_back(j);
    for (int j = 0; j < k; ++j) coeffs.alpha(2 * j) = a;

    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXcd b = Eigen::VectorXcd::Zero(2 * k);
      for (int j = 0; j < k; ++j)
        b(2 * j) = Complex(unit(rng), unit(rng));
      // Admissible second column: orthogonal to the coupling column.
      const Complex overlap = coeffs.alpha.dot(b);
      b -= overlap * coeffs.alpha;
      coeffs.beta = b;
      const EtaVector eta = wexpand::eta_closed_form(coeffs, n);
      CHECK(std::abs(eta.eta0) < 1e-12);
    }
  }
}

TEST_CASE("expansion guards reject malformed problems") {
  const CompiledCircuit c = wexpand::compile(wexpand::build_optimal(1));
  CHECK_THROWS_AS(WExpansionProblem(1, 1, c), std::domain_error);
  CHECK_THROWS_AS(WExpansionProblem(2, 0, c), std::domain_error);
  CHECK_THROWS_AS(WExpansionProblem(2, 2, c), std::invalid_argument);
  CHECK_THROWS_AS(
      wexpand::verify_exact_w(WExpansionProblem(2, 1, c), 0.0),
      std::domain_error);
  CHECK_THROWS_AS(
      wexpand::verify_exact_w(WExpansionProblem(2, 1, c), -1.0),
      std::domain_error);
  CHECK_THROWS_AS(wexpand::success_probability(1, 1, Complex(0.1, 0.0)),
                  std::domain_error);
}
