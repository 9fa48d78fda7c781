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
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "wexpand/bounds.hpp"
#include "wexpand/optimizer.hpp"

using wexpand::DistributionVector;
using wexpand::LocalMaxReport;
using wexpand::OptimizationResult;
using wexpand::OptimumKind;
using wexpand::PerturbationBasis;
using wexpand::SearchConfig;

namespace {

std::vector<double> two_level_point(int n, int m) {
  const double xi = wexpand::xi_m(n, m);
  const double zeta = (1.0 - m * xi) / (n + 1.0 - m);
  std::vector<double> p;
  for (int i = 0; i < m; ++i) p.push_back(xi);
  for (int i = m; i < n + 1; ++i) p.push_back(zeta);
  return p;
}

std::vector<double> lossy_point(int n) {
  const double k = n + 1.0;
  const double s_star = 1.0 - 1.0 / (k * k);
  return std::vector<double>(static_cast<size_t>(n + 1), s_star / k);
}

}  // namespace

TEST_CASE("the search recovers the known maximum for one extra photon") {
  SearchConfig config;
  config.restarts = 24;
  config.seed = 99;
  const OptimizationResult r = wexpand::maximize_H(1, config);
  CHECK(std::abs(r.best_H - 0.2) < 1e-6);
  CHECK(r.converged);
  CHECK(r.classification.kind == OptimumKind::lossless_m);
  CHECK(r.classification.m == 1);

  std::vector<double> sorted = r.best_P;
  std::sort(sorted.begin(), sorted.end());
  CHECK(std::abs(sorted[0] - (5.0 - std::sqrt(5.0)) / 10.0) < 1e-4);
  CHECK(std::abs(sorted[1] - (5.0 + std::sqrt(5.0)) / 10.0) < 1e-4);
}

TEST_CASE("the search recovers the known maximum for up to six extra photons") {
  for (int n = 1; n <= 6; ++n) {
    SearchConfig config;
    const OptimizationResult r = wexpand::maximize_H(n, config);
    CHECK(std::abs(r.best_H - wexpand::H_1_of(n)) < 1e-6);
    CHECK(r.classification.kind == OptimumKind::lossless_m);
    CHECK(r.classification.m == 1);

    std::vector<double> sorted = r.best_P;
    std::sort(sorted.begin(), sorted.end());
    const std::vector<double> want = two_level_point(n, 1);
    for (size_t i = 0; i < sorted.size(); ++i)
      CHECK(std::abs(sorted[i] - want[i]) < 1e-4);

    // The endpoint must lie inside the search region.
    double total = 0.0;
    for (double p : r.best_P) {
      CHECK(p > 1e-12);
      total += p;
    }
    CHECK(total <= 1.0 + 1e-9);
    CHECK(r.trace.size() >= 2 * static_cast<size_t>(config.restarts));
  }
}

TEST_CASE("the search is bit-reproducible for a fixed seed") {
  SearchConfig config;
  config.restarts = 12;
  config.seed = 512;
  const OptimizationResult a = wexpand::maximize_H(3, config);
  const OptimizationResult b = wexpand::maximize_H(3, config);
  CHECK(a.best_H == b.best_H);
  REQUIRE(a.best_P.size() == b.best_P.size());
  for (size_t i = 0; i < a.best_P.size(); ++i)
    CHECK(a.best_P[i] == b.best_P[i]);

  SearchConfig other = config;
  other.seed = 513;
  const OptimizationResult c = wexpand::maximize_H(3, other);
  CHECK(std::abs(c.best_H - a.best_H) < 1e-6);
}

TEST_CASE("search settings are validated before use") {
  SearchConfig config;
  config.restarts = 0;
  CHECK_THROWS_AS(wexpand::maximize_H(2, config), std::domain_error);
  config = SearchConfig{};
  config.max_iters = 0;
  CHECK_THROWS_AS(config.validate(), std::domain_error);
  config = SearchConfig{};
  config.tol_f = 0.0;
  CHECK_THROWS_AS(config.validate(), std::domain_error);
  CHECK_THROWS_AS(wexpand::maximize_H(0, SearchConfig{}), std::domain_error);
}

TEST_CASE("both analytic optima pass the local-maximum verification") {
  // Interior optimum of the deliberate-loss family: probe freely.
  const LocalMaxReport lossy = wexpand::verify_local_max(
      DistributionVector(lossy_point(2)), 2,
      PerturbationBasis::unconstrained(2), 1e-4);
  CHECK(lossy.no_improving_direction);
  CHECK(lossy.cross_condition_holds);
  CHECK(lossy.cross_residual < 1e-9);
  CHECK(lossy.pass);
  CHECK(lossy.directions >= 64);

  // Lossless optimum sits on the sum-one face: probe within the face.
  const LocalMaxReport lossless = wexpand::verify_local_max(
      DistributionVector(two_level_point(3, 1)), 3,
      PerturbationBasis::constrained_on_face(3), 1e-4);
  CHECK(lossless.no_improving_direction);
  CHECK(lossless.cross_condition_holds);
  CHECK(lossless.cross_residual < 1e-9);
  CHECK(lossless.pass);
}

TEST_CASE("the even sum-one coupling is exposed as non-maximal") {
  // All couplings equal on the face: the interference bound vanishes there,
  // so stepping toward smaller sums immediately improves the objective.
  const std::vector<double> sym(3, 1.0 / 3.0);
  const LocalMaxReport report = wexpand::verify_local_max(
      DistributionVector(sym), 2, PerturbationBasis::unconstrained(2), 1e-3);
  CHECK_FALSE(report.no_improving_direction);
  CHECK(report.max_improvement > 1e-12);
  CHECK_FALSE(report.pass);
}

TEST_CASE("the gradient cross condition has discriminating power") {
  std::mt19937_64 rng(424344);
  std::vector<double> residuals;
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = oracles::random_region_point(4, rng, 0.3);
    const LocalMaxReport r = wexpand::verify_local_max(
        DistributionVector(p), 3, PerturbationBasis::unconstrained(3), 1e-5);
    residuals.push_back(r.cross_residual);
  }
  std::sort(residuals.begin(), residuals.end());
  CHECK(residuals[residuals.size() / 2] > 1e-3);
}

TEST_CASE("local-maximum verification rejects malformed queries") {
  const DistributionVector ok(lossy_point(2));
  CHECK_THROWS_AS(wexpand::verify_local_max(
                      ok, 2, PerturbationBasis::unconstrained(2), 0.0),
                  std::domain_error);
  CHECK_THROWS_AS(wexpand::verify_local_max(
                      ok, 3, PerturbationBasis::unconstrained(3), 1e-4),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      wexpand::verify_local_max(DistributionVector({0.9, 0.9, 0.9}), 2,
                                PerturbationBasis::unconstrained(2), 1e-4),
      std::invalid_argument);
  CHECK_THROWS_AS(PerturbationBasis::unconstrained(0), std::domain_error);
}

TEST_CASE("the symmetric-family scan lands exactly on the crossing") {
  const wexpand::SymmetricScanResult one = wexpand::scan_symmetric_lossy(1);
  CHECK(std::abs(one.S_star - 0.75) < 1e-9);
  CHECK(std::abs(one.H_star - 3.0 / 16.0) < 1e-12);

  const wexpand::SymmetricScanResult two = wexpand::scan_symmetric_lossy(2);
  CHECK(std::abs(two.S_star - 8.0 / 9.0) < 1e-9);
  CHECK(std::abs(two.H_star - 64.0 / 2187.0) < 1e-12);

  for (int n = 1; n <= 6; ++n) {
    const wexpand::SymmetricScanResult r = wexpand::scan_symmetric_lossy(n);
    const double k = n + 1.0;
    CHECK(std::abs(r.S_star - (1.0 - 1.0 / (k * k))) < 1e-9);
    CHECK(std::abs(r.H_star - wexpand::H_lossy_of(n)) < 1e-12);
  }
  CHECK_THROWS_AS(wexpand::scan_symmetric_lossy(0), std::domain_error);
}

TEST_CASE("no sampled circuit beats the closed-form optimum") {
  const wexpand::SweepReport one = wexpand::end_to_end_optimality(1, 1500);
  CHECK(one.pass);
  CHECK(one.trials == 1500);
  CHECK(one.exceed_count == 0);
  CHECK(one.exact_count > 0);
  CHECK(one.N_ref == 2);
  CHECK(std::abs(one.p_max_reference - wexpand::P_max_of(1, 2)) < 1e-15);
  // The first trial is the closed-form construction itself, so the best
  // sampled probability is the optimum, to rounding.
  CHECK(std::abs(one.max_p_suc - one.p_max_reference) < 1e-12);

  const wexpand::SweepReport two = wexpand::end_to_end_optimality(2, 800);
  CHECK(two.pass);
  CHECK(two.exact_count > 0);
  CHECK(std::abs(two.max_p_suc - wexpand::P_max_of(2, 2)) < 1e-12);

  CHECK_THROWS_AS(wexpand::end_to_end_optimality(1, 0), std::domain_error);
}

TEST_CASE("trace rows serialize as plain CSV") {
  wexpand::RestartTrace t;
  t.restart = 3;
  t.history = {0.1, 0.15, 0.2};
  std::ostringstream out;
  wexpand::write_trace_csv(out, {t});
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "restart,iteration,H");
  std::getline(in, line);
  CHECK(line.rfind("3,0,", 0) == 0);
  std::getline(in, line);
  CHECK(line.rfind("3,1,", 0) == 0);
}
