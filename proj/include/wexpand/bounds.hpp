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

#include <string>
#include <vector>

namespace wexpand {

/// Coupling distribution P = (P_1, ..., P_{n+1}): the share |alpha_iH|^2 of
/// the ancilla intensity each post-selected output mode receives.  Entries
/// must be strictly positive; the admissible region additionally has S <= 1.
class DistributionVector {
 public:
  explicit DistributionVector(std::vector<double> p);

  int n() const { return static_cast<int>(p_.size()) - 1; }
  int size() const { return static_cast<int>(p_.size()); }
  double operator[](int i) const { return p_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& values() const { return p_; }

  double S() const;        // sum of entries
  double product() const;  // product of entries

 private:
  std::vector<double> p_;
};

/// True iff every entry is positive and S(P) <= 1 + slack.
bool in_region(const DistributionVector& p, double slack = 1e-12);

/// Upper bound from destructive interference of the photon that must reach
/// every output mode: F(P) = prod(P) * (sum_k 1/P_k - (n+1)^2).
double F_of(const DistributionVector& p);

/// Upper bound from the single polarization-flipped photon spreading over
/// all output modes: G(P) = prod(P) / S(P).
double G_of(const DistributionVector& p);

std::vector<double> grad_F(const DistributionVector& p);
std::vector<double> grad_G(const DistributionVector& p);

struct BoundValues {
  double S = 0.0;
  double product = 0.0;
  double F = 0.0;
  double G = 0.0;
  double H = 0.0;  // min(F, G)
};
BoundValues bound_values(const DistributionVector& p);

/// One-dimensional restrictions used by the analytic verification sweeps.
/// Symmetric slice: P_i = S/(n+1) for all i.
double F_symmetric(int n, double S);
double G_symmetric(int n, double S);
/// Two-level slice on the S = 1 face: m entries equal xi, the remaining
/// n+1-m equal (1 - m*xi)/(n+1-m).
double F_two_level(int n, int m, double xi);
double G_two_level(int n, int m, double xi);

/// Location of the F = G crossing on the two-level slice: the unique root in
/// (0, 1/(n+1)) of m((n+1)^2+1) x^2 - (2m(n+1)+1) x + m = 0.
double xi_m(int n, int m);

/// Bound value at that crossing: H_m = xi^m * ((1-m*xi)/(n+1-m))^(n+1-m).
double H_m_of(int n, int m);

/// H_m continued to real m; used for the interior-maximum comparison.
double H_m_real(int n, double m);

/// Best symmetric lossy operating point: H = n^n (n+2)^n / (n+1)^(3n+1),
/// reached at S = 1 - (n+1)^-2.
double H_lossy_of(int n);

/// Optimal first-mode coupling P_1 = xi_1(n) = (2n+3 - sqrt(4n+1)) / (2(n^2+2n+2)).
double P1_opt_of(int n);

/// H_1 in product form: (1/n)^n * P1 * (1-P1)^n.
double H_1_of(int n);

/// Success probabilities for expanding an N-photon W state by n photons.
double P_max_of(int n, int N);    // n! (N+n)/N * H_1
double P_lossy_of(int n, int N);  // n! (N+n)/N * H_lossy

struct AppendixCheck {
  std::string id;
  int n = 0;
  int m = -1;  // -1 when the check has no m parameter
  double margin = 0.0;
  bool pass = false;
};

struct AppendixReport {
  std::vector<AppendixCheck> checks;
  bool all_pass = true;
};

/**
 * @brief Re-derives the analytic optimality structure numerically for
 *        n = 1..n_max.
 *
 * Checks, per n: monotonicity and crossing of the symmetric-slice F and G
 * (crossing at S = 1 - (n+1)^-2, value H_lossy); existence, uniqueness and
 * location of the two-level crossing xi_m for each m; monotonicity of the
 * two-level F and G around it; H_1 > H_m for m >= 2 and H_1 > H_lossy; and
 * the interior-comparison ratio H_{(n+1)/2} / H_lossy > 1 evaluated both
 * directly and via its closed form.
 */
AppendixReport verify_appendices(int n_max);

}  // namespace wexpand
