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

#include "wexpand/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

#include "wexpand/circuit.hpp"
#include "wexpand/expansion.hpp"
#include "wexpand/parallel.hpp"

namespace wexpand {

namespace {

constexpr double kFloorP = 1e-9;

using VecD = std::vector<double>;

double H_at(const VecD& p) { return bound_values(DistributionVector(p)).H; }

/// Pulls an arbitrary vector into the coupling region: every coordinate at
/// least kFloorP, coordinate sum at most one.
VecD project_interior(VecD x) {
  for (double& xi : x) xi = std::max(xi, kFloorP);
  double s = 0.0;
  for (double xi : x) s += xi;
  if (s > 1.0)
    for (double& xi : x) xi /= s;
  return x;
}

/// Maps n free coordinates onto the sum-one face of the region.
VecD face_to_full(VecD y) {
  for (double& yi : y) yi = std::min(std::max(yi, kFloorP), 1.5);
  double s = 0.0;
  for (double yi : y) s += yi;
  if (s > 1.0 - kFloorP) {
    const double scale = (1.0 - kFloorP) / s;
    for (double& yi : y) yi *= scale;
    s = 1.0 - kFloorP;
  }
  y.push_back(1.0 - s);
  return y;
}

struct NmOutcome {
  VecD x;
  double f = 0.0;
  VecD history;  // best objective value after each iteration
  bool converged = false;
};

/// Plain downhill-simplex minimization.  Deterministic for a fixed start;
/// tolerates the kink of min(F, G) because no derivative is ever formed.
NmOutcome nelder_mead(const std::function<double(const VecD&)>& f, VecD x0,
                      double step, int max_iters, double tol_x, double tol_f) {
  const size_t d = x0.size();
  std::vector<VecD> xs(d + 1, x0);
  for (size_t i = 0; i < d; ++i) xs[i + 1][i] += step;
  VecD fs(d + 1);
  for (size_t i = 0; i <= d; ++i) fs[i] = f(xs[i]);

  NmOutcome out;
  std::vector<size_t> order(d + 1);
  for (int iter = 0; iter < max_iters; ++iter) {
    for (size_t i = 0; i <= d; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return fs[a] < fs[b]; });
    const size_t best = order[0];
    const size_t worst = order[d];
    const size_t second_worst = order[d - 1];
    out.history.push_back(fs[best]);

    double spread = 0.0;
    double extent = 0.0;
    for (size_t i = 0; i <= d; ++i) {
      spread = std::max(spread, std::abs(fs[i] - fs[best]));
      for (size_t j = 0; j < d; ++j)
        extent = std::max(extent, std::abs(xs[i][j] - xs[best][j]));
    }
    if (spread < tol_f && extent < tol_x) {
      out.converged = true;
      break;
    }

    VecD centroid(d, 0.0);
    for (size_t i = 0; i <= d; ++i) {
      if (i == worst) continue;
      for (size_t j = 0; j < d; ++j) centroid[j] += xs[i][j];
    }
    for (size_t j = 0; j < d; ++j) centroid[j] /= static_cast<double>(d);

    auto blend = [&](double c) {
      VecD x(d);
      for (size_t j = 0; j < d; ++j)
        x[j] = centroid[j] + c * (centroid[j] - xs[worst][j]);
      return x;
    };

    const VecD reflected = blend(1.0);
    const double fr = f(reflected);
    if (fr < fs[best]) {
      const VecD expanded = blend(2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        xs[worst] = expanded;
        fs[worst] = fe;
      } else {
        xs[worst] = reflected;
        fs[worst] = fr;
      }
    } else if (fr < fs[second_worst]) {
      xs[worst] = reflected;
      fs[worst] = fr;
    } else {
      const VecD contracted = blend(fr < fs[worst] ? 0.5 : -0.5);
      const double fc = f(contracted);
      if (fc < std::min(fr, fs[worst])) {
        xs[worst] = contracted;
        fs[worst] = fc;
      } else {
        for (size_t i = 0; i <= d; ++i) {
          if (i == best) continue;
          for (size_t j = 0; j < d; ++j)
            xs[i][j] = xs[best][j] + 0.5 * (xs[i][j] - xs[best][j]);
          fs[i] = f(xs[i]);
        }
      }
    }
  }

  size_t best = 0;
  for (size_t i = 1; i <= d; ++i)
    if (fs[i] < fs[best]) best = i;
  out.x = xs[best];
  out.f = fs[best];
  return out;
}

/// Random point of the region: a uniform simplex draw scaled by a uniform
/// total in (0, 1].
VecD sample_region(int k, std::mt19937_64& rng, bool on_face) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  VecD p(k);
  double total = 0.0;
  for (double& pi : p) {
    double u = unit(rng);
    while (u <= 0.0) u = unit(rng);
    pi = -std::log(u);
    total += pi;
  }
  double s = 1.0;
  if (!on_face) {
    s = unit(rng);
    if (s <= 0.0) s = 1.0;
  }
  for (double& pi : p) pi *= s / total;
  return p;
}

VecD sorted_copy(const VecD& p) {
  VecD s = p;
  std::sort(s.begin(), s.end());
  return s;
}

bool lex_less(const VecD& a, const VecD& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

Classification classify_point(const VecD& p, int n) {
  const int k = n + 1;
  const VecD s = sorted_copy(p);
  double S = 0.0;
  for (double v : s) S += v;
  const double tol = 1e-3;

  if (std::abs(S - 1.0) <= tol) {
    for (int m = 1; m <= n; ++m) {
      const double xi = xi_m(n, m);
      const double zeta = (1.0 - m * xi) / (k - m);
      double dev = 0.0;
      for (int i = 0; i < k; ++i)
        dev = std::max(dev, std::abs(s[i] - (i < m ? xi : zeta)));
      if (dev <= tol) return {OptimumKind::lossless_m, m};
    }
  }
  const double S_star = 1.0 - 1.0 / (static_cast<double>(k) * k);
  if (std::abs(S - S_star) <= tol) {
    double dev = 0.0;
    for (int i = 0; i < k; ++i) dev = std::max(dev, std::abs(s[i] - S_star / k));
    if (dev <= tol) return {OptimumKind::lossy_symmetric, 0};
  }
  return {OptimumKind::boundary_other, 0};
}

}  // namespace

void SearchConfig::validate() const {
  if (restarts < 1) throw std::domain_error("SearchConfig: restarts must be >= 1");
  if (max_iters < 1) throw std::domain_error("SearchConfig: max_iters must be >= 1");
  if (!(tol_x > 0.0) || !(tol_f > 0.0))
    throw std::domain_error("SearchConfig: tolerances must be > 0");
}

OptimizationResult maximize_H(int n, const SearchConfig& config) {
  if (n < 1) throw std::domain_error("maximize_H: n must be >= 1");
  config.validate();
  const int k = n + 1;

  const auto f_interior = [](const VecD& x) { return -H_at(project_interior(x)); };
  const auto f_face = [](const VecD& y) { return -H_at(face_to_full(y)); };

  struct Candidate {
    VecD p;
    double H = 0.0;
    RestartTrace trace;
  };
  const int runs = 2 * config.restarts;
  std::vector<Candidate> candidates(static_cast<size_t>(runs));

  parallel_for(runs, [&](int r) {
    std::mt19937_64 rng(config.seed + static_cast<std::uint64_t>(r));
    const bool face_run = r >= config.restarts;
    Candidate cand;
    if (face_run) {
      const VecD start = sample_region(k, rng, true);
      VecD y(start.begin(), start.end() - 1);
      cand.trace.start = face_to_full(y);
      const NmOutcome nm = nelder_mead(f_face, y, 0.1, config.max_iters,
                                       config.tol_x, config.tol_f);
      cand.p = face_to_full(nm.x);
      for (double h : nm.history) cand.trace.history.push_back(-h);
    } else {
      const VecD start = sample_region(k, rng, false);
      cand.trace.start = project_interior(start);
      const NmOutcome nm = nelder_mead(f_interior, start, 0.1, config.max_iters,
                                       config.tol_x, config.tol_f);
      cand.p = project_interior(nm.x);
      for (double h : nm.history) cand.trace.history.push_back(-h);
    }
    cand.H = H_at(cand.p);
    cand.trace.restart = r;
    cand.trace.end = cand.p;
    cand.trace.value = cand.H;
    candidates[static_cast<size_t>(r)] = std::move(cand);
  });

  // Ordered reduction: higher H wins; ties go to the lexicographically
  // smallest sorted point so the result is independent of scheduling.
  int best = 0;
  for (int r = 1; r < runs; ++r) {
    const double diff = candidates[r].H - candidates[best].H;
    if (diff > config.tol_f ||
        (diff > -config.tol_f && lex_less(sorted_copy(candidates[r].p),
                                          sorted_copy(candidates[best].p))))
      best = r;
  }

  VecD best_p = candidates[best].p;
  double best_h = candidates[best].H;

  OptimizationResult result;
  for (auto& c : candidates) result.trace.push_back(std::move(c.trace));

  // Polish cascade: restart the simplex at the incumbent with shrinking
  // steps, in both parametrizations, keeping any strict improvement.
  double last_gain = 0.0;
  bool last_converged = true;
  int polish_index = runs;
  for (const double scale : {1e-2, 1e-4, 1e-6}) {
    const double before = best_h;
    bool stage_converged = false;

    const NmOutcome nm_i = nelder_mead(f_interior, best_p, scale,
                                       config.max_iters, config.tol_x,
                                       config.tol_f);
    {
      RestartTrace t;
      t.restart = polish_index++;
      t.start = best_p;
      const VecD p = project_interior(nm_i.x);
      const double h = H_at(p);
      t.end = p;
      t.value = h;
      for (double fh : nm_i.history) t.history.push_back(-fh);
      result.trace.push_back(std::move(t));
      if (h > best_h) {
        best_h = h;
        best_p = p;
      }
      stage_converged = nm_i.converged;
    }
    {
      VecD y(best_p.begin(), best_p.end() - 1);
      const NmOutcome nm_f = nelder_mead(f_face, y, scale, config.max_iters,
                                         config.tol_x, config.tol_f);
      RestartTrace t;
      t.restart = polish_index++;
      t.start = best_p;
      const VecD p = face_to_full(nm_f.x);
      const double h = H_at(p);
      t.end = p;
      t.value = h;
      for (double fh : nm_f.history) t.history.push_back(-fh);
      result.trace.push_back(std::move(t));
      if (h > best_h) {
        best_h = h;
        best_p = p;
      }
      stage_converged = stage_converged || nm_f.converged;
    }
    last_gain = best_h - before;
    last_converged = stage_converged;
  }

  result.best_P = best_p;
  result.best_H = best_h;
  result.converged = last_converged && last_gain <= std::max(config.tol_f, 1e-13);
  result.classification = classify_point(best_p, n);
  return result;
}

PerturbationBasis PerturbationBasis::unconstrained(int n) {
  if (n < 1) throw std::domain_error("PerturbationBasis: n must be >= 1");
  const int k = n + 1;
  PerturbationBasis b;
  b.u.assign(static_cast<size_t>(k), 0.0);
  b.v.assign(static_cast<size_t>(k), 0.0);
  b.u[0] = 1.0;
  b.v[static_cast<size_t>(k) - 1] = 1.0;
  b.constrained = false;
  return b;
}

PerturbationBasis PerturbationBasis::constrained_on_face(int n) {
  // Project the unconstrained pair onto the tangent space of S(P) = 1,
  // whose normal is the all-ones vector.
  PerturbationBasis b = unconstrained(n);
  const double k = n + 1.0;
  for (double& ui : b.u) ui -= 1.0 / k;
  for (double& vi : b.v) vi -= 1.0 / k;
  b.constrained = true;
  return b;
}

LocalMaxReport verify_local_max(const DistributionVector& P, int n,
                                const PerturbationBasis& basis, double eps) {
  if (!(eps > 0.0)) throw std::domain_error("verify_local_max: eps must be > 0");
  if (P.n() != n)
    throw std::invalid_argument("verify_local_max: P has the wrong length");
  if (!in_region(P))
    throw std::invalid_argument("verify_local_max: P is outside the region");
  const int k = n + 1;
  if (static_cast<int>(basis.u.size()) != k ||
      static_cast<int>(basis.v.size()) != k)
    throw std::invalid_argument("verify_local_max: basis has the wrong length");

  LocalMaxReport report;
  const double h0 = bound_values(P).H;
  const int directions = 64;
  report.directions = directions;
  const double two_pi = 6.283185307179586476925286766559;
  for (int t = 0; t < directions; ++t) {
    const double angle = two_pi * t / directions;
    const double ca = std::cos(angle);
    const double sa = std::sin(angle);
    VecD q(static_cast<size_t>(k));
    bool inside = true;
    double s = 0.0;
    for (int i = 0; i < k; ++i) {
      q[static_cast<size_t>(i)] =
          P[i] + eps * (ca * basis.u[static_cast<size_t>(i)] +
                        sa * basis.v[static_cast<size_t>(i)]);
      if (q[static_cast<size_t>(i)] <= 0.0) inside = false;
      s += q[static_cast<size_t>(i)];
    }
    if (!inside || s > 1.0 + 1e-12) {
      ++report.skipped_outside_region;
      continue;
    }
    report.max_improvement =
        std::max(report.max_improvement, H_at(q) - h0);
  }
  report.no_improving_direction = report.max_improvement <= 1e-12;

  const VecD gf = grad_F(P);
  const VecD gg = grad_G(P);
  auto dot = [k](const VecD& a, const VecD& b) {
    double d = 0.0;
    for (int i = 0; i < k; ++i)
      d += a[static_cast<size_t>(i)] * b[static_cast<size_t>(i)];
    return d;
  };
  const double lhs = dot(basis.u, gf) * dot(basis.v, gg);
  const double rhs = dot(basis.v, gf) * dot(basis.u, gg);
  report.cross_residual =
      std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  report.cross_condition_holds = report.cross_residual < 1e-9;
  report.pass = report.no_improving_direction && report.cross_condition_holds;
  return report;
}

SymmetricScanResult scan_symmetric_lossy(int n) {
  if (n < 1) throw std::domain_error("scan_symmetric_lossy: n must be >= 1");
  const auto value = [n](double S) {
    return std::min(F_symmetric(n, S), G_symmetric(n, S));
  };
  // Golden-section maximization; min(F, G) is unimodal along the symmetric
  // family (G rises into the crossing, F falls past it).
  const double inv_phi = 0.61803398874989484820;
  double a = 1e-9;
  double b = 1.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = value(c);
  double fd = value(d);
  for (int iter = 0; iter < 200 && b - a > 1e-14; ++iter) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = value(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = value(d);
    }
  }
  SymmetricScanResult result;
  result.S_star = 0.5 * (a + b);
  result.H_star = value(result.S_star);
  return result;
}

namespace {

/// One Monte-Carlo trial circuit.  Trial 0 is the optimal construction
/// itself; later trials draw from perturbed, reduced-coupling lossy,
/// two-level, and fully random splitter families.
CircuitSpec sample_trial_circuit(int n, int trial, std::mt19937_64& rng) {
  if (trial == 0) return build_optimal(n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int family = static_cast<int>(rng() % 10u);

  if (family == 0) {
    // Near-optimal: nudge the splitting ratio off its stationary value.
    CircuitSpec spec = build_optimal(n);
    std::normal_distribution<double> noise(0.0, 1e-3);
    double t_h = spec.elements[0].t_h + noise(rng);
    t_h = std::min(std::max(t_h, 1e-6), 1.0 - 1e-6);
    spec.elements[0].t_h = t_h;
    spec.elements[0].t_v = 1.0 - t_h;
    spec.label = "perturbed " + spec.label;
    return spec;
  }
  if (family == 1 || family == 2) {
    // Reduced-coupling lossy family: scaling the discarded-arm coupling
    // keeps the expansion exact but lowers the success probability.
    const double cap = 1.0 / (static_cast<double>(n + 1) * (n + 1));
    const double t = std::max(unit(rng) * cap, 1e-12);
    CircuitSpec spec = build_lossy(n);
    spec.elements[1].t_h = t;
    spec.elements[1].t_v = std::min(t / cap, 1.0);
    spec.label = "scaled " + spec.label;
    return spec;
  }
  if (family == 3 || family == 4) {
    const int m = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
    CircuitSpec spec = build_hm(n, m);
    if (rng() & 1u) {
      // Off-crossing variant: same wiring, non-stationary splitting.
      const double xi = std::max(unit(rng) / m, 1e-9);
      spec.elements[0].t_h = std::min(m * xi, 1.0 - 1e-9);
      spec.elements[0].t_v = 1.0 - spec.elements[0].t_h;
      spec.label = "off-crossing " + spec.label;
    }
    return spec;
  }

  // Fully random splitter network over n+1 modes.
  CircuitSpec spec;
  spec.n = n;
  spec.width = n + 1;
  spec.label = "random n=" + std::to_string(n);
  spec.elements.push_back(Element::pdbs(1, 2, unit(rng), unit(rng)));
  for (int kk = 1; kk <= n - 1; ++kk) {
    const int feed = 1 + static_cast<int>(rng() % 2u);
    spec.elements.push_back(Element::bs(feed, kk + 2, unit(rng)));
  }
  if (rng() % 10u < 3u) {
    const int mode = 1 + static_cast<int>(rng() % static_cast<unsigned>(n + 1));
    spec.elements.push_back(Element::loss(mode, unit(rng), unit(rng)));
  }
  if (rng() % 10u < 2u) {
    const int mode = 1 + static_cast<int>(rng() % static_cast<unsigned>(n + 1));
    const double phase = unit(rng) * 6.283185307179586;
    const Polarization pol = (rng() & 1u) ? Polarization::V : Polarization::H;
    spec.elements.push_back(Element::phase_shift(mode, phase, pol));
  }
  for (int j = 1; j <= n + 1; ++j) spec.output_modes.push_back(j);
  return spec;
}

}  // namespace

SweepReport end_to_end_optimality(int n, int trials, std::uint64_t seed,
                                  int N_ref) {
  if (n < 1) throw std::domain_error("end_to_end_optimality: n must be >= 1");
  if (trials < 1)
    throw std::domain_error("end_to_end_optimality: trials must be >= 1");

  SweepReport report;
  report.trials = trials;
  report.N_ref = N_ref;
  report.p_max_reference = P_max_of(n, N_ref);

  struct Outcome {
    bool exact = false;
    double p = 0.0;
  };
  std::vector<Outcome> outcomes(static_cast<size_t>(trials));

  parallel_for(trials, [&](int t) {
    std::mt19937_64 rng(seed ^
                        (static_cast<std::uint64_t>(t) * 0x9E3779B97F4A7C15ull));
    const CircuitSpec spec = sample_trial_circuit(n, t, rng);
    const WExpansionProblem problem(N_ref, n, compile(spec));
    const ExpansionReport r = verify_exact_w(problem);
    outcomes[static_cast<size_t>(t)] = {r.exact_w, r.p_suc};
  });

  for (const Outcome& o : outcomes) {
    if (!o.exact) continue;
    ++report.exact_count;
    report.max_p_suc = std::max(report.max_p_suc, o.p);
    if (o.p > report.p_max_reference + 1e-9) ++report.exceed_count;
  }
  report.pass = report.exceed_count == 0;
  return report;
}

void write_trace_csv(std::ostream& out, const std::vector<RestartTrace>& trace) {
  out << "restart,iteration,H\n";
  for (const RestartTrace& t : trace)
    for (size_t i = 0; i < t.history.size(); ++i)
      out << t.restart << ',' << i << ',' << t.history[i] << '\n';
}

}  // namespace wexpand
