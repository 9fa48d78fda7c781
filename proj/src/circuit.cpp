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

#include "wexpand/circuit.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "wexpand/bounds.hpp"

namespace wexpand {

Element Element::pdbs(int a, int b, double t_h, double t_v) {
  Element e;
  e.kind = Kind::Pdbs;
  e.mode_a = a;
  e.mode_b = b;
  e.t_h = t_h;
  e.t_v = t_v;
  return e;
}

Element Element::bs(int a, int b, double t) {
  Element e;
  e.kind = Kind::Bs;
  e.mode_a = a;
  e.mode_b = b;
  e.t = t;
  return e;
}

Element Element::phase_shift(int a, double phase, std::optional<Polarization> pol) {
  Element e;
  e.kind = Kind::Phase;
  e.mode_a = a;
  e.phase = phase;
  e.pol = pol;
  return e;
}

Element Element::waveplate(int a, const Eigen::Matrix2cd& u) {
  Element e;
  e.kind = Kind::Waveplate;
  e.mode_a = a;
  e.wave = u;
  return e;
}

Element Element::loss(int a, double t_h, double t_v) {
  Element e;
  e.kind = Kind::Loss;
  e.mode_a = a;
  e.t_h = t_h;
  e.t_v = t_v;
  return e;
}

namespace {

bool two_mode(Element::Kind k) {
  return k == Element::Kind::Pdbs || k == Element::Kind::Bs;
}

void require_unit_interval(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
}

}  // namespace

void CircuitSpec::validate() const {
  if (n < 1) throw std::invalid_argument("CircuitSpec: n must be >= 1");
  if (width < 2) throw std::invalid_argument("CircuitSpec: width must be >= 2");
  if (static_cast<int>(output_modes.size()) != n + 1)
    throw std::invalid_argument("CircuitSpec: need exactly n+1 output modes");
  std::set<int> seen;
  for (int m : output_modes) {
    if (m < 1 || m > width)
      throw std::invalid_argument("CircuitSpec: output mode out of range");
    if (!seen.insert(m).second)
      throw std::invalid_argument("CircuitSpec: duplicate output mode");
  }
  for (const Element& e : elements) {
    if (e.mode_a < 1 || e.mode_a > width)
      throw std::invalid_argument("CircuitSpec: element mode out of range");
    if (two_mode(e.kind)) {
      if (e.mode_b < 1 || e.mode_b > width)
        throw std::invalid_argument("CircuitSpec: element mode out of range");
      if (e.mode_b == e.mode_a)
        throw std::invalid_argument("CircuitSpec: element modes must differ");
    }
    switch (e.kind) {
      case Element::Kind::Pdbs:
      case Element::Kind::Loss:
        require_unit_interval(e.t_h, "pdbs/loss t_h");
        require_unit_interval(e.t_v, "pdbs/loss t_v");
        break;
      case Element::Kind::Bs:
        require_unit_interval(e.t, "bs t");
        break;
      case Element::Kind::Phase:
        if (!std::isfinite(e.phase))
          throw std::invalid_argument("CircuitSpec: phase must be finite");
        break;
      case Element::Kind::Waveplate: {
        const Eigen::Matrix2cd err =
            e.wave.adjoint() * e.wave - Eigen::Matrix2cd::Identity();
        if (err.cwiseAbs().maxCoeff() > 1e-12)
          throw std::invalid_argument("CircuitSpec: waveplate block is not unitary");
        break;
      }
    }
  }
}

CompiledCircuit CompiledCircuit::from_unitary(ModeUnitary u,
                                              std::vector<int> output_modes,
                                              int n) {
  if (n < 1) throw std::invalid_argument("CompiledCircuit: n must be >= 1");
  if (u.dim() % 2 != 0)
    throw std::invalid_argument("CompiledCircuit: dimension must be even");
  const int spatial = u.dim() / 2;
  if (static_cast<int>(output_modes.size()) != n + 1)
    throw std::invalid_argument("CompiledCircuit: need exactly n+1 output modes");
  for (int m : output_modes)
    if (m < 1 || m > spatial)
      throw std::invalid_argument("CompiledCircuit: output mode out of range");
  CompiledCircuit c{std::move(u), spatial, std::move(output_modes), n};
  return c;
}

namespace {

int flat_h(int spatial) { return 2 * (spatial - 1); }
int flat_v(int spatial) { return 2 * (spatial - 1) + 1; }

/// Writes the 2x2 rotation with cos = sqrt(t_keep) onto the (a, b) rails of
/// one polarization; `counter` flips the rotation direction.
void put_rotation(Eigen::MatrixXcd& g, int fa, int fb, double t_keep, bool counter) {
  const double c = std::sqrt(t_keep);
  const double s = std::sqrt(1.0 - t_keep);
  g(fa, fa) = c;
  g(fb, fb) = c;
  if (counter) {
    g(fa, fb) = -s;
    g(fb, fa) = s;
  } else {
    g(fa, fb) = s;
    g(fb, fa) = -s;
  }
}

Eigen::MatrixXcd element_matrix(const Element& e, int dim, int aux_spatial) {
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(dim, dim);
  switch (e.kind) {
    case Element::Kind::Bs:
      // t = 1 is a pass-through; the crossing carries sqrt(1-t).
      put_rotation(g, flat_h(e.mode_a), flat_h(e.mode_b), e.t, false);
      put_rotation(g, flat_v(e.mode_a), flat_v(e.mode_b), e.t, false);
      break;
    case Element::Kind::Pdbs:
      // Transmittance labels the crossing; 1 - t stays on its own rail.
      put_rotation(g, flat_h(e.mode_a), flat_h(e.mode_b), 1.0 - e.t_h, false);
      put_rotation(g, flat_v(e.mode_a), flat_v(e.mode_b), 1.0 - e.t_v, true);
      break;
    case Element::Kind::Phase: {
      const Complex ph = std::polar(1.0, e.phase);
      if (!e.pol || *e.pol == Polarization::H) g(flat_h(e.mode_a), flat_h(e.mode_a)) = ph;
      if (!e.pol || *e.pol == Polarization::V) g(flat_v(e.mode_a), flat_v(e.mode_a)) = ph;
      break;
    }
    case Element::Kind::Waveplate: {
      const int fh = flat_h(e.mode_a);
      const int fv = flat_v(e.mode_a);
      g(fh, fh) = e.wave(0, 0);
      g(fh, fv) = e.wave(0, 1);
      g(fv, fh) = e.wave(1, 0);
      g(fv, fv) = e.wave(1, 1);
      break;
    }
    case Element::Kind::Loss:
      // Survival t stays on the mode; the rest couples into the aux rail.
      put_rotation(g, flat_h(e.mode_a), flat_h(aux_spatial), e.t_h, false);
      put_rotation(g, flat_v(e.mode_a), flat_v(aux_spatial), e.t_v, false);
      break;
  }
  return g;
}

}  // namespace

CompiledCircuit compile(const CircuitSpec& spec) {
  spec.validate();
  int losses = 0;
  for (const Element& e : spec.elements)
    if (e.kind == Element::Kind::Loss) ++losses;
  const int spatial = spec.width + losses;
  const int dim = 2 * spatial;

  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim);
  int next_aux = spec.width + 1;
  for (const Element& e : spec.elements) {
    const int aux = (e.kind == Element::Kind::Loss) ? next_aux++ : 0;
    m = element_matrix(e, dim, aux) * m;
  }

  ModeUnitary u(std::move(m));
  if (!check_unitary(u, 1e-12).empty())
    throw std::logic_error("compile: product lost unitarity");
  CompiledCircuit c{std::move(u), spatial, spec.output_modes, spec.n};
  return c;
}

Coefficients extract_coefficients(const CompiledCircuit& circuit) {
  Coefficients c;
  c.beta = circuit.unitary.matrix().col(flat_h(1));
  c.gamma = circuit.unitary.matrix().col(flat_v(1));
  c.alpha = circuit.unitary.matrix().col(flat_h(2));
  c.output_modes = circuit.output_modes;
  return c;
}

CircuitSpec build_optimal(int n) { return build_hm(n, 1); }

CircuitSpec build_hm(int n, int m) {
  if (n < 1) throw std::domain_error("build_hm: n must be >= 1");
  if (m < 1 || m > n) throw std::domain_error("build_hm: m must satisfy 1 <= m <= n");
  const double xi = xi_m(n, m);

  CircuitSpec spec;
  spec.n = n;
  spec.width = n + 1;
  spec.label = (m == 1) ? "optimal n=" + std::to_string(n)
                        : "hm n=" + std::to_string(n) + " m=" + std::to_string(m);
  spec.elements.push_back(Element::pdbs(1, 2, m * xi, 1.0 - m * xi));
  // Chain off mode 1: peel 1/m, 1/(m-1), ... so each of the m arms ends up
  // with an equal share.  Mode 1 keeps the final arm.
  for (int k = 1; k <= m - 1; ++k)
    spec.elements.push_back(
        Element::bs(1, k + 2, static_cast<double>(m - k) / (m + 1 - k)));
  // Chain off mode 2: the remaining n+1-m arms, equally.
  for (int k = m; k <= n - 1; ++k)
    spec.elements.push_back(
        Element::bs(2, k + 2, static_cast<double>(n - k) / (n + 1 - k)));
  for (int j = 1; j <= n + 1; ++j) spec.output_modes.push_back(j);
  return spec;
}

CircuitSpec build_lossy(int n) {
  if (n < 1) throw std::domain_error("build_lossy: n must be >= 1");
  const double k = n + 1.0;

  CircuitSpec spec;
  spec.n = n;
  spec.width = n + 2;
  spec.label = "lossy n=" + std::to_string(n);
  // The V phase flip keeps the flipped-photon amplitudes in phase with the
  // retained-arm amplitudes once the splitter arm on mode 1 is discarded.
  spec.elements.push_back(
      Element::phase_shift(1, std::numbers::pi, Polarization::V));
  spec.elements.push_back(Element::pdbs(1, 2, 1.0 / (k * k), 1.0));
  for (int kk = 1; kk <= n; ++kk)
    spec.elements.push_back(
        Element::bs(2, kk + 2, (k - kk) / (k + 1.0 - kk)));
  for (int j = 2; j <= n + 2; ++j) spec.output_modes.push_back(j);
  return spec;
}

}  // namespace wexpand
