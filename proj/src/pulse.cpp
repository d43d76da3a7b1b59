// Copyright 2026 The csbench authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "csbench/pulse.hpp"

#include <cmath>
#include <stdexcept>

namespace csbench {

namespace {

Eigen::Matrix4cd pauli2(int hi, int lo) {
  return kron(pauli(hi), pauli(lo));
}

const Eigen::Matrix4cd &zi_op() { static const auto m = pauli2(3, 0); return m; }
const Eigen::Matrix4cd &zx_op() { static const auto m = pauli2(3, 1); return m; }
const Eigen::Matrix4cd &zy_op() { static const auto m = pauli2(3, 2); return m; }
const Eigen::Matrix4cd &zz_op() { static const auto m = pauli2(3, 3); return m; }
const Eigen::Matrix4cd &ix_op() { static const auto m = pauli2(0, 1); return m; }
const Eigen::Matrix4cd &iy_op() { static const auto m = pauli2(0, 2); return m; }
const Eigen::Matrix4cd &iz_op() { static const auto m = pauli2(0, 3); return m; }

// Integral of exp(-k (t - tau_edge)^2 / (2 sigma^2)) over [0, tau_edge].
double gaussian_power_area(double tau_edge, double sigma, double k) {
  return sigma * std::sqrt(kPi / (2.0 * k)) *
         std::erf(std::sqrt(k / 2.0) * tau_edge / sigma);
}

}  // namespace

CRRates CRModel::rates(double a, double phi, double comp_a,
                       double comp_phi) const {
  CRRates r;
  const double beta = phi + theta0;
  const double gz = g_z(a);
  r.zx = gz * std::cos(beta);
  r.zy = gz * std::sin(beta);
  r.zi = zi_quadratic * a * a;
  r.zz = static_zz;
  r.iz = static_iz;
  const double gi = g_i(a);
  const double beta_local = beta + crosstalk_phase;
  r.ix = gi * std::cos(beta_local);
  r.iy = gi * std::sin(beta_local);
  if (comp_a != 0.0) {
    const double wc = target_drive_rate * comp_a;
    r.ix += wc * std::cos(comp_phi);
    r.iy += wc * std::sin(comp_phi);
  }
  return r;
}

Eigen::Matrix4cd CRModel::hamiltonian(double a, double phi, double comp_a,
                                      double comp_phi) const {
  const CRRates r = rates(a, phi, comp_a, comp_phi);
  Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
  h += 0.5 * r.zi * zi_op();
  h += 0.5 * r.zx * zx_op();
  h += 0.5 * r.zy * zy_op();
  h += 0.5 * r.zz * zz_op();
  h += 0.5 * r.ix * ix_op();
  h += 0.5 * r.iy * iy_op();
  h += 0.5 * r.iz * iz_op();
  return h;
}

void PulseShape::validate() const {
  if (tau_sq < 0.0) throw std::invalid_argument("PulseShape: tau_sq < 0");
  if (tau_edge <= 0.0) throw std::invalid_argument("PulseShape: tau_edge <= 0");
  if (sigma <= 0.0) throw std::invalid_argument("PulseShape: sigma <= 0");
}

double PulseShape::envelope(double t) const {
  const double cut = std::exp(-tau_edge * tau_edge / (2.0 * sigma * sigma));
  auto lifted = [&](double u) {
    // u: time before the edge peak; u = 0 at full amplitude.
    const double g = std::exp(-u * u / (2.0 * sigma * sigma));
    return (g - cut) / (1.0 - cut);
  };
  if (t <= 0.0 || t >= duration()) return 0.0;
  if (t < tau_edge) return lifted(tau_edge - t);
  if (t <= tau_edge + tau_sq) return 1.0;
  return lifted(t - tau_edge - tau_sq);
}

double PulseShape::effective_area() const {
  const double cut = std::exp(-tau_edge * tau_edge / (2.0 * sigma * sigma));
  const double edge =
      (gaussian_power_area(tau_edge, sigma, 1.0) - cut * tau_edge) /
      (1.0 - cut);
  return tau_sq + 2.0 * edge;
}

double PulseShape::cubed_area() const {
  const double c = std::exp(-tau_edge * tau_edge / (2.0 * sigma * sigma));
  const double i1 = gaussian_power_area(tau_edge, sigma, 1.0);
  const double i2 = gaussian_power_area(tau_edge, sigma, 2.0);
  const double i3 = gaussian_power_area(tau_edge, sigma, 3.0);
  const double num =
      i3 - 3.0 * c * i2 + 3.0 * c * c * i1 - c * c * c * tau_edge;
  const double edge = num / ((1.0 - c) * (1.0 - c) * (1.0 - c));
  return tau_sq + 2.0 * edge;
}

Eigen::Matrix4cd evolve_pulse(const CRModel &model, const PulseShape &shape,
                              double amplitude, double phi,
                              const std::optional<CompTone> &comp,
                              int edge_slices) {
  shape.validate();
  if (edge_slices < 1) throw std::invalid_argument("evolve_pulse: edge_slices < 1");

  const double sign = amplitude < 0.0 ? -1.0 : 1.0;
  const double comp_a = comp ? comp->amplitude : 0.0;
  const double comp_phi = comp ? comp->phase : 0.0;

  auto hamiltonian_at = [&](double t) -> Eigen::Matrix4cd {
    const double env = shape.envelope(t);
    return model.hamiltonian(amplitude * env, phi, sign * comp_a * env,
                             comp_phi);
  };

  // Fourth-order Magnus propagator over one slice, sampling the Hamiltonian
  // at the two Gauss-Legendre nodes:
  //   U = exp(-i K),  K = dt/2 (H1 + H2) - i sqrt(3) dt^2 / 12 [H2, H1].
  auto segment = [&](double t0, double dt) -> Eigen::Matrix4cd {
    const double half_gap = dt * std::sqrt(3.0) / 6.0;
    const double t_mid = t0 + 0.5 * dt;
    const Eigen::Matrix4cd h1 = hamiltonian_at(t_mid - half_gap);
    const Eigen::Matrix4cd h2 = hamiltonian_at(t_mid + half_gap);
    const Eigen::Matrix4cd k =
        0.5 * dt * (h1 + h2) +
        complex_t(0, -1) * (std::sqrt(3.0) * dt * dt / 12.0) *
            (h2 * h1 - h1 * h2);
    return expi_hermitian(k, 1.0);
  };

  Eigen::Matrix4cd u = Eigen::Matrix4cd::Identity();
  const double dt_edge = shape.tau_edge / edge_slices;
  // Rising edge.
  for (int i = 0; i < edge_slices; ++i) {
    u = segment(i * dt_edge, dt_edge) * u;
  }
  // Flat top: the Hamiltonian is constant, one exact segment suffices.
  if (shape.tau_sq > 0.0) {
    const Eigen::Matrix4cd h =
        hamiltonian_at(shape.tau_edge + 0.5 * shape.tau_sq);
    u = expi_hermitian(h, shape.tau_sq) * u;
  }
  // Falling edge.
  const double t0 = shape.tau_edge + shape.tau_sq;
  for (int i = 0; i < edge_slices; ++i) {
    u = segment(t0 + i * dt_edge, dt_edge) * u;
  }
  return u;
}

Eigen::Matrix4cd two_qubit_rotation(const Eigen::Matrix2cd &b,
                                    const Eigen::Matrix2cd &c, double theta) {
  return expi_hermitian(0.5 * kron(b, c), theta);
}

Eigen::Matrix4cd echoed_cr(const CRModel &model, const PulseShape &shape,
                           double amplitude, double phi,
                           const std::optional<CompTone> &comp,
                           int edge_slices) {
  const Eigen::Matrix4cd xi = two_qubit_rotation(pauli(1), pauli(0), kPi);
  const Eigen::Matrix4cd first =
      evolve_pulse(model, shape, amplitude, phi, comp, edge_slices);
  const Eigen::Matrix4cd second =
      evolve_pulse(model, shape, -amplitude, phi, comp, edge_slices);
  return xi * second * xi * first;
}

Eigen::Matrix4cd cs_schedule(const CRModel &model, const PulseShape &shape,
                             double amplitude, double phi,
                             const std::optional<CompTone> &comp, bool inverse,
                             int edge_slices) {
  const double sgn = inverse ? -1.0 : 1.0;
  // [ZX]_{-pi/4} needs the echo axis at azimuth pi relative to the
  // calibrated axis, i.e. the pulse phase advanced by pi; the adjoint gate
  // needs the +pi/4 echo, i.e. the calibrated phase itself.
  const double echo_phi = inverse ? phi : phi + kPi;
  // The compensation tone is gated with the drive and keeps a fixed phase
  // relative to it: the crosstalk it cancels rotates with the drive phase, so
  // when the echo axis advances by pi the tone must advance with it.
  std::optional<CompTone> gate_comp = comp;
  if (gate_comp && !inverse) gate_comp->phase += kPi;
  Eigen::Matrix2cd h2;
  h2 << 1, 1, 1, -1;
  h2 /= std::sqrt(2.0);
  const Eigen::Matrix4cd ih = kron(Eigen::Matrix2cd::Identity(), h2);
  const Eigen::Matrix4cd ix4 =
      two_qubit_rotation(pauli(0), pauli(1), sgn * kPi / 4.0);
  const Eigen::Matrix4cd zi4 =
      two_qubit_rotation(pauli(3), pauli(0), sgn * kPi / 4.0);
  const Eigen::Matrix4cd echo =
      echoed_cr(model, shape, amplitude, echo_phi, gate_comp, edge_slices);
  return ih * ix4 * zi4 * echo * ih;
}

}  // namespace csbench
