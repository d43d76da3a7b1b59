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

#include "doctest.h"
#include "csbench/linalg.hpp"

namespace csbench {
namespace {

Eigen::Matrix4cd cs_target() {
  Eigen::Matrix4cd cs = Eigen::Matrix4cd::Identity();
  cs(3, 3) = complex_t(0, 1);
  return cs;
}

// Composite Simpson integration used as an independent check of the
// closed-form envelope areas.
template <typename F>
double simpson(F f, double a, double b, int intervals) {
  double sum = f(a) + f(b);
  const double h = (b - a) / intervals;
  for (int i = 1; i < intervals; ++i) {
    sum += f(a + i * h) * (i % 2 == 0 ? 2.0 : 4.0);
  }
  return sum * h / 3.0;
}

TEST_CASE("hamiltonian assembles the rate terms on the expected paulis") {
  CRModel model;
  model.gz_linear = 2.0e6;
  model.gz_cubic = -0.3e6;
  model.gi_linear = 0.5e6;
  model.gi_cubic = 0.1e6;
  model.zi_quadratic = 1.5e6;
  model.static_zz = 0.2e6;
  model.static_iz = -0.1e6;
  model.theta0 = 0.35;
  model.crosstalk_phase = -0.7;
  model.target_drive_rate = 40.0e6;

  const double a = 0.6, phi = 0.2, ca = 0.003, cphi = -1.1;
  const CRRates r = model.rates(a, phi, ca, cphi);
  Eigen::Matrix4cd expected = Eigen::Matrix4cd::Zero();
  expected += 0.5 * r.zi * kron(pauli(3), pauli(0));
  expected += 0.5 * r.zx * kron(pauli(3), pauli(1));
  expected += 0.5 * r.zy * kron(pauli(3), pauli(2));
  expected += 0.5 * r.zz * kron(pauli(3), pauli(3));
  expected += 0.5 * r.ix * kron(pauli(0), pauli(1));
  expected += 0.5 * r.iy * kron(pauli(0), pauli(2));
  expected += 0.5 * r.iz * kron(pauli(0), pauli(3));

  const Eigen::Matrix4cd h = model.hamiltonian(a, phi, ca, cphi);
  CHECK(max_abs_diff(h, expected) < 1e-12);
  CHECK(max_abs_diff(h, h.adjoint()) < 1e-12);

  // The controlled rates carry the drive azimuth phi + theta0, the local
  // ones an extra crosstalk offset.
  const double beta = phi + model.theta0;
  CHECK(r.zx == doctest::Approx(model.g_z(a) * std::cos(beta)).epsilon(1e-12));
  CHECK(r.zy == doctest::Approx(model.g_z(a) * std::sin(beta)).epsilon(1e-12));
  const double beta_local = beta + model.crosstalk_phase;
  const double gi = model.g_i(a);
  const double wc = model.target_drive_rate * ca;
  CHECK(r.ix == doctest::Approx(gi * std::cos(beta_local) +
                                wc * std::cos(cphi)).epsilon(1e-12));
  CHECK(r.iy == doctest::Approx(gi * std::sin(beta_local) +
                                wc * std::sin(cphi)).epsilon(1e-12));
}

TEST_CASE("rate parities: controlled and local terms odd, stark term even") {
  CRModel model;
  model.gz_linear = 3.0e6;
  model.gz_cubic = -0.4e6;
  model.gi_linear = 0.6e6;
  model.gi_cubic = 0.2e6;
  model.zi_quadratic = 2.0e6;
  model.theta0 = 0.0;

  for (double a : {0.1, 0.25, 0.7}) {
    const CRRates plus = model.rates(a, 0.0);
    const CRRates minus = model.rates(-a, 0.0);
    CHECK(minus.zx == doctest::Approx(-plus.zx).epsilon(1e-12));
    CHECK(minus.ix == doctest::Approx(-plus.ix).epsilon(1e-12));
    CHECK(minus.zi == doctest::Approx(plus.zi).epsilon(1e-12));
  }
}

TEST_CASE("zero model evolves to the identity") {
  CRModel model;
  PulseShape shape;
  shape.tau_sq = 50e-9;
  const Eigen::Matrix4cd u = evolve_pulse(model, shape, 0.8, 1.3);
  CHECK(max_abs_diff(u, Eigen::Matrix4cd::Identity()) < 1e-12);
}

TEST_CASE("near-square pulse with zx area pi/4 gives the quarter rotation") {
  PulseShape shape;
  shape.tau_sq = 100e-9;
  shape.tau_edge = 1e-12;
  shape.sigma = 2e-12;

  CRModel model;
  model.gz_linear = (kPi / 4.0) / shape.effective_area();

  const Eigen::Matrix4cd u = evolve_pulse(model, shape, 1.0, 0.0);
  const Eigen::Matrix4cd expected =
      two_qubit_rotation(pauli(3), pauli(1), kPi / 4.0);
  CHECK(max_abs_diff(u, expected) < 1e-10);
}

TEST_CASE("commuting model matches the closed form for a shaped envelope") {
  PulseShape shape;
  shape.tau_sq = 40e-9;

  CRModel model;
  model.gz_linear = 6.0e6;
  model.gi_linear = 1.5e6;

  const double a = 0.45;
  const double area = shape.effective_area();
  // All active terms (ZX, IX) commute, so the propagator only sees the
  // integrated envelope.
  const Eigen::Matrix4cd h_eff =
      0.5 * model.gz_linear * a * kron(pauli(3), pauli(1)) +
      0.5 * model.gi_linear * a * kron(pauli(0), pauli(1));
  const Eigen::Matrix4cd expected = expi_hermitian(h_eff, area);
  const Eigen::Matrix4cd u = evolve_pulse(model, shape, a, 0.0);
  CHECK(max_abs_diff(u, expected) < 1e-9);
  CHECK(is_unitary(u, 1e-10));
}

TEST_CASE("echo cancels even and local terms, leaving a pure zx rotation") {
  PulseShape shape;
  shape.tau_sq = 21.3e-9;

  CRModel model;
  model.gz_linear = 5.0e6;
  model.gz_cubic = -0.8e6;
  model.gi_linear = 0.9e6;
  model.gi_cubic = 0.3e6;
  model.zi_quadratic = 4.0e6;
  model.theta0 = 0.4;

  // Drive phase on the calibrated axis: azimuth phi + theta0 = 0 turns off
  // the ZY and IY components, so the echo output must commute with ZX.
  const double phi = -model.theta0;
  const Eigen::Matrix4cd echo = echoed_cr(model, shape, 0.3, phi);
  const Eigen::Matrix4cd zx = kron(pauli(3), pauli(1));
  CHECK(max_abs_diff(echo * zx, zx * echo) < 1e-8);
  CHECK(is_unitary(echo, 1e-10));

  // The local (IX) and stark (ZI) content cancels between the two halves:
  // compare against the same model without them.
  CRModel bare = model;
  bare.gi_linear = bare.gi_cubic = bare.zi_quadratic = 0.0;
  const Eigen::Matrix4cd echo_bare = echoed_cr(bare, shape, 0.3, phi);
  CHECK(phase_aligned_distance(echo, echo_bare) < 1e-3);
}

TEST_CASE("slice doubling converges below 1e-8") {
  PulseShape shape;
  shape.tau_sq = 21.3e-9;

  CRModel model;
  model.gz_linear = 2 * kPi * 5.2e6;
  model.gz_cubic = -2 * kPi * 0.9e6;
  model.gi_linear = 2 * kPi * 0.66e6;
  model.gi_cubic = 2 * kPi * 1.4e6;
  model.zi_quadratic = 2 * kPi * 3.0e6;
  model.static_zz = 2 * kPi * 20e3;
  model.theta0 = 0.4;
  model.crosstalk_phase = -0.962;
  model.target_drive_rate = 2 * kPi * 320e6;

  CompTone comp;
  comp.amplitude = 0.001;
  comp.phase = -0.962;

  const Eigen::Matrix4cd u48 = evolve_pulse(model, shape, 0.4, 0.3, comp, 48);
  const Eigen::Matrix4cd u96 = evolve_pulse(model, shape, 0.4, 0.3, comp, 96);
  const Eigen::Matrix4cd u192 =
      evolve_pulse(model, shape, 0.4, 0.3, comp, 192);
  const double d1 = max_abs_diff(u48, u96);
  const double d2 = max_abs_diff(u96, u192);
  CHECK(d1 < 1e-8);
  CHECK(d2 < d1);
}

TEST_CASE("exact schedule algebra: locals times zx(-pi/4) equals cs") {
  Eigen::Matrix2cd h2;
  h2 << 1, 1, 1, -1;
  h2 /= std::sqrt(2.0);
  const Eigen::Matrix4cd ih = kron(Eigen::Matrix2cd::Identity(), h2);
  const Eigen::Matrix4cd u = ih *
                             two_qubit_rotation(pauli(0), pauli(1), kPi / 4) *
                             two_qubit_rotation(pauli(3), pauli(0), kPi / 4) *
                             two_qubit_rotation(pauli(3), pauli(1), -kPi / 4) *
                             ih;
  CHECK(phase_aligned_distance(u, cs_target()) < 1e-12);
}

TEST_CASE("calibrated pulse schedule realizes cs and its inverse") {
  PulseShape shape;
  shape.tau_sq = 21.3e-9;

  CRModel model;
  model.gz_linear = 2 * kPi * 5.1652e6;
  model.theta0 = 0.4;

  // Linear model: the echoed angle is 2 g_z(A) * area, so the pi/4 point
  // has a closed-form amplitude.  The calibrated phase zeroes the azimuth.
  const double a =
      (kPi / 4.0) / (2.0 * model.gz_linear * shape.effective_area());
  const double phi = -model.theta0;

  const Eigen::Matrix4cd cs = cs_schedule(model, shape, a, phi);
  CHECK(phase_aligned_distance(cs, cs_target()) < 1e-8);

  const Eigen::Matrix4cd cs_inv =
      cs_schedule(model, shape, a, phi, {}, /*inverse=*/true);
  CHECK(phase_aligned_distance(cs_inv * cs, Eigen::Matrix4cd::Identity()) <
        1e-8);

  // CS . CS = CZ.
  Eigen::Matrix4cd cz = Eigen::Matrix4cd::Identity();
  cz(3, 3) = -1.0;
  CHECK(phase_aligned_distance(cs * cs, cz) < 1e-8);
}

TEST_CASE("matched compensation tone cancels linear local terms exactly") {
  PulseShape shape;
  shape.tau_sq = 30e-9;

  CRModel model;
  model.gz_linear = 2 * kPi * 5.0e6;
  model.gi_linear = 2 * kPi * 0.7e6;
  model.theta0 = 0.25;
  model.crosstalk_phase = 0.7;
  model.target_drive_rate = 2 * kPi * 300e6;

  const double a = 0.35, phi = 0.1;
  CompTone comp;
  comp.amplitude = model.g_i(a) / model.target_drive_rate;
  comp.phase = phi + model.theta0 + model.crosstalk_phase + kPi;

  CRModel bare = model;
  bare.gi_linear = 0.0;

  // Both envelopes scale together, so the cancellation holds pointwise in
  // time, for either sign of the echoed pair.
  for (double amp : {a, -a}) {
    const Eigen::Matrix4cd with_comp =
        evolve_pulse(model, shape, amp, phi, comp);
    const Eigen::Matrix4cd without_local =
        evolve_pulse(bare, shape, amp, phi);
    CHECK(max_abs_diff(with_comp, without_local) < 1e-9);
  }
}

TEST_CASE("envelope areas match direct numerical integration") {
  for (double tau_sq : {0.0, 21.3e-9, 355.6e-9}) {
    PulseShape shape;
    shape.tau_sq = tau_sq;
    const double area = simpson(
        [&](double t) { return shape.envelope(t); }, 0.0, shape.duration(),
        20000);
    const double cubed = simpson(
        [&](double t) {
          const double e = shape.envelope(t);
          return e * e * e;
        },
        0.0, shape.duration(), 20000);
    CHECK(shape.effective_area() == doctest::Approx(area).epsilon(1e-7));
    CHECK(shape.cubed_area() == doctest::Approx(cubed).epsilon(1e-7));
  }
}

TEST_CASE("schedule timing identities") {
  ScheduleTiming timing;
  PulseShape shape;
  shape.tau_sq = 0.0;
  CHECK(timing.cr_time(shape) == doctest::Approx(56.32e-9).epsilon(1e-12));
  CHECK(timing.cs_time(shape) == doctest::Approx(219.34e-9).epsilon(1e-12));
  shape.tau_sq = 355.6e-9;
  CHECK(timing.cs_time(shape) == doctest::Approx(930.54e-9).epsilon(1e-12));
  shape.tau_sq = 21.3e-9;
  CHECK(timing.cs_time(shape) == doctest::Approx(261.94e-9).epsilon(1e-12));
}

TEST_CASE("invalid shapes and slice counts are rejected") {
  PulseShape bad;
  bad.tau_sq = -1e-9;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.tau_sq = 0.0;
  bad.tau_edge = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  PulseShape ok;
  CRModel model;
  CHECK_THROWS_AS(evolve_pulse(model, ok, 0.1, 0.0, {}, 0),
                  std::invalid_argument);
}

}  // namespace
}  // namespace csbench
