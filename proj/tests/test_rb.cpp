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

#include "csbench/rb.hpp"

#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"

#include "csbench/channels.hpp"
#include "csbench/device.hpp"
#include "csbench/group.hpp"
#include "csbench/linalg.hpp"
#include "support/paths.hpp"

namespace {

using namespace csbench;

DihedralElement cs_element() {
  return DihedralElement::from_gates(2, {GateOp::cs(0, 1)});
}

Eigen::Matrix4cd cs_matrix() {
  Eigen::Matrix4cd u = Eigen::Matrix4cd::Identity();
  u(3, 3) = std::complex<double>(0.0, 1.0);
  return u;
}

QuantumChannel zx_rotation(double angle) {
  const Eigen::MatrixXcd zx = pauli_string(2, 4 * 3 + 1);
  return QuantumChannel::from_unitary(expi_hermitian(zx, 0.5 * angle));
}

}  // namespace

TEST_CASE("analysis helpers match their closed forms") {
  CHECK(combined_alpha(2, 0.99, 0.96) == doctest::Approx((0.99 + 4 * 0.96) / 5.0));
  CHECK(combined_alpha(1, 0.9, 0.8) == doctest::Approx((0.9 + 2 * 0.8) / 3.0));
  CHECK(element_error(2, 1.0) == doctest::Approx(0.0));
  CHECK(element_error(2, 0.978) == doctest::Approx(0.75 * 0.022));
  CHECK(element_error(1, 0.9) == doctest::Approx(0.05));

  // Both bound branches evaluated by hand at d = 4.
  const double alpha = 0.978;
  const double ratio = 0.973 / 0.978;
  const double first = 0.75 * (std::abs(ratio - alpha) + (1.0 - alpha));
  const double second = 2.0 * 15.0 * (1.0 - alpha) / (alpha * 16.0) +
                        4.0 * std::sqrt(1.0 - alpha) * std::sqrt(15.0) / alpha;
  CHECK(interleaved_epsilon(2, alpha, ratio) ==
        doctest::Approx(std::min(first, second)).epsilon(1e-12));
  CHECK(interleaved_epsilon(2, 1.0, 1.0) == doctest::Approx(0.0));
  // No NaN when a fit lands slightly above one.
  CHECK(std::isfinite(interleaved_epsilon(2, 1.0 + 1e-7, 1.0)));
}

TEST_CASE("noiseless sequences survive exactly for every arm") {
  ChannelBackend backend(QuantumChannel::identity(2),
                         QuantumChannel::identity(2), cs_element(),
                         ReadoutModel::ideal(2));
  RBConfig cfg;
  cfg.shots = 0;
  cfg.samples = 4;
  const InterleavedRBResult r = run_interleaved_rb(backend, cfg, 5);

  for (const RBArm *arm :
       {&r.reference.computational, &r.reference.superposition,
        &r.interleaved.computational, &r.interleaved.superposition}) {
    CHECK_FALSE(arm->fitted);
    CHECK(arm->alpha == 1.0);
    for (const auto &row : arm->samples)
      for (double s : row) CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(r.reference.alpha == 1.0);
  CHECK(r.gate_error == 0.0);
  CHECK(r.epsilon == doctest::Approx(0.0));
  CHECK(r.ordering_ok);
}

TEST_CASE("exact depolarizing decay is recovered to numerical precision") {
  const double astar = 0.95;
  ChannelBackend backend(QuantumChannel::depolarizing(2, astar),
                         QuantumChannel::identity(2), cs_element(),
                         ReadoutModel::ideal(2));
  RBConfig cfg;
  cfg.shots = 0;
  const RBResult r = run_rb(backend, cfg, 7);

  CHECK(r.computational.fitted);
  CHECK(r.superposition.fitted);
  CHECK(r.alpha == doctest::Approx(astar).epsilon(1e-9));
  CHECK(r.error_per_element == doctest::Approx(element_error(2, astar)).epsilon(1e-9));
  // The closing inverse is noisy too, so length m accumulates m + 1 noise
  // applications: the fitted amplitude absorbs one extra decay factor.
  CHECK(r.computational.amplitude == doctest::Approx(0.75 * astar).epsilon(1e-6));
  CHECK(r.computational.offset == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("interleaving the identity squares the decay rate") {
  const double astar = 0.97;
  ChannelBackend backend(QuantumChannel::depolarizing(2, astar),
                         QuantumChannel::depolarizing(2, astar),
                         DihedralElement::identity(2), ReadoutModel::ideal(2));
  RBConfig cfg;
  cfg.shots = 0;
  const InterleavedRBResult r = run_interleaved_rb(backend, cfg, 9);

  CHECK(r.reference.alpha == doctest::Approx(astar).epsilon(1e-9));
  CHECK(r.interleaved.alpha == doctest::Approx(astar * astar).epsilon(1e-9));
  CHECK(r.alpha_ratio == doctest::Approx(astar).epsilon(1e-9));
  CHECK(r.gate_error == doctest::Approx(element_error(2, astar)).epsilon(1e-9));
  CHECK(r.ordering_ok);
}

TEST_CASE("phase errors are invisible to the computational arm alone") {
  // A diagonal phase rotation never changes computational-basis
  // populations, because every group element permutes basis states.  Only
  // the superposition arm can expose it.
  Eigen::Matrix4cd u = Eigen::Matrix4cd::Identity();
  u(1, 1) = std::exp(std::complex<double>(0.0, 0.35));
  u(3, 3) = std::exp(std::complex<double>(0.0, 0.35));
  ChannelBackend backend(QuantumChannel::from_unitary(u),
                         QuantumChannel::identity(2), cs_element(),
                         ReadoutModel::ideal(2));
  RBConfig cfg;
  cfg.shots = 0;
  const RBResult r = run_rb(backend, cfg, 13);

  CHECK_FALSE(r.computational.fitted);
  CHECK(r.computational.alpha == 1.0);
  CHECK(r.superposition.fitted);
  CHECK(r.superposition.alpha < 0.999);
  CHECK(r.alpha ==
        doctest::Approx(combined_alpha(2, 1.0, r.superposition.alpha)));
}

TEST_CASE("bound interval covers the true gate error across random models") {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> elem_alpha(0.955, 0.995);
  std::uniform_real_distribution<double> gate_alpha(0.93, 0.995);
  std::uniform_real_distribution<double> tilt(-0.12, 0.12);

  const Eigen::Matrix4cd ideal = cs_matrix();
  const int trials = 20;
  int covered = 0;
  for (int t = 0; t < trials; ++t) {
    const QuantumChannel elem_noise =
        QuantumChannel::depolarizing(2, elem_alpha(rng));
    const QuantumChannel gate_noise =
        QuantumChannel::depolarizing(2, gate_alpha(rng))
            .compose(zx_rotation(tilt(rng)));
    ChannelBackend backend(elem_noise, gate_noise, cs_element(),
                           ReadoutModel::ideal(2));

    RBConfig cfg;  // sampled at the default shot count
    const InterleavedRBResult r =
        run_interleaved_rb(backend, cfg, 40 + uint64_t(t));
    const double truth = average_gate_error(
        gate_noise.compose(QuantumChannel::from_unitary(ideal)), ideal);
    if (truth >= r.interval_low - 1e-12 && truth <= r.interval_high + 1e-12)
      ++covered;
  }
  CHECK(covered >= 19);  // at least 95 percent coverage
}

TEST_CASE("pulse backend estimate brackets the channel-level error") {
  const DeviceModel dev =
      DeviceModel::load(testsupport::config_path("hardware_baseline.json"));
  const double tau = 21.3e-9, amp = 0.237003, phi = -0.4;
  PulseBackend backend(dev, tau, amp, phi, {});
  CHECK(backend.qubits() == 2);
  CHECK((backend.interleaved_element().to_unitary() - cs_matrix()).norm() <
        1e-12);

  RBConfig cfg;  // default lengths, 10 sequences, 1024 shots
  const InterleavedRBResult r = run_interleaved_rb(backend, cfg, 11);
  const double truth = average_gate_error(
      dev.noisy_cs_channel(tau, amp, phi, {}, false), cs_matrix());

  CHECK(r.reference.alpha > 0.97);
  CHECK(r.reference.alpha < 0.985);
  CHECK(r.gate_error > 3e-3);
  CHECK(r.gate_error < 1e-2);
  CHECK(truth >= r.interval_low);
  CHECK(truth <= r.interval_high);
  CHECK(r.ordering_ok);
  CHECK(r.gate_error_stderr > 0.0);
  CHECK(r.gate_error_stderr < 2e-3);
}

TEST_CASE("sampled runs are reproducible and thread invariant") {
  const DeviceModel dev =
      DeviceModel::load(testsupport::config_path("hardware_baseline.json"));
  PulseBackend backend(dev, 0.0, 0.40872, -0.4, {});
  RBConfig cfg;
  cfg.lengths = {1, 10, 25, 50, 100, 150};

  cfg.threads = 1;
  const InterleavedRBResult serial = run_interleaved_rb(backend, cfg, 21);
  cfg.threads = 4;
  const InterleavedRBResult parallel = run_interleaved_rb(backend, cfg, 21);

  CHECK(serial.gate_error == parallel.gate_error);
  CHECK(serial.reference.alpha == parallel.reference.alpha);
  for (size_t li = 0; li < serial.reference.computational.samples.size(); ++li)
    for (size_t k = 0; k < serial.reference.computational.samples[li].size();
         ++k)
      CHECK(serial.reference.computational.samples[li][k] ==
            parallel.reference.computational.samples[li][k]);

  const InterleavedRBResult other = run_interleaved_rb(backend, cfg, 22);
  CHECK(other.gate_error != serial.gate_error);
}

TEST_CASE("ordering flag fires when the interleaved gate undoes drift") {
  // Element noise is a small coherent tilt; the interleaved slot applies
  // most of the inverse, so interleaved sequences decay slower than the
  // reference and the ratio-based estimate is meaningless.
  ChannelBackend backend(zx_rotation(0.18), zx_rotation(-0.15),
                         DihedralElement::identity(2), ReadoutModel::ideal(2));
  RBConfig cfg;
  cfg.shots = 0;
  const InterleavedRBResult r = run_interleaved_rb(backend, cfg, 17);
  CHECK(r.interleaved.alpha > r.reference.alpha);
  CHECK_FALSE(r.ordering_ok);
  CHECK(r.interval_low == 0.0);

  // A perfect echo leaves a constant sub-unity curve (only the closing
  // inverse is left uncorrected): no decay is identifiable, so the
  // analysis refuses rather than reporting an arbitrary rate.
  ChannelBackend echo(zx_rotation(0.18), zx_rotation(-0.18),
                      DihedralElement::identity(2), ReadoutModel::ideal(2));
  CHECK_THROWS_WITH_AS(run_interleaved_rb(echo, cfg, 17),
                       doctest::Contains("no variation"),
                       std::runtime_error);
}

TEST_CASE("configuration and construction errors are rejected") {
  ChannelBackend backend(QuantumChannel::identity(2),
                         QuantumChannel::identity(2), cs_element(),
                         ReadoutModel::ideal(2));
  RBConfig empty;
  empty.lengths.clear();
  CHECK_THROWS_AS(run_rb(backend, empty, 1), std::invalid_argument);
  RBConfig none;
  none.samples = 0;
  CHECK_THROWS_AS(run_rb(backend, none, 1), std::invalid_argument);

  CHECK_THROWS_AS(ChannelBackend(QuantumChannel::identity(1),
                                 QuantumChannel::identity(2), cs_element(),
                                 ReadoutModel::ideal(2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(ChannelBackend(QuantumChannel::identity(2),
                                 QuantumChannel::identity(2), cs_element(),
                                 ReadoutModel::ideal(1)),
                  std::invalid_argument);
}

TEST_CASE("default configuration uses the standard sequence plan") {
  const RBConfig cfg;
  CHECK(cfg.lengths == std::vector<int>{1, 5, 10, 20, 30, 50, 75, 100, 125, 150});
  CHECK(cfg.samples == 10);
  CHECK(cfg.shots == 1024);
}
