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

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "csbench/linalg.hpp"
#include "csbench/parallel.hpp"

namespace csbench {

namespace {

Eigen::MatrixXcd hadamard_layer(int n) {
  Eigen::MatrixXcd h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  Eigen::MatrixXcd out = h;
  for (int i = 1; i < n; ++i) out = kron(out, h);
  return out;
}

// Runs one random sequence and returns the survival probability of the
// ideal outcome (all zeros after folding the superposition arm back).
double sequence_survival(const RBBackend &backend, int length,
                         bool interleave, bool superposition, int shots,
                         uint64_t element_seed, uint64_t shot_seed) {
  const int n = backend.qubits();
  const int d = 1 << n;
  const Eigen::MatrixXcd fold = hadamard_layer(n);

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
  rho(0, 0) = 1.0;
  if (superposition) rho = fold * rho * fold;

  std::mt19937_64 rng(element_seed);
  DihedralElement net = DihedralElement::identity(n);
  for (int i = 0; i < length; ++i) {
    const DihedralElement g = DihedralElement::sample_uniform(n, rng);
    backend.apply_element(g, rho);
    net = g.compose(net);
    if (interleave) {
      backend.apply_interleaved(rho);
      net = backend.interleaved_element().compose(net);
    }
  }
  backend.apply_element(net.inverse(), rho);
  if (superposition) rho = fold * rho * fold;

  const ReadoutModel readout = backend.readout();
  if (shots <= 0) {
    std::vector<double> probs(size_t(d), 0.0);
    for (int i = 0; i < d; ++i) probs[size_t(i)] = rho(i, i).real();
    return readout.distort(probs)[0];
  }
  std::mt19937_64 srng(shot_seed);
  const std::vector<long long> counts =
      measure_counts(rho, readout, shots, srng);
  return double(counts[0]) / double(shots);
}

void analyze_arm(RBArm &arm, int dim) {
  const size_t n_lengths = arm.lengths.size();
  arm.mean.assign(n_lengths, 0.0);
  arm.sem.assign(n_lengths, 0.0);
  double lowest = 1.0;
  for (size_t li = 0; li < n_lengths; ++li) {
    const std::vector<double> &s = arm.samples[li];
    double m = 0;
    for (double v : s) m += v;
    m /= double(s.size());
    double var = 0;
    for (double v : s) var += (v - m) * (v - m);
    if (s.size() > 1) var /= double(s.size() - 1);
    arm.mean[li] = m;
    arm.sem[li] = std::sqrt(var / double(s.size()));
    for (double v : s) lowest = std::min(lowest, v);
  }

  // Exact flat-at-one data carry no decay information; report the zero
  // error rate directly instead of running a degenerate fit.
  if (lowest > 1.0 - 1e-9) {
    arm.alpha = 1.0;
    arm.alpha_stderr = 0.0;
    arm.amplitude = 1.0 - 1.0 / double(dim);
    arm.offset = 1.0 / double(dim);
    arm.fitted = false;
    return;
  }

  std::vector<double> x(arm.lengths.begin(), arm.lengths.end());
  std::vector<double> sigma(n_lengths);
  bool weighted = true;
  for (size_t li = 0; li < n_lengths; ++li) {
    sigma[li] = std::max(arm.sem[li], 1e-6);
    if (arm.sem[li] <= 0.0) weighted = false;
  }
  const DecayFit fit =
      fit_decay(x, arm.mean, weighted ? sigma : std::vector<double>{});
  arm.alpha = fit.alpha;
  arm.alpha_stderr = fit.alpha_stderr;
  arm.amplitude = fit.amplitude;
  arm.offset = fit.offset;
  arm.fitted = true;
}

RBResult run_arms(const RBBackend &backend, const RBConfig &config,
                  uint64_t seed, bool interleave) {
  if (config.lengths.empty())
    throw std::invalid_argument("benchmarking needs at least one length");
  if (config.samples < 1)
    throw std::invalid_argument("benchmarking needs at least one sequence");

  const int n = backend.qubits();
  const int d = 1 << n;
  const uint64_t context = interleave ? 2 : 1;

  RBResult result;
  RBArm *arms[2] = {&result.computational, &result.superposition};
  for (RBArm *arm : arms) {
    arm->lengths = config.lengths;
    arm->samples.assign(config.lengths.size(),
                        std::vector<double>(size_t(config.samples), 0.0));
  }

  const size_t per_arm = config.lengths.size() * size_t(config.samples);
  parallel_for(2 * per_arm, config.threads, [&](size_t t) {
    const size_t a = t / per_arm;
    const size_t li = (t % per_arm) / size_t(config.samples);
    const size_t k = t % size_t(config.samples);
    const double s = sequence_survival(
        backend, config.lengths[li], interleave, a == 1, config.shots,
        derive_seed(seed, {context, a, li, k, 0}),
        derive_seed(seed, {context, a, li, k, 1}));
    arms[a]->samples[li][k] = s;
  });

  for (RBArm *arm : arms) analyze_arm(*arm, d);

  result.alpha =
      combined_alpha(n, result.computational.alpha, result.superposition.alpha);
  const double sz = result.computational.alpha_stderr;
  const double sr = result.superposition.alpha_stderr;
  const double w = double(d);
  result.alpha_stderr = std::sqrt(sz * sz + w * w * sr * sr) / (w + 1.0);
  result.error_per_element = element_error(n, result.alpha);
  result.error_stderr = (w - 1.0) / w * result.alpha_stderr;
  return result;
}

}  // namespace

ChannelBackend::ChannelBackend(QuantumChannel element_noise,
                               QuantumChannel gate_noise,
                               DihedralElement target, ReadoutModel readout)
    : element_noise_(std::move(element_noise)),
      gate_noise_(std::move(gate_noise)),
      target_(std::move(target)),
      target_unitary_(target_.to_unitary()),
      readout_(std::move(readout)) {
  if (element_noise_.qubits() != target_.qubits() ||
      gate_noise_.qubits() != target_.qubits())
    throw std::invalid_argument(
        "channel backend: noise channels and target gate disagree on size");
  if (readout_.outcomes() != 1 << target_.qubits())
    throw std::invalid_argument(
        "channel backend: readout model has the wrong number of outcomes");
}

void ChannelBackend::apply_element(const DihedralElement &g,
                                   Eigen::MatrixXcd &rho) const {
  const Eigen::MatrixXcd u = g.to_unitary();
  rho = u * rho * u.adjoint();
  rho = element_noise_.apply(rho);
}

void ChannelBackend::apply_interleaved(Eigen::MatrixXcd &rho) const {
  rho = target_unitary_ * rho * target_unitary_.adjoint();
  rho = gate_noise_.apply(rho);
}

PulseBackend::PulseBackend(const DeviceModel &device, double tau_sq,
                           double amplitude, double phi,
                           const std::optional<CompTone> &comp)
    : element_noise_(device.element_noise()),
      gate_channel_(device.noisy_cs_channel(tau_sq, amplitude, phi, comp,
                                            false)),
      target_(DihedralElement::from_gates(2, {GateOp::cs(0, 1)})),
      readout_(device.readout()) {}

void PulseBackend::apply_element(const DihedralElement &g,
                                 Eigen::MatrixXcd &rho) const {
  const Eigen::MatrixXcd u = g.to_unitary();
  rho = u * rho * u.adjoint();
  rho = element_noise_.apply(rho);
}

void PulseBackend::apply_interleaved(Eigen::MatrixXcd &rho) const {
  rho = gate_channel_.apply(rho);
}

double combined_alpha(int qubits, double alpha_z, double alpha_r) {
  const double w = double(1 << qubits);
  return (alpha_z + w * alpha_r) / (w + 1.0);
}

double element_error(int qubits, double alpha) {
  const double d = double(1 << qubits);
  return (d - 1.0) / d * (1.0 - alpha);
}

double interleaved_epsilon(int qubits, double alpha, double alpha_ratio) {
  const double d = double(1 << qubits);
  const double a = std::clamp(alpha, 1e-6, 1.0);
  const double loss = std::max(0.0, 1.0 - a);
  const double first =
      (d - 1.0) / d * (std::abs(alpha_ratio - a) + loss);
  const double second = 2.0 * (d * d - 1.0) * loss / (a * d * d) +
                        4.0 * std::sqrt(loss) * std::sqrt(d * d - 1.0) / a;
  return std::min(first, second);
}

RBResult run_rb(const RBBackend &backend, const RBConfig &config,
                uint64_t seed) {
  return run_arms(backend, config, seed, false);
}

InterleavedRBResult run_interleaved_rb(const RBBackend &backend,
                                       const RBConfig &config, uint64_t seed) {
  InterleavedRBResult result;
  result.reference = run_arms(backend, config, seed, false);
  result.interleaved = run_arms(backend, config, seed, true);

  const int n = backend.qubits();
  const double d = double(1 << n);
  const double ar = result.reference.alpha;
  const double ai = result.interleaved.alpha;
  if (ar <= 0.0)
    throw std::runtime_error(
        "interleaved analysis: reference decay is not positive");

  result.alpha_ratio = ai / ar;
  result.gate_error = (d - 1.0) / d * (1.0 - result.alpha_ratio);
  const double rr = result.reference.alpha_stderr / ar;
  const double ri =
      ai != 0.0 ? result.interleaved.alpha_stderr / std::abs(ai) : 0.0;
  result.gate_error_stderr =
      (d - 1.0) / d * std::abs(result.alpha_ratio) * std::sqrt(rr * rr + ri * ri);

  result.epsilon = interleaved_epsilon(n, ar, result.alpha_ratio);
  result.interval_low = std::max(0.0, result.gate_error - result.epsilon);
  result.interval_high = std::min(1.0, result.gate_error + result.epsilon);

  const double slack =
      2.0 * std::sqrt(result.reference.alpha_stderr *
                          result.reference.alpha_stderr +
                      result.interleaved.alpha_stderr *
                          result.interleaved.alpha_stderr);
  result.ordering_ok = ai <= ar + std::max(slack, 1e-12);
  return result;
}

}  // namespace csbench
