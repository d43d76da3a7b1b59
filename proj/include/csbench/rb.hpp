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

#ifndef CSBENCH_RB_HPP_
#define CSBENCH_RB_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "csbench/channels.hpp"
#include "csbench/device.hpp"
#include "csbench/fit.hpp"
#include "csbench/group.hpp"

namespace csbench {

struct RBConfig {
  std::vector<int> lengths = {1, 5, 10, 20, 30, 50, 75, 100, 125, 150};
  int samples = 10;  // random sequences per length
  int shots = 1024;  // measurement shots per sequence; 0 = exact survival
  int threads = 0;   // 0 = library default
};

// Noise source for a benchmarking run.  Elements and the interleaved gate
// mutate a density matrix in place; the interleaved gate must also be
// reported as a group element so sequences can track the closing inverse.
class RBBackend {
 public:
  virtual ~RBBackend() = default;
  virtual int qubits() const = 0;
  virtual void apply_element(const DihedralElement &g,
                             Eigen::MatrixXcd &rho) const = 0;
  virtual void apply_interleaved(Eigen::MatrixXcd &rho) const = 0;
  virtual DihedralElement interleaved_element() const = 0;
  virtual ReadoutModel readout() const = 0;
};

// Elements realized as their ideal unitary followed by a fixed noise
// channel; the interleaved gate as the target element's unitary followed
// by its own noise channel.  Exact decay oracles exist for this backend
// (e.g. depolarizing noise decays with its own alpha), which is what the
// tests lean on.
class ChannelBackend : public RBBackend {
 public:
  ChannelBackend(QuantumChannel element_noise, QuantumChannel gate_noise,
                 DihedralElement target, ReadoutModel readout);

  int qubits() const override { return target_.qubits(); }
  void apply_element(const DihedralElement &g,
                     Eigen::MatrixXcd &rho) const override;
  void apply_interleaved(Eigen::MatrixXcd &rho) const override;
  DihedralElement interleaved_element() const override { return target_; }
  ReadoutModel readout() const override { return readout_; }

 private:
  QuantumChannel element_noise_, gate_noise_;
  DihedralElement target_;
  Eigen::MatrixXcd target_unitary_;
  ReadoutModel readout_;
};

// Device-level backend: the interleaved gate is the shaped-pulse CS
// schedule at a calibrated working point (simulated once, cached as a
// channel); elements are ideal unitaries followed by the device's
// per-element noise (relaxation over the element slot plus the optional
// depolarizing contribution).
class PulseBackend : public RBBackend {
 public:
  PulseBackend(const DeviceModel &device, double tau_sq, double amplitude,
               double phi, const std::optional<CompTone> &comp = {});

  int qubits() const override { return 2; }
  void apply_element(const DihedralElement &g,
                     Eigen::MatrixXcd &rho) const override;
  void apply_interleaved(Eigen::MatrixXcd &rho) const override;
  DihedralElement interleaved_element() const override { return target_; }
  ReadoutModel readout() const override { return readout_; }

 private:
  QuantumChannel element_noise_, gate_channel_;
  DihedralElement target_;
  ReadoutModel readout_;
};

// One decay experiment: survivals per sequence length for one input basis.
struct RBArm {
  std::vector<int> lengths;
  std::vector<std::vector<double>> samples;  // [length][sequence]
  std::vector<double> mean;                  // per length
  std::vector<double> sem;                   // standard error of the mean
  double alpha = 1.0;
  double alpha_stderr = 0.0;
  double amplitude = 0.0, offset = 0.0;  // A, B of A alpha^m + B
  bool fitted = false;  // false when the exact flat-at-one shortcut fired
};

struct RBResult {
  RBArm computational;  // |0..0> input, computational survival
  RBArm superposition;  // |+..+> input, folded back before measuring
  double alpha = 1.0;   // basis-combined decay
  double alpha_stderr = 0.0;
  double error_per_element = 0.0;  // (d-1)/d (1 - alpha)
  double error_stderr = 0.0;
};

struct InterleavedRBResult {
  RBResult reference;
  RBResult interleaved;
  double alpha_ratio = 1.0;  // interleaved alpha / reference alpha
  double gate_error = 0.0;   // (d-1)/d (1 - ratio)
  double gate_error_stderr = 0.0;
  double epsilon = 0.0;  // systematic half-width of the ratio estimate
  double interval_low = 0.0, interval_high = 0.0;
  bool ordering_ok = true;  // interleaved decay not above the reference
};

// Analysis pieces, exposed for direct testing.
double combined_alpha(int qubits, double alpha_z, double alpha_r);
double element_error(int qubits, double alpha);
double interleaved_epsilon(int qubits, double alpha, double alpha_ratio);

RBResult run_rb(const RBBackend &backend, const RBConfig &config,
                uint64_t seed);
InterleavedRBResult run_interleaved_rb(const RBBackend &backend,
                                       const RBConfig &config, uint64_t seed);

}  // namespace csbench

#endif  // CSBENCH_RB_HPP_
