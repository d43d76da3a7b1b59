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

#ifndef CSBENCH_DEVICE_HPP_
#define CSBENCH_DEVICE_HPP_

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "csbench/channels.hpp"
#include "csbench/pulse.hpp"

namespace csbench {

// Configuration problem tied to a specific field; the message always names
// the offending field path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string &what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string &field() const { return field_; }

 private:
  std::string field_;
};

struct QubitParams {
  double t1 = std::numeric_limits<double>::infinity();  // seconds
  double t2 = std::numeric_limits<double>::infinity();  // seconds
  double readout_p01 = 0.0;  // P(read 1 | prepared 0)
  double readout_p10 = 0.0;  // P(read 0 | prepared 1)
};

// Two-qubit device description: coherence and readout per qubit, the
// cross-resonance interaction model, pulse-shape geometry and schedule
// timing.  Qubit 0 is the control, qubit 1 the target.  All stored values
// are SI (seconds, rad/s); the JSON schema uses microseconds, nanoseconds,
// MHz and kHz as indicated by the field-name suffixes.
struct DeviceModel {
  std::string name = "unnamed";
  std::array<QubitParams, 2> qubit;
  CRModel cr;

  double edge = 28.16e-9;          // s
  double edge_sigma = 14.08e-9;    // s
  int edge_slices = 48;
  double single_qubit_overhead = 106.7e-9;  // s, local gates in the schedule
  double sq_gate_time = 35.6e-9;   // s, one basis-change layer

  double element_time = 1.2e-6;    // s, one benchmarking element
  double element_depolarizing_alpha = 1.0;  // extra per-element depolarizing

  // Constant coherent miscalibration appended to every composed gate.
  double coherent_zx_rad = 0.0;
  double coherent_ix_rad = 0.0;

  static DeviceModel from_json(const nlohmann::json &j);
  static DeviceModel load(const std::string &path);
  nlohmann::json to_json() const;

  // FNV-1a of the canonical serialization: whitespace and key order in the
  // original file do not matter.
  uint64_t config_hash() const;

  void validate() const;

  PulseShape shape(double tau_sq) const;
  ScheduleTiming timing() const;
  ReadoutModel readout() const;

  // Tensor product of the per-qubit relaxation channels over time t.
  QuantumChannel pair_damping(double t) const;

  // Noise attached to one benchmarking element: relaxation over the
  // element duration plus the optional extra depolarizing factor.
  QuantumChannel element_noise() const;

  // Composed-schedule unitary at the given working point, including the
  // constant coherent error term.
  Eigen::Matrix4cd cs_unitary(double tau_sq, double amplitude, double phi,
                              const std::optional<CompTone> &comp = {},
                              bool inverse = false) const;

  // Full noisy gate: relaxation over the schedule duration composed after
  // the schedule unitary.
  QuantumChannel noisy_cs_channel(double tau_sq, double amplitude, double phi,
                                  const std::optional<CompTone> &comp = {},
                                  bool inverse = false) const;
};

}  // namespace csbench

#endif  // CSBENCH_DEVICE_HPP_
