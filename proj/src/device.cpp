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

#include "csbench/device.hpp"

#include <cmath>
#include <limits>

#include "csbench/io.hpp"
#include "csbench/linalg.hpp"

namespace csbench {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMHz = 2.0 * kPi * 1e6;  // MHz -> rad/s
constexpr double kKHz = 2.0 * kPi * 1e3;  // kHz -> rad/s

const json *find(const json &j, const char *key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

double require_number(const json &j, const std::string &path,
                      const char *key) {
  const json *v = find(j, key);
  if (!v) throw ConfigError(path + "." + key, "missing required field");
  if (!v->is_number())
    throw ConfigError(path + "." + key, "expected a number");
  return v->get<double>();
}

double optional_number(const json &j, const std::string &path,
                       const char *key, double fallback) {
  const json *v = find(j, key);
  if (!v) return fallback;
  if (!v->is_number())
    throw ConfigError(path + "." + key, "expected a number");
  return v->get<double>();
}

// Required field where JSON null encodes "infinite" (no decay).
double require_time_or_null(const json &j, const std::string &path,
                            const char *key) {
  const json *v = find(j, key);
  if (!v) throw ConfigError(path + "." + key, "missing required field");
  if (v->is_null()) return kInf;
  if (!v->is_number())
    throw ConfigError(path + "." + key, "expected a number or null");
  return v->get<double>();
}

json time_to_json(double seconds, double unit) {
  if (std::isinf(seconds)) return nullptr;
  return seconds / unit;
}

}  // namespace

DeviceModel DeviceModel::from_json(const json &j) {
  DeviceModel d;
  d.name = j.value("name", "unnamed");

  const json *qubits = find(j, "qubits");
  if (!qubits || !qubits->is_array() || qubits->size() != 2)
    throw ConfigError("qubits", "expected an array of exactly 2 entries");
  for (int i = 0; i < 2; ++i) {
    const std::string path = "qubits[" + std::to_string(i) + "]";
    const json &q = (*qubits)[size_t(i)];
    QubitParams &p = d.qubit[size_t(i)];
    p.t1 = require_time_or_null(q, path, "t1_us") * 1e-6;
    p.t2 = require_time_or_null(q, path, "t2_us") * 1e-6;
    p.readout_p01 = optional_number(q, path, "readout_p01", 0.0);
    p.readout_p10 = optional_number(q, path, "readout_p10", 0.0);
  }

  const json *cr = find(j, "cr");
  if (!cr) throw ConfigError("cr", "missing required section");
  d.cr.gz_linear = require_number(*cr, "cr", "gz_linear_mhz") * kMHz;
  d.cr.gz_cubic = optional_number(*cr, "cr", "gz_cubic_mhz", 0.0) * kMHz;
  d.cr.gi_linear = optional_number(*cr, "cr", "gi_linear_mhz", 0.0) * kMHz;
  d.cr.gi_cubic = optional_number(*cr, "cr", "gi_cubic_mhz", 0.0) * kMHz;
  d.cr.zi_quadratic =
      optional_number(*cr, "cr", "zi_quadratic_mhz", 0.0) * kMHz;
  d.cr.static_zz = optional_number(*cr, "cr", "static_zz_khz", 0.0) * kKHz;
  d.cr.static_iz = optional_number(*cr, "cr", "static_iz_khz", 0.0) * kKHz;
  d.cr.theta0 = require_number(*cr, "cr", "theta0_rad");
  d.cr.crosstalk_phase =
      optional_number(*cr, "cr", "crosstalk_phase_rad", 0.0);
  d.cr.target_drive_rate =
      optional_number(*cr, "cr", "target_drive_rate_mhz", 0.0) * kMHz;

  if (const json *pulse = find(j, "pulse")) {
    d.edge = optional_number(*pulse, "pulse", "edge_ns", 28.16) * 1e-9;
    d.edge_sigma =
        optional_number(*pulse, "pulse", "edge_sigma_ns", 14.08) * 1e-9;
    d.edge_slices =
        int(optional_number(*pulse, "pulse", "edge_slices", 48.0));
    d.single_qubit_overhead =
        optional_number(*pulse, "pulse", "single_qubit_overhead_ns", 106.7) *
        1e-9;
    d.sq_gate_time =
        optional_number(*pulse, "pulse", "sq_gate_ns", 35.6) * 1e-9;
  }

  const json *rb = find(j, "rb");
  if (!rb) throw ConfigError("rb", "missing required section");
  d.element_time = require_number(*rb, "rb", "element_time_ns") * 1e-9;
  d.element_depolarizing_alpha =
      optional_number(*rb, "rb", "element_depolarizing_alpha", 1.0);

  if (const json *noise = find(j, "noise")) {
    d.coherent_zx_rad =
        optional_number(*noise, "noise", "coherent_zx_rad", 0.0);
    d.coherent_ix_rad =
        optional_number(*noise, "noise", "coherent_ix_rad", 0.0);
  }

  d.validate();
  return d;
}

DeviceModel DeviceModel::load(const std::string &path) {
  return from_json(read_json_file(path));
}

json DeviceModel::to_json() const {
  json qubits = json::array();
  for (const QubitParams &p : qubit) {
    qubits.push_back(json{{"t1_us", time_to_json(p.t1, 1e-6)},
                          {"t2_us", time_to_json(p.t2, 1e-6)},
                          {"readout_p01", p.readout_p01},
                          {"readout_p10", p.readout_p10}});
  }
  return json{
      {"name", name},
      {"qubits", qubits},
      {"cr",
       {{"gz_linear_mhz", cr.gz_linear / kMHz},
        {"gz_cubic_mhz", cr.gz_cubic / kMHz},
        {"gi_linear_mhz", cr.gi_linear / kMHz},
        {"gi_cubic_mhz", cr.gi_cubic / kMHz},
        {"zi_quadratic_mhz", cr.zi_quadratic / kMHz},
        {"static_zz_khz", cr.static_zz / kKHz},
        {"static_iz_khz", cr.static_iz / kKHz},
        {"theta0_rad", cr.theta0},
        {"crosstalk_phase_rad", cr.crosstalk_phase},
        {"target_drive_rate_mhz", cr.target_drive_rate / kMHz}}},
      {"pulse",
       {{"edge_ns", edge / 1e-9},
        {"edge_sigma_ns", edge_sigma / 1e-9},
        {"edge_slices", edge_slices},
        {"single_qubit_overhead_ns", single_qubit_overhead / 1e-9},
        {"sq_gate_ns", sq_gate_time / 1e-9}}},
      {"rb",
       {{"element_time_ns", element_time / 1e-9},
        {"element_depolarizing_alpha", element_depolarizing_alpha}}},
      {"noise",
       {{"coherent_zx_rad", coherent_zx_rad},
        {"coherent_ix_rad", coherent_ix_rad}}}};
}

uint64_t DeviceModel::config_hash() const { return fnv1a64(to_json().dump()); }

void DeviceModel::validate() const {
  for (int i = 0; i < 2; ++i) {
    const std::string path = "qubits[" + std::to_string(i) + "]";
    const QubitParams &p = qubit[size_t(i)];
    if (!(p.t1 > 0)) throw ConfigError(path + ".t1_us", "must be positive");
    if (!(p.t2 > 0)) throw ConfigError(path + ".t2_us", "must be positive");
    if (p.t2 > 2.0 * p.t1)
      throw ConfigError(path + ".t2_us", "cannot exceed twice T1");
    for (double pr : {p.readout_p01, p.readout_p10}) {
      if (pr < 0.0 || pr >= 0.5)
        throw ConfigError(path + ".readout_p01",
                          "flip probabilities must lie in [0, 0.5)");
    }
  }
  if (edge <= 0) throw ConfigError("pulse.edge_ns", "must be positive");
  if (edge_sigma <= 0)
    throw ConfigError("pulse.edge_sigma_ns", "must be positive");
  if (edge_slices < 32)
    throw ConfigError("pulse.edge_slices", "at least 32 slices per edge");
  if (single_qubit_overhead < 0)
    throw ConfigError("pulse.single_qubit_overhead_ns", "must be >= 0");
  if (sq_gate_time < 0)
    throw ConfigError("pulse.sq_gate_ns", "must be >= 0");
  if (element_time <= 0)
    throw ConfigError("rb.element_time_ns", "must be positive");
  if (element_depolarizing_alpha <= 0.0 || element_depolarizing_alpha > 1.0)
    throw ConfigError("rb.element_depolarizing_alpha", "must be in (0, 1]");
}

PulseShape DeviceModel::shape(double tau_sq) const {
  PulseShape s;
  s.tau_sq = tau_sq;
  s.tau_edge = edge;
  s.sigma = edge_sigma;
  return s;
}

ScheduleTiming DeviceModel::timing() const {
  ScheduleTiming t;
  t.single_qubit_overhead = single_qubit_overhead;
  return t;
}

ReadoutModel DeviceModel::readout() const {
  return ReadoutModel::per_qubit_flips(
      {{qubit[0].readout_p01, qubit[0].readout_p10},
       {qubit[1].readout_p01, qubit[1].readout_p10}});
}

QuantumChannel DeviceModel::pair_damping(double t) const {
  return QuantumChannel::damping(t, qubit[0].t1, qubit[0].t2)
      .tensor(QuantumChannel::damping(t, qubit[1].t1, qubit[1].t2));
}

QuantumChannel DeviceModel::element_noise() const {
  QuantumChannel noise = pair_damping(element_time);
  if (element_depolarizing_alpha < 1.0) {
    noise = noise.compose(
        QuantumChannel::depolarizing(2, element_depolarizing_alpha));
  }
  return noise;
}

Eigen::Matrix4cd DeviceModel::cs_unitary(double tau_sq, double amplitude,
                                         double phi,
                                         const std::optional<CompTone> &comp,
                                         bool inverse) const {
  Eigen::Matrix4cd u =
      cs_schedule(cr, shape(tau_sq), amplitude, phi, comp, inverse,
                  edge_slices);
  if (coherent_zx_rad != 0.0 || coherent_ix_rad != 0.0) {
    const Eigen::Matrix4cd h =
        0.5 * coherent_zx_rad * kron(pauli(3), pauli(1)) +
        0.5 * coherent_ix_rad * kron(pauli(0), pauli(1));
    u = expi_hermitian(h, 1.0) * u;
  }
  return u;
}

QuantumChannel DeviceModel::noisy_cs_channel(
    double tau_sq, double amplitude, double phi,
    const std::optional<CompTone> &comp, bool inverse) const {
  const double duration = timing().cs_time(shape(tau_sq));
  return pair_damping(duration).compose(
      QuantumChannel::from_unitary(cs_unitary(tau_sq, amplitude, phi, comp,
                                              inverse)));
}

}  // namespace csbench
