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

#ifndef CSBENCH_QPT_HPP_
#define CSBENCH_QPT_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "csbench/channels.hpp"
#include "csbench/device.hpp"

namespace csbench {

// Process tomography of the two-qubit gate.  The circuit list crosses
// four input states per qubit with three measurement bases per qubit and
// appends one readout-calibration circuit per computational state; the
// reconstruction is a weighted linear inversion over a Hermitian operator
// basis refined by a least-squares fit constrained to the physical set,
// where alternating projections onto the completely-positive and
// trace-preserving sets enforce the constraints.  Readout error is folded
// into the measurement effects using the assignment matrix estimated from
// the calibration circuits, while state preparation and basis rotations
// are modelled as ideal, so any unmitigated preparation noise shows up in
// the reported gate error.

// One circuit: per-qubit input-state indices and measurement-basis
// indices, or a readout-calibration circuit preparing a basis state.
struct TomographyCircuit {
  std::array<int, 2> prep{0, 0};   // 0:|0>  1:|1>  2:|+>  3:|+i>
  std::array<int, 2> basis{2, 2};  // 0:X  1:Y  2:Z
  bool calibration = false;
  int calibration_state = 0;  // prepared computational state when calibrating
};

// Every prep pair crossed with every basis pair (prep-major order), then
// the four calibration circuits: 4^2 * 3^2 + 4 = 148 circuits.
std::vector<TomographyCircuit> standard_tomography_circuits();

// Single-qubit layers realizing the indices above: prep_unitary(i)|0> is
// the i-th input state; basis_rotation(b) maps the b-th basis onto Z.
Eigen::Matrix2cd prep_unitary(int idx);
Eigen::Matrix2cd basis_rotation(int idx);

struct QPTOptions {
  int shots = 4096;  // per circuit; 0 = exact outcome probabilities
  bool readout_mitigation = true;
  bool ideal_spam = false;  // drop preparation/measurement noise entirely
  int max_projection_iterations = 500;
  int max_fit_iterations = 3000;  // constrained-fit gradient steps
  double cp_tolerance = 1e-7;  // allowed negative Choi eigenvalue
  double tp_tolerance = 1e-6;  // allowed deviation of the reduced input
  // Parametric-bootstrap replicates used to de-bias the gate error; 0
  // skips the correction.  Only meaningful for sampled data (shots > 0).
  int bootstrap_bias_samples = 0;
  int threads = 0;
};

// Outcome frequencies for every circuit in the standard list.
struct TomographyData {
  std::vector<TomographyCircuit> circuits;
  std::vector<std::array<double, 4>> frequencies;
  int shots = 0;
};

// Runs the circuit list against `gate`.  Unless options.ideal_spam is
// set, each preparation and basis-change layer is followed by qubit
// relaxation over device.sq_gate_time and outcomes pass through the
// device readout model.
TomographyData simulate_tomography(const QuantumChannel &gate,
                                   const DeviceModel &device,
                                   const QPTOptions &options, uint64_t seed);

struct QPTResult {
  Eigen::MatrixXcd choi;  // input-index-major, trace 4
  QuantumChannel channel = QuantumChannel::identity(2);
  Eigen::MatrixXd assignment;  // readout matrix folded into the effects
  double fidelity = 0.0;       // process fidelity against the target
  double gate_error = 0.0;     // average gate error against the target
  double linear_gate_error = 0.0;  // same, before the CPTP projection
  // Gate error minus the bootstrap-estimated finite-shot bias; equals
  // gate_error when the correction is disabled.
  double bias_corrected_gate_error = 0.0;
  double bootstrap_bias = 0.0;  // estimated upward bias of gate_error
  double cp_residual = 0.0;    // most negative Choi eigenvalue at exit
  double tp_residual = 0.0;    // max |Tr_out(choi) - I| entry at exit
  int projection_iterations = 0;
  bool converged = false;
};

// Reconstructs the process and scores it against the target unitary.
// The constrained fit sits on the boundary of the physical set, which
// biases the error estimate upward at finite shot counts; with
// options.bootstrap_bias_samples > 0 synthetic datasets are resampled
// from the fitted process and refitted, and the measured bias is
// subtracted.  `seed` only feeds the bootstrap resampling.
QPTResult reconstruct_process(const TomographyData &data,
                              const Eigen::MatrixXcd &target_unitary,
                              const QPTOptions &options, uint64_t seed = 0);

}  // namespace csbench

#endif  // CSBENCH_QPT_HPP_
