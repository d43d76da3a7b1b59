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

#ifndef CSBENCH_CALIBRATION_HPP_
#define CSBENCH_CALIBRATION_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "csbench/device.hpp"
#include "csbench/fit.hpp"
#include "csbench/pulse.hpp"

namespace csbench {

// A measurement-loop failure that leaves no usable estimate (degenerate
// scan, no root in range, ambiguous fits).
class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Accumulates one JSON record per calibration stage; can be replayed into
// a JSON Lines file.  Records hold only deterministic quantities.
class SessionLog {
 public:
  void record(nlohmann::json entry) { records_.push_back(std::move(entry)); }
  const std::vector<nlohmann::json> &records() const { return records_; }
  void write_jsonl(const std::string &path) const;

 private:
  std::vector<nlohmann::json> records_;
};

struct ScanPoint {
  double x = 0.0;
  double value = 0.0;  // measured expectation value
};

struct CalibrationOptions {
  std::vector<double> amplitude_grid;  // empty: 0.05 .. 0.975 step 0.025
  std::vector<double> phase_grid;      // empty: 24 points over (-pi, pi]
  std::vector<int> fine_reps;          // empty: N = 0..9
  std::vector<int> xy4_reps;           // empty: N = 0, 2, ..., 32
  int shots = 1024;                    // per scan point; 0 = exact values
  double threshold = 1e-3 * kPi;       // rad per gate, both fine loops
  int max_iterations = 10;
  int threads = 0;                     // 0 = library default
};

struct RoughAmplitudeResult {
  double a0 = 0.0;  // amplitude of the echoed pi/4 rotation
  std::vector<ScanPoint> curve;
  FitResult fit;  // y = amp * cos(k1 A + k3 A^3) + offset
};

struct RoughPhaseResult {
  double phi0 = 0.0;  // drive phase zeroing the quadrature component
  std::vector<ScanPoint> ground, excited;
  FitResult ground_fit, excited_fit;
  double antiphase_gap = 0.0;  // |phase(ground) - phase(excited)| - pi
};

struct FineLoopResult {
  double value = 0.0;             // final amplitude or phase
  std::vector<double> residuals;  // per-iteration |delta|, rad per gate
  bool converged = false;
  int iterations = 0;
};

struct CrosstalkResult {
  double frequency_hz = 0.0;  // magnitude of the local-rotation rate
  double decay_time = 0.0;    // s
  std::vector<ScanPoint> curve;  // target <Z> vs accumulated pulse time
  FitResult fit;
  bool oscillating = true;  // false when the scan is flat (no crosstalk)
};

struct CompensationResult {
  CompTone tone;
  double initial_hz = 0.0;   // crosstalk magnitude without the tone
  double residual_hz = 0.0;  // with the calibrated tone
  int evaluations = 0;
};

struct CalibrationResult {
  double tau_sq = 0.0;
  RoughAmplitudeResult rough_amplitude;
  RoughPhaseResult rough_phase;
  FineLoopResult amplitude_loop;
  FineLoopResult phase_loop;
  double a1 = 0.0;    // calibrated amplitude
  double phi1 = 0.0;  // calibrated phase
  bool converged = false;
};

// --- Device-level schedule pieces -----------------------------------------
//
// One shaped CR pulse (or the two-pulse echo) as a channel, including
// relaxation over the pulse duration.  Local rotations in the measurement
// loops are treated as instantaneous and noise-free.

QuantumChannel cr_pulse_channel(const DeviceModel &device, double tau_sq,
                                double amplitude, double phi,
                                const std::optional<CompTone> &comp = {});
QuantumChannel echo_channel(const DeviceModel &device, double tau_sq,
                            double amplitude, double phi,
                            const std::optional<CompTone> &comp = {});

// Target-qubit Z expectation of a two-qubit state seen through the device
// readout; shots = 0 returns the exact distorted expectation.
double measure_target_z(const Eigen::MatrixXcd &rho, const DeviceModel &device,
                        int shots, uint64_t seed);

// --- Measurement loops -----------------------------------------------------

// Sweeps the echo amplitude at phase 0, fits the controlled-rotation
// oscillation and solves the fitted angle polynomial for the pi/4 point.
RoughAmplitudeResult rough_amplitude_scan(const DeviceModel &device,
                                          double tau_sq,
                                          const CalibrationOptions &opts,
                                          uint64_t seed,
                                          SessionLog *log = nullptr);

// Sweeps the drive phase of a doubled echo with the control in the ground
// and excited state; the two antiphase sinusoids locate the phase where
// the quadrature component vanishes.
RoughPhaseResult rough_phase_scan(const DeviceModel &device, double tau_sq,
                                  double a0, const CalibrationOptions &opts,
                                  uint64_t seed, SessionLog *log = nullptr);

// Repeats the echo 4N times and fits the accumulated-angle error per gate;
// each iteration rescales the amplitude multiplicatively.
FineLoopResult fine_amplitude_loop(const DeviceModel &device, double tau_sq,
                                   double a_start, double phi,
                                   const CalibrationOptions &opts,
                                   uint64_t seed, SessionLog *log = nullptr);

// Interleaves the echo with target flips so a phase error accumulates as a
// slow precession; each iteration shifts the phase by the fitted error.
FineLoopResult fine_phase_loop(const DeviceModel &device, double tau_sq,
                               double a1, double phi_start,
                               const CalibrationOptions &opts, uint64_t seed,
                               SessionLog *log = nullptr);

// Full chain: rough amplitude, rough phase, fine amplitude, fine phase.
CalibrationResult calibrate_cs(const DeviceModel &device, double tau_sq,
                               const CalibrationOptions &opts, uint64_t seed,
                               SessionLog *log = nullptr);

// Repeated same-sign pulses under an XY-4 frame on the control: controlled
// terms refocus while local crosstalk accumulates as a target rotation at
// the effective local rate.  Samples N in xy4_reps, time axis 4 N tau_cr.
CrosstalkResult xy4_crosstalk(const DeviceModel &device, double tau_sq,
                              double a1, double phi1,
                              const std::optional<CompTone> &comp,
                              const CalibrationOptions &opts, uint64_t seed,
                              SessionLog *log = nullptr);

// Minimizes the measured crosstalk magnitude over the tone amplitude and
// phase (coarse phase ring, then simplex descent).
CompensationResult calibrate_compensation(const DeviceModel &device,
                                          double tau_sq, double a1,
                                          double phi1,
                                          const CalibrationOptions &opts,
                                          uint64_t seed,
                                          SessionLog *log = nullptr);

// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

}  // namespace csbench

#endif  // CSBENCH_CALIBRATION_HPP_
