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

#ifndef CSBENCH_PULSE_HPP_
#define CSBENCH_PULSE_HPP_

#include <Eigen/Dense>
#include <optional>

#include "csbench/linalg.hpp"

namespace csbench {

// Single-qubit tone played on the target drive line in parallel with a
// cross-resonance pulse, sharing its envelope.  Its sign follows the sign
// of the CR amplitude so that an echoed pair flips both together.
struct CompTone {
  double amplitude = 0.0;  // dimensionless, like the CR amplitude
  double phase = 0.0;      // radians
};

// Effective two-qubit interaction rates (rad/s) generated by a
// cross-resonance drive at a given instantaneous amplitude and phase.
struct CRRates {
  double zi = 0, zx = 0, zy = 0, zz = 0;
  double ix = 0, iy = 0, iz = 0;
};

// Parametric cross-resonance interaction model.  The controlled terms have
// magnitude g_Z(A) = c1*A + c3*A^3 and rotate in the ZX/ZY plane with the
// drive phase; the local crosstalk terms have odd magnitude g_I(A) at an
// extra azimuth offset; the Stark-like ZI term is even in A.  All
// coefficients are angular rates (rad/s) at unit amplitude.
struct CRModel {
  double gz_linear = 0.0;
  double gz_cubic = 0.0;
  double gi_linear = 0.0;
  double gi_cubic = 0.0;
  double zi_quadratic = 0.0;
  double static_zz = 0.0;
  double static_iz = 0.0;
  double theta0 = 0.0;           // drive-phase offset of the ZX/ZY frame
  double crosstalk_phase = 0.0;  // extra azimuth of the local IX/IY terms
  double target_drive_rate = 0.0;  // rad/s per unit compensation amplitude

  double g_z(double a) const { return gz_linear * a + gz_cubic * a * a * a; }
  double g_i(double a) const { return gi_linear * a + gi_cubic * a * a * a; }

  // Rates at instantaneous CR amplitude `a` (signed) and drive phase `phi`,
  // plus an optional simultaneous target-drive tone of signed instantaneous
  // amplitude `comp_a` at phase `comp_phi`.
  CRRates rates(double a, double phi, double comp_a = 0.0,
                double comp_phi = 0.0) const;

  // H = sum_P (w_ZP/2) Z(x)P + sum_Q (w_IQ/2) I(x)Q, control (x) target.
  Eigen::Matrix4cd hamiltonian(double a, double phi, double comp_a = 0.0,
                               double comp_phi = 0.0) const;
};

// Flat-top envelope with lifted-Gaussian rising/falling edges.  The lift
// makes the envelope start and end exactly at zero.
struct PulseShape {
  double tau_sq = 0.0;          // flat-top duration (s)
  double tau_edge = 28.16e-9;   // edge duration (s)
  double sigma = 14.08e-9;      // Gaussian std of the edges (s)

  double duration() const { return tau_sq + 2.0 * tau_edge; }
  // Envelope value in [0, 1] at time t in [0, duration()].
  double envelope(double t) const;
  // Integral of the envelope over the pulse (s): the effective constant-
  // amplitude duration.
  double effective_area() const;
  // Integral of envelope^3 (s); enters cubic-in-amplitude rates.
  double cubed_area() const;

  void validate() const;
};

// Durations of the composed gate schedule around the echoed pulse pair.
struct ScheduleTiming {
  double single_qubit_overhead = 106.7e-9;  // local gates + echo pulses (s)

  double cr_time(const PulseShape &shape) const { return shape.duration(); }
  double cs_time(const PulseShape &shape) const {
    return 2.0 * shape.duration() + single_qubit_overhead;
  }
};

// Time-ordered evolution of one shaped pulse: each edge is discretized into
// `edge_slices` constant-amplitude segments evaluated at the segment
// midpoint, the flat top contributes a single segment.
Eigen::Matrix4cd evolve_pulse(const CRModel &model, const PulseShape &shape,
                              double amplitude, double phi,
                              const std::optional<CompTone> &comp = {},
                              int edge_slices = 48);

// Two-pulse echo: U = [XI] . U_CR(-A, phi) . [XI] . U_CR(A, phi).
Eigen::Matrix4cd echoed_cr(const CRModel &model, const PulseShape &shape,
                           double amplitude, double phi,
                           const std::optional<CompTone> &comp = {},
                           int edge_slices = 48);

// Controlled-S built from the echoed pulse pair and exact local rotations:
//   [IH] . [IX]_{pi/4} . [ZI]_{pi/4} . (echoed ZX of angle -pi/4) . [IH]
// The -pi/4 echo is realized by playing the calibrated pulse at phi + pi.
// With `inverse`, all rotation angles (local and echoed) are negated,
// yielding the adjoint gate.  No hidden correction is applied: an
// uncalibrated (amplitude, phi) simply produces the corresponding unitary.
Eigen::Matrix4cd cs_schedule(const CRModel &model, const PulseShape &shape,
                             double amplitude, double phi,
                             const std::optional<CompTone> &comp = {},
                             bool inverse = false, int edge_slices = 48);

// Exact [BC]_theta = exp(-i theta/2 B(x)C) helpers used by schedules.
Eigen::Matrix4cd two_qubit_rotation(const Eigen::Matrix2cd &b,
                                    const Eigen::Matrix2cd &c, double theta);

}  // namespace csbench

#endif  // CSBENCH_PULSE_HPP_
