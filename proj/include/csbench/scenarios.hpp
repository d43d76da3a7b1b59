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

#ifndef CSBENCH_SCENARIOS_HPP_
#define CSBENCH_SCENARIOS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "csbench/calibration.hpp"
#include "csbench/device.hpp"
#include "csbench/qpt.hpp"
#include "csbench/rb.hpp"

namespace csbench {

// End-to-end characterization of one working point: calibrate the CS
// schedule, estimate residual crosstalk, benchmark the calibrated gate
// (interleaved decay), tomograph it, and compute the coherence floor of
// the schedule duration.  A sweep repeats the point across flat-top
// widths and emits plot-ready tables.

// Sequence-length plans: the full plan for the deep-dive point, the
// reduced plan for ordinary sweep points.
std::vector<int> full_length_plan();
std::vector<int> reduced_length_plan();

// The default flat-top grid of the duration sweep (seconds).
std::vector<double> standard_sweep_taus();

struct PointOptions {
  int rb_samples = 10;
  int rb_shots = 1024;
  bool full_lengths = false;  // run_sweep sets this for the deep-dive point
  int calibration_shots = 1024;
  int qpt_shots = 4096;
  bool qpt_mitigation = true;
  // Bootstrap replicates for the de-biased tomography error; 0 keeps the
  // raw (hardware-convention) estimate only.
  int qpt_bootstrap = 0;
  bool compensation = false;  // calibrate and apply the crosstalk tone
  int threads = 0;
};

// Flat per-point record; everything a sweep row or replay needs.  Times
// are reported in nanoseconds, rates in hertz.
struct PointReport {
  double tau_sq_ns = 0.0;
  double tau_cs_ns = 0.0;
  uint64_t seed = 0;
  uint64_t config_hash = 0;
  std::string status = "ok";  // or "<stage>_failed"
  std::string diagnostic;     // failure message when status != ok

  double amplitude = 0.0;  // calibrated drive amplitude
  double phase = 0.0;      // calibrated drive phase (rad)
  bool calibration_converged = false;
  int amplitude_iterations = 0;
  int phase_iterations = 0;

  double crosstalk_hz = 0.0;
  bool compensated = false;
  double compensation_residual_hz = 0.0;  // only meaningful when compensated

  double rb_error = 0.0;
  double rb_stderr = 0.0;
  double rb_interval_lo = 0.0;
  double rb_interval_hi = 0.0;
  double rb_alpha = 0.0;        // reference decay
  double rb_alpha_ratio = 0.0;  // interleaved / reference
  bool rb_ordering_ok = false;

  double qpt_error = 0.0;            // raw constrained-fit estimate
  double qpt_error_corrected = 0.0;  // de-biased when qpt_bootstrap > 0
  double qpt_fidelity = 0.0;
  bool qpt_converged = false;

  double coherence_limit = 0.0;

  nlohmann::json to_json() const;
  static PointReport from_json(const nlohmann::json &j);
};

// Full stage outputs of a fresh run, for callers that need more than the
// flat record (decay curves, scan traces).  Stages after a failure stay
// empty.
struct PointArtifacts {
  std::optional<CalibrationResult> calibration;
  std::optional<CrosstalkResult> crosstalk;
  std::optional<CompensationResult> compensation;
  std::optional<InterleavedRBResult> rb;
  std::optional<QPTResult> qpt;
};

// Runs the strict stage order calibrate -> crosstalk -> (compensation) ->
// interleaved RB -> tomography; the coherence floor is computed up front.
// A stage that throws marks the report "<stage>_failed" with the message
// and the remaining stages are skipped.
PointReport run_point(const DeviceModel &device, double tau_sq,
                      const PointOptions &options, uint64_t seed,
                      PointArtifacts *artifacts = nullptr);

struct SweepSpec {
  std::vector<double> tau_sq_values;  // empty: standard_sweep_taus()
  double deep_dive_tau_sq = 21.3e-9;  // full lengths + decay table here
  PointOptions options;
  std::string output_dir;  // empty: in-memory only, no files
  bool resume = false;     // reuse point_NN.json files already present
};

struct SweepReport {
  std::string version;
  uint64_t seed = 0;
  uint64_t config_hash = 0;
  std::string device_name;
  std::vector<PointReport> points;

  nlohmann::json to_json() const;
};

// Characterizes every flat-top width in the spec.  Points run
// independently (parallel across missing points when options.threads
// allows); file output is serialized afterwards: point_NN.json per point,
// sweep.json + sweep.csv aggregates, and the deep-dive decay table
// decay_deep_dive.csv.  With resume, readable point files whose seed and
// config hash match are trusted and not recomputed.
SweepReport run_sweep(const DeviceModel &device, const SweepSpec &spec,
                      uint64_t seed);

// Paired with/without-compensation benchmark at one working point (both
// runs share the point seed, so a no-op tone reproduces the uncompensated
// result sample for sample).
struct CompensationComparison {
  PointReport without_tone;
  PointReport with_tone;
  double difference = 0.0;         // without - with
  double difference_stderr = 0.0;  // quadrature of the two RB stderrs
  bool intervals_overlap = true;   // systematic-bound intervals intersect
  bool compensated_lower = false;  // difference exceeds twice its stderr

  nlohmann::json to_json() const;
};

CompensationComparison compare_compensation(const DeviceModel &device,
                                            double tau_sq,
                                            const PointOptions &options,
                                            uint64_t seed);

}  // namespace csbench

#endif  // CSBENCH_SCENARIOS_HPP_
