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

#include "csbench/scenarios.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "csbench/channels.hpp"
#include "csbench/io.hpp"
#include "csbench/parallel.hpp"

namespace csbench {

namespace {

// Stage indices feeding derive_seed; stable across versions so archived
// reports replay.
enum StageSeed : uint64_t {
  kSeedCalibration = 1,
  kSeedCrosstalk = 2,
  kSeedCompensation = 3,
  kSeedRb = 4,
  kSeedQptData = 5,
  kSeedQptFit = 6,
};

Eigen::Matrix4cd cs_target() {
  Eigen::Matrix4cd u = Eigen::Matrix4cd::Identity();
  u(3, 3) = std::complex<double>(0.0, 1.0);
  return u;
}

std::string hash_to_hex(uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

uint64_t hash_from_hex(const std::string &s) {
  return std::stoull(s, nullptr, 16);
}

std::string point_filename(size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "point_%02zu.json", index);
  return std::string(buf);
}

std::vector<SurvivalCsvRow> decay_rows(const InterleavedRBResult &rb) {
  std::vector<SurvivalCsvRow> rows;
  const auto add_arm = [&rows](const std::string &protocol,
                               const std::string &input, const RBArm &arm) {
    for (size_t li = 0; li < arm.lengths.size(); ++li) {
      SurvivalCsvRow row;
      row.protocol = protocol;
      row.input = input;
      row.length = arm.lengths[li];
      row.samples = arm.samples[li];
      row.mean = arm.mean[li];
      rows.push_back(std::move(row));
    }
  };
  add_arm("standard", "zeros", rb.reference.computational);
  add_arm("standard", "plus", rb.reference.superposition);
  add_arm("interleaved", "zeros", rb.interleaved.computational);
  add_arm("interleaved", "plus", rb.interleaved.superposition);
  return rows;
}

}  // namespace

std::vector<int> full_length_plan() {
  return {1, 5, 10, 20, 30, 50, 75, 100, 125, 150};
}

std::vector<int> reduced_length_plan() { return {1, 10, 25, 50, 100, 150}; }

std::vector<double> standard_sweep_taus() {
  return {0.0,      10.7e-9,  21.3e-9,  42.7e-9,  64.0e-9,  85.3e-9,
          128.0e-9, 170.7e-9, 213.3e-9, 256.0e-9, 305.8e-9, 355.6e-9};
}

nlohmann::json PointReport::to_json() const {
  return nlohmann::json{
      {"tau_sq_ns", tau_sq_ns},
      {"tau_cs_ns", tau_cs_ns},
      {"seed", seed},
      {"config_hash", hash_to_hex(config_hash)},
      {"status", status},
      {"diagnostic", diagnostic},
      {"amplitude", amplitude},
      {"phase", phase},
      {"calibration_converged", calibration_converged},
      {"amplitude_iterations", amplitude_iterations},
      {"phase_iterations", phase_iterations},
      {"crosstalk_hz", crosstalk_hz},
      {"compensated", compensated},
      {"compensation_residual_hz", compensation_residual_hz},
      {"rb_error", rb_error},
      {"rb_stderr", rb_stderr},
      {"rb_interval_lo", rb_interval_lo},
      {"rb_interval_hi", rb_interval_hi},
      {"rb_alpha", rb_alpha},
      {"rb_alpha_ratio", rb_alpha_ratio},
      {"rb_ordering_ok", rb_ordering_ok},
      {"qpt_error", qpt_error},
      {"qpt_error_corrected", qpt_error_corrected},
      {"qpt_fidelity", qpt_fidelity},
      {"qpt_converged", qpt_converged},
      {"coherence_limit", coherence_limit},
  };
}

PointReport PointReport::from_json(const nlohmann::json &j) {
  PointReport r;
  r.tau_sq_ns = j.at("tau_sq_ns").get<double>();
  r.tau_cs_ns = j.at("tau_cs_ns").get<double>();
  r.seed = j.at("seed").get<uint64_t>();
  r.config_hash = hash_from_hex(j.at("config_hash").get<std::string>());
  r.status = j.at("status").get<std::string>();
  r.diagnostic = j.at("diagnostic").get<std::string>();
  r.amplitude = j.at("amplitude").get<double>();
  r.phase = j.at("phase").get<double>();
  r.calibration_converged = j.at("calibration_converged").get<bool>();
  r.amplitude_iterations = j.at("amplitude_iterations").get<int>();
  r.phase_iterations = j.at("phase_iterations").get<int>();
  r.crosstalk_hz = j.at("crosstalk_hz").get<double>();
  r.compensated = j.at("compensated").get<bool>();
  r.compensation_residual_hz = j.at("compensation_residual_hz").get<double>();
  r.rb_error = j.at("rb_error").get<double>();
  r.rb_stderr = j.at("rb_stderr").get<double>();
  r.rb_interval_lo = j.at("rb_interval_lo").get<double>();
  r.rb_interval_hi = j.at("rb_interval_hi").get<double>();
  r.rb_alpha = j.at("rb_alpha").get<double>();
  r.rb_alpha_ratio = j.at("rb_alpha_ratio").get<double>();
  r.rb_ordering_ok = j.at("rb_ordering_ok").get<bool>();
  r.qpt_error = j.at("qpt_error").get<double>();
  r.qpt_error_corrected = j.at("qpt_error_corrected").get<double>();
  r.qpt_fidelity = j.at("qpt_fidelity").get<double>();
  r.qpt_converged = j.at("qpt_converged").get<bool>();
  r.coherence_limit = j.at("coherence_limit").get<double>();
  return r;
}

PointReport run_point(const DeviceModel &device, double tau_sq,
                      const PointOptions &options, uint64_t seed,
                      PointArtifacts *artifacts) {
  PointReport report;
  const double tau_cs = device.timing().cs_time(device.shape(tau_sq));
  report.tau_sq_ns = tau_sq * 1e9;
  report.tau_cs_ns = tau_cs * 1e9;
  report.seed = seed;
  report.config_hash = device.config_hash();
  report.coherence_limit =
      coherence_limit({device.qubit[0].t1, device.qubit[1].t1},
                      {device.qubit[0].t2, device.qubit[1].t2}, tau_cs);

  const auto fail = [&report](const char *stage, const std::exception &e) {
    report.status = std::string(stage) + "_failed";
    report.diagnostic = e.what();
  };

  CalibrationOptions cal_options;
  cal_options.shots = options.calibration_shots;
  cal_options.threads = options.threads;

  CalibrationResult cal;
  try {
    cal = calibrate_cs(device, tau_sq, cal_options,
                       derive_seed(seed, {kSeedCalibration}));
  } catch (const std::exception &e) {
    fail("calibration", e);
    return report;
  }
  report.amplitude = cal.a1;
  report.phase = cal.phi1;
  report.calibration_converged = cal.converged;
  report.amplitude_iterations = cal.amplitude_loop.iterations;
  report.phase_iterations = cal.phase_loop.iterations;
  if (artifacts) artifacts->calibration = cal;

  try {
    const CrosstalkResult xt =
        xy4_crosstalk(device, tau_sq, cal.a1, cal.phi1, {}, cal_options,
                      derive_seed(seed, {kSeedCrosstalk}));
    report.crosstalk_hz = xt.frequency_hz;
    if (artifacts) artifacts->crosstalk = xt;
  } catch (const std::exception &e) {
    fail("crosstalk", e);
    return report;
  }

  std::optional<CompTone> tone;
  if (options.compensation) {
    try {
      const CompensationResult comp = calibrate_compensation(
          device, tau_sq, cal.a1, cal.phi1, cal_options,
          derive_seed(seed, {kSeedCompensation}));
      tone = comp.tone;
      report.compensated = true;
      report.compensation_residual_hz = comp.residual_hz;
      if (artifacts) artifacts->compensation = comp;
    } catch (const std::exception &e) {
      fail("compensation", e);
      return report;
    }
  }

  try {
    RBConfig rb_config;
    rb_config.lengths =
        options.full_lengths ? full_length_plan() : reduced_length_plan();
    rb_config.samples = options.rb_samples;
    rb_config.shots = options.rb_shots;
    rb_config.threads = options.threads;
    const PulseBackend backend(device, tau_sq, cal.a1, cal.phi1, tone);
    const InterleavedRBResult rb =
        run_interleaved_rb(backend, rb_config, derive_seed(seed, {kSeedRb}));
    report.rb_error = rb.gate_error;
    report.rb_stderr = rb.gate_error_stderr;
    report.rb_interval_lo = rb.interval_low;
    report.rb_interval_hi = rb.interval_high;
    report.rb_alpha = rb.reference.alpha;
    report.rb_alpha_ratio = rb.alpha_ratio;
    report.rb_ordering_ok = rb.ordering_ok;
    if (artifacts) artifacts->rb = rb;
  } catch (const std::exception &e) {
    fail("rb", e);
    return report;
  }

  try {
    QPTOptions qpt_options;
    qpt_options.shots = options.qpt_shots;
    qpt_options.readout_mitigation = options.qpt_mitigation;
    qpt_options.bootstrap_bias_samples = options.qpt_bootstrap;
    qpt_options.threads = options.threads;
    const QuantumChannel gate =
        device.noisy_cs_channel(tau_sq, cal.a1, cal.phi1, tone);
    const TomographyData data = simulate_tomography(
        gate, device, qpt_options, derive_seed(seed, {kSeedQptData}));
    const QPTResult qpt = reconstruct_process(
        data, cs_target(), qpt_options, derive_seed(seed, {kSeedQptFit}));
    report.qpt_error = qpt.gate_error;
    report.qpt_error_corrected = qpt.bias_corrected_gate_error;
    report.qpt_fidelity = qpt.fidelity;
    report.qpt_converged = qpt.converged;
    if (artifacts) artifacts->qpt = qpt;
  } catch (const std::exception &e) {
    fail("qpt", e);
    return report;
  }

  return report;
}

nlohmann::json SweepReport::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const PointReport &p : points) rows.push_back(p.to_json());
  return nlohmann::json{
      {"version", version},
      {"seed", seed},
      {"config_hash", hash_to_hex(config_hash)},
      {"device", device_name},
      {"points", std::move(rows)},
  };
}

SweepReport run_sweep(const DeviceModel &device, const SweepSpec &spec,
                      uint64_t seed) {
  const std::vector<double> taus =
      spec.tau_sq_values.empty() ? standard_sweep_taus() : spec.tau_sq_values;
  if (taus.size() < 2)
    throw std::invalid_argument("sweep needs at least two flat-top widths");

  namespace fs = std::filesystem;
  const bool writing = !spec.output_dir.empty();
  if (writing) fs::create_directories(spec.output_dir);

  SweepReport report;
  report.version = library_version();
  report.seed = seed;
  report.config_hash = device.config_hash();
  report.device_name = device.name;
  report.points.resize(taus.size());

  std::vector<PointArtifacts> artifacts(taus.size());
  std::vector<size_t> missing;
  // plain chars: vector<bool> packs bits and is not safe to write from
  // parallel tasks
  std::vector<char> fresh(taus.size(), 0);
  for (size_t i = 0; i < taus.size(); ++i) {
    const uint64_t point_seed = derive_seed(seed, {uint64_t(i)});
    if (spec.resume && writing) {
      const fs::path path = fs::path(spec.output_dir) / point_filename(i);
      if (fs::exists(path)) {
        try {
          const PointReport loaded =
              PointReport::from_json(read_json_file(path.string()));
          if (loaded.seed == point_seed &&
              loaded.config_hash == report.config_hash) {
            report.points[i] = loaded;
            continue;
          }
        } catch (const std::exception &) {
          // unreadable or stale file: recompute below
        }
      }
    }
    missing.push_back(i);
  }

  parallel_for(missing.size(), spec.options.threads, [&](size_t mi) {
    const size_t i = missing[mi];
    PointOptions options = spec.options;
    options.full_lengths =
        std::abs(taus[i] - spec.deep_dive_tau_sq) < 1e-12;
    report.points[i] =
        run_point(device, taus[i], options, derive_seed(seed, {uint64_t(i)}),
                  writing ? &artifacts[i] : nullptr);
    fresh[i] = 1;
  });

  if (writing) {
    const fs::path dir(spec.output_dir);
    for (size_t i = 0; i < taus.size(); ++i) {
      if (fresh[i])
        write_json_file((dir / point_filename(i)).string(),
                        report.points[i].to_json());
      if (fresh[i] && artifacts[i].rb &&
          std::abs(taus[i] - spec.deep_dive_tau_sq) < 1e-12)
        write_survival_csv((dir / "decay_deep_dive.csv").string(),
                           decay_rows(*artifacts[i].rb));
    }
    write_json_file((dir / "sweep.json").string(), report.to_json());
    std::vector<SweepCsvRow> rows;
    rows.reserve(report.points.size());
    for (const PointReport &p : report.points) {
      SweepCsvRow row;
      row.tau_sq_ns = p.tau_sq_ns;
      row.tau_cs_ns = p.tau_cs_ns;
      row.rb_error = p.rb_error;
      row.rb_stderr = p.rb_stderr;
      row.rb_interval_lo = p.rb_interval_lo;
      row.rb_interval_hi = p.rb_interval_hi;
      row.qpt_error = p.qpt_error;
      row.coherence_limit = p.coherence_limit;
      row.crosstalk_hz = p.crosstalk_hz;
      row.status = p.status;
      rows.push_back(std::move(row));
    }
    write_sweep_csv((dir / "sweep.csv").string(), rows);
  }
  return report;
}

nlohmann::json CompensationComparison::to_json() const {
  return nlohmann::json{
      {"without_tone", without_tone.to_json()},
      {"with_tone", with_tone.to_json()},
      {"difference", difference},
      {"difference_stderr", difference_stderr},
      {"intervals_overlap", intervals_overlap},
      {"compensated_lower", compensated_lower},
  };
}

CompensationComparison compare_compensation(const DeviceModel &device,
                                            double tau_sq,
                                            const PointOptions &options,
                                            uint64_t seed) {
  PointOptions without = options;
  without.compensation = false;
  PointOptions with = options;
  with.compensation = true;

  CompensationComparison cmp;
  cmp.without_tone = run_point(device, tau_sq, without, seed);
  cmp.with_tone = run_point(device, tau_sq, with, seed);

  if (cmp.without_tone.status == "ok" && cmp.with_tone.status == "ok") {
    cmp.difference = cmp.without_tone.rb_error - cmp.with_tone.rb_error;
    cmp.difference_stderr = std::hypot(cmp.without_tone.rb_stderr,
                                       cmp.with_tone.rb_stderr);
    cmp.intervals_overlap =
        std::max(cmp.without_tone.rb_interval_lo,
                 cmp.with_tone.rb_interval_lo) <=
        std::min(cmp.without_tone.rb_interval_hi,
                 cmp.with_tone.rb_interval_hi);
    cmp.compensated_lower = cmp.difference > 2.0 * cmp.difference_stderr;
  }
  return cmp;
}

}  // namespace csbench
