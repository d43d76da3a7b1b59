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
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "csbench/device.hpp"
#include "support/paths.hpp"

namespace csbench {
namespace {

namespace fs = std::filesystem;
using testsupport::config_path;

const DeviceModel &noiseless() {
  static const DeviceModel dev =
      DeviceModel::load(config_path("noiseless.json"));
  return dev;
}

const DeviceModel &damping_only() {
  static const DeviceModel dev =
      DeviceModel::load(config_path("damping_only.json"));
  return dev;
}

const DeviceModel &anchored() {
  static const DeviceModel dev =
      DeviceModel::load(config_path("hardware_baseline.json"));
  return dev;
}

// The anchored device with its local crosstalk coefficients scaled, to put
// the compensation tone in a regime where it must matter.
DeviceModel crosstalk_scaled(double factor) {
  nlohmann::json j = anchored().to_json();
  j["cr"]["gi_linear_mhz"] = factor * j["cr"]["gi_linear_mhz"].get<double>();
  j["cr"]["gi_cubic_mhz"] = factor * j["cr"]["gi_cubic_mhz"].get<double>();
  return DeviceModel::from_json(j);
}

PointOptions exact_point() {
  PointOptions opt;
  opt.rb_shots = 0;
  opt.calibration_shots = 0;
  opt.qpt_shots = 0;
  return opt;
}

int count_lines(const fs::path &p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  int n = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++n;
  return n;
}

nlohmann::json read_json(const fs::path &p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  nlohmann::json j;
  in >> j;
  return j;
}

void write_json(const fs::path &p, const nlohmann::json &j) {
  std::ofstream out(p);
  REQUIRE(out.good());
  out << j.dump(2) << '\n';
}

}  // namespace

TEST_CASE("a noiseless device characterizes to exact zeros") {
  PointArtifacts art;
  const PointReport r = run_point(noiseless(), 21.3e-9, exact_point(), 7, &art);

  CHECK(r.status == "ok");
  CHECK(r.calibration_converged);
  CHECK(r.rb_error == 0.0);
  CHECK(r.rb_alpha == 1.0);
  CHECK(r.coherence_limit == 0.0);  // infinite T1/T2
  CHECK(r.crosstalk_hz == 0.0);
  CHECK(r.qpt_error < 1e-8);
  CHECK(r.qpt_converged);
  CHECK(!r.compensated);
  CHECK(r.tau_cs_ns == doctest::Approx(2 * (21.3 + 2 * 28.16) + 106.7));

  CHECK(art.calibration.has_value());
  CHECK(art.crosstalk.has_value());
  CHECK(art.rb.has_value());
  CHECK(art.qpt.has_value());
  CHECK(!art.compensation.has_value());
}

TEST_CASE("damping alone drives the benchmark onto the coherence floor") {
  const PointReport r = run_point(damping_only(), 21.3e-9, PointOptions{}, 7);

  CHECK(r.status == "ok");
  CHECK(r.coherence_limit > 3e-3);
  CHECK(r.rb_error > 0.0);
  // Pure damping leaves nothing but the decoherence floor, so the estimate
  // must land on the analytic limit within its statistical resolution.
  CHECK(std::abs(r.rb_error - r.coherence_limit) <
        std::max(3.0 * r.rb_stderr, 5e-4));
  CHECK(r.qpt_error > 0.0);
}

TEST_CASE("a sweep is ordered, resumable and trusts matching point files") {
  const fs::path dir = fs::temp_directory_path() / "csbench_scenarios_sweep";
  fs::remove_all(dir);

  SweepSpec spec;
  spec.tau_sq_values = {21.3e-9, 355.6e-9};
  spec.output_dir = dir.string();
  const SweepReport rep = run_sweep(anchored(), spec, 11);

  REQUIRE(rep.points.size() == 2);
  for (const PointReport &p : rep.points) {
    CHECK(p.status == "ok");
    CHECK(p.seed != 0);
    CHECK(p.config_hash == rep.config_hash);
  }

  SUBCASE("longer schedules cost more coherence and the probes agree") {
    CHECK(rep.points[0].coherence_limit < rep.points[1].coherence_limit);
    CHECK(rep.points[0].rb_error < rep.points[1].rb_error);
    // Tomography carries SPAM and estimator overhead on top of the gate
    // error, so it reads at or above the benchmark at both widths.
    CHECK(rep.points[0].qpt_error > rep.points[0].rb_error);
    CHECK(rep.points[1].qpt_error > rep.points[1].rb_error);
    // The wide point reproduces the slow-crosstalk endpoint of the device
    // recipe (19.4 kHz) within the estimator tolerance.
    CHECK(rep.points[1].crosstalk_hz ==
          doctest::Approx(19.4e3).epsilon(0.10));
  }

  SUBCASE("the output directory carries the full artifact set") {
    CHECK(fs::exists(dir / "point_00.json"));
    CHECK(fs::exists(dir / "point_01.json"));
    CHECK(fs::exists(dir / "sweep.json"));
    CHECK(count_lines(dir / "sweep.csv") == 3);  // header + one row per point
    // The deep-dive point runs the full ten-length plan for four decay arms.
    CHECK(count_lines(dir / "decay_deep_dive.csv") == 1 + 4 * 10);

    const nlohmann::json sweep = read_json(dir / "sweep.json");
    CHECK(sweep.at("seed").get<uint64_t>() == 11);
    CHECK(sweep.at("points").size() == 2);
    CHECK(sweep.at("config_hash").is_string());
  }

  SUBCASE("replay and resume are byte-identical") {
    const SweepReport replay = run_sweep(anchored(), spec, 11);
    CHECK(replay.to_json().dump() == rep.to_json().dump());

    SweepSpec resumed = spec;
    resumed.resume = true;
    const SweepReport res = run_sweep(anchored(), resumed, 11);
    CHECK(res.to_json().dump() == rep.to_json().dump());
  }

  SUBCASE("resume trusts a matching file and recomputes a mismatched one") {
    // A doctored value inside a point file whose seed and config hash still
    // match must be carried through verbatim: resume trusts those files.
    nlohmann::json doctored = read_json(dir / "point_00.json");
    doctored["rb_error"] = 0.5;
    write_json(dir / "point_00.json", doctored);

    SweepSpec resumed = spec;
    resumed.resume = true;
    const SweepReport trusting = run_sweep(anchored(), resumed, 11);
    CHECK(trusting.points[0].rb_error == 0.5);

    // Breaking the recorded config hash invalidates the file and the point
    // is recomputed from scratch.
    doctored["config_hash"] = "00000000deadbeef";
    write_json(dir / "point_00.json", doctored);
    const SweepReport recomputed = run_sweep(anchored(), resumed, 11);
    CHECK(recomputed.points[0].rb_error == rep.points[0].rb_error);
  }

  fs::remove_all(dir);
}

TEST_CASE("a sweep needs at least two widths") {
  SweepSpec spec;
  spec.tau_sq_values = {21.3e-9};
  CHECK_THROWS_AS(run_sweep(anchored(), spec, 1), std::invalid_argument);
}

TEST_CASE("a dead drive fails the point at calibration with a diagnostic") {
  nlohmann::json j = anchored().to_json();
  j["cr"]["gz_linear_mhz"] = 0.0;
  j["cr"]["gz_cubic_mhz"] = 0.0;
  const DeviceModel dead = DeviceModel::from_json(j);

  PointOptions opt;
  opt.calibration_shots = 0;
  const PointReport r = run_point(dead, 21.3e-9, opt, 3);

  CHECK(r.status == "calibration_failed");
  CHECK(r.diagnostic.find("rough amplitude scan is flat") != std::string::npos);
  // Later stages never ran.
  CHECK(r.rb_error == 0.0);
  CHECK(r.qpt_error == 0.0);
  CHECK(r.crosstalk_hz == 0.0);
  // The coherence floor only needs T1/T2 and is still reported.
  CHECK(r.coherence_limit > 0.0);
}

TEST_CASE("the paired comparison is a no-op without crosstalk") {
  const CompensationComparison cmp =
      compare_compensation(damping_only(), 0.0, PointOptions{}, 5);

  CHECK(cmp.without_tone.status == "ok");
  CHECK(cmp.with_tone.status == "ok");
  // No measurable local term: the calibrated tone is identically zero and
  // the paired seeds make the two arms the same experiment.
  CHECK(cmp.difference == 0.0);
  CHECK(cmp.with_tone.rb_error == cmp.without_tone.rb_error);
  CHECK(cmp.intervals_overlap);
  CHECK(!cmp.compensated_lower);
}

TEST_CASE("the compensation tone wins once the local term dominates") {
  const DeviceModel hot = crosstalk_scaled(3.0);  // ~527 kHz at zero width
  PointOptions opt;
  opt.rb_samples = 20;
  opt.rb_shots = 2048;
  const CompensationComparison cmp = compare_compensation(hot, 0.0, opt, 5);

  CHECK(cmp.without_tone.status == "ok");
  CHECK(cmp.with_tone.status == "ok");
  CHECK(cmp.without_tone.crosstalk_hz > 500e3);
  CHECK(cmp.with_tone.compensated);
  CHECK(cmp.with_tone.compensation_residual_hz < 10e3);
  CHECK(cmp.with_tone.rb_error < cmp.without_tone.rb_error);
  // The separation is strict: the difference clears twice its own error.
  CHECK(cmp.compensated_lower);
  CHECK(cmp.difference > 2.0 * cmp.difference_stderr);
}

TEST_CASE("the anchored device at zero width sits in the paper's decade") {
  const CompensationComparison cmp =
      compare_compensation(anchored(), 0.0, PointOptions{}, 7);

  CHECK(cmp.without_tone.status == "ok");
  CHECK(cmp.with_tone.status == "ok");
  CHECK(cmp.without_tone.crosstalk_hz == doctest::Approx(176.2e3).epsilon(0.05));
  for (const PointReport *p : {&cmp.without_tone, &cmp.with_tone}) {
    // Order of magnitude 1e-2: log10 rounds to -2.
    const double decade = std::round(std::log10(p->rb_error));
    CHECK(decade == -2.0);
  }
}

TEST_CASE("point reports survive a JSON round trip") {
  PointReport r;
  r.tau_sq_ns = 21.3;
  r.tau_cs_ns = 261.94;
  r.seed = 12345;
  r.config_hash = 0xabcdef0123456789ull;
  r.status = "qpt_failed";
  r.diagnostic = "tomography: not enough circuits";
  r.amplitude = 0.40874;
  r.phase = -0.39437;
  r.calibration_converged = true;
  r.amplitude_iterations = 4;
  r.phase_iterations = 3;
  r.crosstalk_hz = 176.2e3;
  r.compensated = true;
  r.compensation_residual_hz = 1832.0;
  r.rb_error = 5.9e-3;
  r.rb_stderr = 5.1e-4;
  r.rb_interval_lo = 0.0;
  r.rb_interval_hi = 3.4e-2;
  r.rb_alpha = 0.9874;
  r.rb_alpha_ratio = 0.9921;
  r.rb_ordering_ok = true;
  r.qpt_error = 1.12e-2;
  r.qpt_error_corrected = 1.02e-2;
  r.qpt_fidelity = 0.986;
  r.qpt_converged = true;
  r.coherence_limit = 4.19e-3;

  const nlohmann::json j = r.to_json();
  const PointReport back = PointReport::from_json(j);
  CHECK(back.to_json().dump() == j.dump());
  CHECK(back.config_hash == r.config_hash);
  CHECK(back.seed == r.seed);

  // Records missing a field are rejected rather than silently defaulted.
  nlohmann::json crippled = j;
  crippled.erase("rb_error");
  CHECK_THROWS(PointReport::from_json(crippled));
}

}  // namespace csbench
