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

#ifndef CSBENCH_IO_HPP_
#define CSBENCH_IO_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "csbench/channels.hpp"
#include "csbench/group.hpp"

namespace csbench {

// Semantic version of the library; embedded in every result artifact.
std::string library_version();

// 64-bit FNV-1a; used to fingerprint canonicalized configuration text so
// results can be traced back to the exact device description.
uint64_t fnv1a64(std::string_view s);

// Group-element serialization: qubit count, row-major GF(2) linear part,
// shift bits, per-qubit phase coefficients (mod 8) and the even quadratic
// coefficient.
nlohmann::json element_to_json(const DihedralElement &e);
DihedralElement element_from_json(const nlohmann::json &j);

// Channel serialization: the superoperator matrix with an explicit
// vectorization tag so readers cannot misinterpret the layout.
nlohmann::json channel_to_json(const QuantumChannel &ch);
QuantumChannel channel_from_json(const nlohmann::json &j);

// One decay-curve row: a sequence length with its per-sample survivals.
struct SurvivalCsvRow {
  std::string protocol;  // "standard" | "interleaved"
  std::string input;     // "zeros" | "plus"
  int length = 0;
  std::vector<double> samples;
  double mean = 0.0;
};
void write_survival_csv(const std::string &path,
                        const std::vector<SurvivalCsvRow> &rows);

// One sweep-point row of the error-vs-duration comparison.
struct SweepCsvRow {
  double tau_sq_ns = 0.0;
  double tau_cs_ns = 0.0;
  double rb_error = 0.0;
  double rb_stderr = 0.0;
  double rb_interval_lo = 0.0;
  double rb_interval_hi = 0.0;
  double qpt_error = 0.0;
  double coherence_limit = 0.0;
  double crosstalk_hz = 0.0;
  std::string status;
};
void write_sweep_csv(const std::string &path,
                     const std::vector<SweepCsvRow> &rows);

// Generic two-column scan export (calibration curves and similar).
void write_xy_csv(const std::string &path, const std::string &x_label,
                  const std::string &y_label,
                  const std::vector<std::pair<double, double>> &rows);

// Whole-file JSON helpers with path-qualified error messages.
void write_json_file(const std::string &path, const nlohmann::json &j);
nlohmann::json read_json_file(const std::string &path);

// Appends one record per line (JSON Lines event logs).
void append_jsonl(const std::string &path, const nlohmann::json &record);

}  // namespace csbench

#endif  // CSBENCH_IO_HPP_
