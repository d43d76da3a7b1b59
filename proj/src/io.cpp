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

#include "csbench/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "csbench/linalg.hpp"

namespace csbench {

namespace {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::vector<uint8_t> bits_from_json(const json &j, const char *what) {
  if (!j.is_array())
    throw std::invalid_argument(std::string("element json: ") + what +
                                " must be an array");
  std::vector<uint8_t> out;
  for (const auto &v : j) out.push_back(uint8_t(v.get<int>()));
  return out;
}

}  // namespace

std::string library_version() { return "0.1.0"; }

uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

json element_to_json(const DihedralElement &e) {
  const int n = e.qubits();
  json linear = json::array();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) linear.push_back(int(e.linear(i, j)));
  json shift = json::array();
  json phase = json::array();
  for (int i = 0; i < n; ++i) {
    shift.push_back(int(e.shift(i)));
    phase.push_back(int(e.phase_linear(i)));
  }
  return json{{"qubits", n},
              {"linear", linear},
              {"shift", shift},
              {"phase_linear", phase},
              {"phase_quadratic", int(e.phase_quadratic())}};
}

DihedralElement element_from_json(const json &j) {
  if (!j.contains("qubits"))
    throw std::invalid_argument("element json: missing qubits");
  const int n = j.at("qubits").get<int>();
  return DihedralElement::from_canonical(
      n, bits_from_json(j.at("linear"), "linear"),
      bits_from_json(j.at("shift"), "shift"),
      bits_from_json(j.at("phase_linear"), "phase_linear"),
      uint8_t(j.value("phase_quadratic", 0)));
}

json channel_to_json(const QuantumChannel &ch) {
  const auto &s = ch.superop();
  json rows = json::array();
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < s.cols(); ++k) {
      row.push_back(json::array({s(i, k).real(), s(i, k).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return json{{"qubits", ch.qubits()},
              {"representation", "superoperator"},
              {"vectorization", "column-stacking"},
              {"matrix", rows}};
}

QuantumChannel channel_from_json(const json &j) {
  const int n = j.at("qubits").get<int>();
  if (j.value("representation", "superoperator") != "superoperator")
    throw std::invalid_argument("channel json: unknown representation");
  if (j.value("vectorization", "column-stacking") != "column-stacking")
    throw std::invalid_argument("channel json: unknown vectorization");
  const auto &rows = j.at("matrix");
  const Eigen::Index dim2 = Eigen::Index(1) << (2 * n);
  if (Eigen::Index(rows.size()) != dim2)
    throw std::invalid_argument("channel json: matrix has wrong row count");
  Eigen::MatrixXcd s(dim2, dim2);
  for (Eigen::Index i = 0; i < dim2; ++i) {
    const auto &row = rows.at(size_t(i));
    if (Eigen::Index(row.size()) != dim2)
      throw std::invalid_argument("channel json: matrix has wrong col count");
    for (Eigen::Index k = 0; k < dim2; ++k) {
      const auto &entry = row.at(size_t(k));
      s(i, k) = complex_t(entry.at(0).get<double>(),
                          entry.at(1).get<double>());
    }
  }
  return QuantumChannel(n, std::move(s));
}

void write_survival_csv(const std::string &path,
                        const std::vector<SurvivalCsvRow> &rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  size_t max_samples = 0;
  for (const auto &r : rows) max_samples = std::max(max_samples, r.samples.size());
  out << "protocol,input,length,mean";
  for (size_t k = 0; k < max_samples; ++k) out << ",sample_" << k;
  out << "\n";
  for (const auto &r : rows) {
    out << r.protocol << "," << r.input << "," << r.length << ","
        << format_double(r.mean);
    for (size_t k = 0; k < max_samples; ++k) {
      out << ",";
      if (k < r.samples.size()) out << format_double(r.samples[k]);
    }
    out << "\n";
  }
}

void write_sweep_csv(const std::string &path,
                     const std::vector<SweepCsvRow> &rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "tau_sq_ns,tau_cs_ns,rb_error,rb_stderr,rb_interval_lo,"
         "rb_interval_hi,qpt_error,coherence_limit,crosstalk_hz,status\n";
  for (const auto &r : rows) {
    out << format_double(r.tau_sq_ns) << "," << format_double(r.tau_cs_ns)
        << "," << format_double(r.rb_error) << ","
        << format_double(r.rb_stderr) << ","
        << format_double(r.rb_interval_lo) << ","
        << format_double(r.rb_interval_hi) << ","
        << format_double(r.qpt_error) << ","
        << format_double(r.coherence_limit) << ","
        << format_double(r.crosstalk_hz) << "," << r.status << "\n";
  }
}

void write_xy_csv(const std::string &path, const std::string &x_label,
                  const std::string &y_label,
                  const std::vector<std::pair<double, double>> &rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << x_label << "," << y_label << "\n";
  for (const auto &[x, y] : rows) {
    out << format_double(x) << "," << format_double(y) << "\n";
  }
}

void write_json_file(const std::string &path, const json &j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
}

json read_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error &e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return j;
}

void append_jsonl(const std::string &path, const json &record) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot open for appending: " + path);
  out << record.dump() << "\n";
}

}  // namespace csbench
