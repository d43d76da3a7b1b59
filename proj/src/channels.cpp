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

#include "csbench/channels.hpp"

#include <cmath>
#include <stdexcept>

#include "csbench/linalg.hpp"

namespace csbench {

namespace {

void check_qubits(int n) {
  if (n < 1 || n > 4)
    throw std::invalid_argument("QuantumChannel: unsupported qubit count " +
                                std::to_string(n));
}

}  // namespace

//=========================================================================
// DensityMatrix
//=========================================================================

DensityMatrix DensityMatrix::computational(int n, int index) {
  return pure(basis_state(n, index));
}

void DensityMatrix::validate(double tol) const {
  if (mat.rows() != mat.cols())
    throw std::invalid_argument("DensityMatrix: not square");
  if (max_abs_diff(mat, mat.adjoint()) > tol)
    throw std::invalid_argument("DensityMatrix: not Hermitian");
  if (std::abs(mat.trace().real() - 1.0) > tol ||
      std::abs(mat.trace().imag()) > tol)
    throw std::invalid_argument("DensityMatrix: trace is not 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mat);
  if (es.eigenvalues().minCoeff() < -tol)
    throw std::invalid_argument("DensityMatrix: negative eigenvalue");
}

//=========================================================================
// QuantumChannel
//=========================================================================

QuantumChannel::QuantumChannel(int n, Eigen::MatrixXcd superop)
    : n_(n), superop_(std::move(superop)) {
  check_qubits(n);
  const int d2 = dim() * dim();
  if (superop_.rows() != d2 || superop_.cols() != d2)
    throw std::invalid_argument("QuantumChannel: superoperator must be " +
                                std::to_string(d2) + "x" + std::to_string(d2));
}

QuantumChannel QuantumChannel::identity(int n) {
  check_qubits(n);
  int d2 = (1 << n) * (1 << n);
  return QuantumChannel(n, Eigen::MatrixXcd::Identity(d2, d2));
}

QuantumChannel QuantumChannel::from_unitary(const Eigen::MatrixXcd &u) {
  if (!is_unitary(u, 1e-10))
    throw std::invalid_argument("from_unitary: matrix is not unitary");
  int d = int(u.rows());
  int n = 0;
  while ((1 << n) < d) ++n;
  if ((1 << n) != d)
    throw std::invalid_argument("from_unitary: dimension is not a power of 2");
  return QuantumChannel(n, kron(u.conjugate(), u));
}

QuantumChannel QuantumChannel::from_kraus(
    int n, const std::vector<Eigen::MatrixXcd> &ks) {
  check_qubits(n);
  const int d = 1 << n;
  if (ks.empty()) throw std::invalid_argument("from_kraus: empty Kraus set");
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(d * d, d * d);
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
  for (const auto &k : ks) {
    if (k.rows() != d || k.cols() != d)
      throw std::invalid_argument("from_kraus: operator dimension mismatch");
    s += kron(k.conjugate(), k);
    sum += k.adjoint() * k;
  }
  if (max_abs_diff(sum, Eigen::MatrixXcd::Identity(d, d)) > 1e-8)
    throw std::invalid_argument("from_kraus: Kraus set is not trace preserving");
  return QuantumChannel(n, std::move(s));
}

Eigen::MatrixXcd QuantumChannel::choi() const {
  const int d = dim();
  Eigen::MatrixXcd c(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int m = 0; m < d; ++m)
        for (int nn = 0; nn < d; ++nn)
          c(i * d + m, j * d + nn) = superop_(m + d * nn, i + d * j);
  return c;
}

QuantumChannel QuantumChannel::from_choi(int n, const Eigen::MatrixXcd &choi) {
  check_qubits(n);
  const int d = 1 << n;
  if (choi.rows() != d * d || choi.cols() != d * d)
    throw std::invalid_argument("from_choi: dimension mismatch");
  Eigen::MatrixXcd s(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int m = 0; m < d; ++m)
        for (int nn = 0; nn < d; ++nn)
          s(m + d * nn, i + d * j) = choi(i * d + m, j * d + nn);
  return QuantumChannel(n, std::move(s));
}

QuantumChannel QuantumChannel::depolarizing(int n, double alpha) {
  check_qubits(n);
  const int d = 1 << n;
  const double lo = -1.0 / (d * d - 1.0);
  if (alpha < lo - 1e-12 || alpha > 1.0 + 1e-12)
    throw std::invalid_argument("depolarizing: alpha out of CPTP range");
  Eigen::MatrixXcd s =
      alpha * Eigen::MatrixXcd::Identity(d * d, d * d);
  Eigen::VectorXcd vec_id = Eigen::VectorXcd::Zero(d * d);
  for (int k = 0; k < d; ++k) vec_id(k + d * k) = 1.0;
  s += ((1.0 - alpha) / d) * (vec_id * vec_id.transpose());
  return QuantumChannel(n, std::move(s));
}

QuantumChannel QuantumChannel::damping(double t, double t1, double t2) {
  if (t < 0) throw std::invalid_argument("damping: negative duration");
  if (!(t1 > 0) || !(t2 > 0))
    throw std::invalid_argument("damping: T1 and T2 must be positive");
  if (!std::isinf(t1) && t2 > 2.0 * t1 + 1e-12 * t1)
    throw std::invalid_argument("damping: T2 > 2*T1 is unphysical");
  const double gamma = std::isinf(t1) ? 0.0 : -std::expm1(-t / t1);
  const double rate2 = std::isinf(t2) ? 0.0 : 1.0 / t2;
  const double rate1 = std::isinf(t1) ? 0.0 : 0.5 / t1;
  const double dephase = rate2 - rate1;  // >= 0 given t2 <= 2*t1
  const double lambda = std::exp(-t * std::max(dephase, 0.0));
  const double pz = 0.5 * (1.0 - lambda);
  Eigen::Matrix2cd k0, k1, d1;
  k0 << 1, 0, 0, std::sqrt(1.0 - gamma);
  k1 << 0, std::sqrt(gamma), 0, 0;
  d1 << 1, 0, 0, -1;
  std::vector<Eigen::MatrixXcd> ks;
  for (const Eigen::Matrix2cd &amp : {k0, k1}) {
    ks.push_back(std::sqrt(1.0 - pz) * amp);
    ks.push_back(std::sqrt(pz) * (d1 * amp));
  }
  return from_kraus(1, ks);
}

QuantumChannel QuantumChannel::compose(const QuantumChannel &rhs) const {
  if (n_ != rhs.n_)
    throw std::invalid_argument("compose: qubit count mismatch");
  return QuantumChannel(n_, superop_ * rhs.superop_);
}

QuantumChannel QuantumChannel::tensor(const QuantumChannel &other) const {
  const int da = dim(), db = other.dim();
  const int d = da * db;
  if (n_ + other.n_ > 4)
    throw std::invalid_argument("tensor: combined qubit count too large");
  Eigen::MatrixXcd s(d * d, d * d);
  // Column-stacking vec does not factor across subsystems directly; map
  // composite indices (row, col) = (ma*db + mb, na*db + nb) explicitly.
  for (int ma = 0; ma < da; ++ma)
    for (int mb = 0; mb < db; ++mb)
      for (int na = 0; na < da; ++na)
        for (int nb = 0; nb < db; ++nb) {
          int row = (ma * db + mb) + d * (na * db + nb);
          for (int ia = 0; ia < da; ++ia)
            for (int ib = 0; ib < db; ++ib)
              for (int ja = 0; ja < da; ++ja)
                for (int jb = 0; jb < db; ++jb) {
                  int col = (ia * db + ib) + d * (ja * db + jb);
                  s(row, col) = superop_(ma + da * na, ia + da * ja) *
                                other.superop_(mb + db * nb, ib + db * jb);
                }
        }
  return QuantumChannel(n_ + other.n_, std::move(s));
}

Eigen::MatrixXcd QuantumChannel::apply(const Eigen::MatrixXcd &rho) const {
  const int d = dim();
  if (rho.rows() != d || rho.cols() != d)
    throw std::invalid_argument("apply: state dimension mismatch");
  Eigen::VectorXcd v(d * d);
  for (int c = 0; c < d; ++c) v.segment(c * d, d) = rho.col(c);
  Eigen::VectorXcd w = superop_ * v;
  Eigen::MatrixXcd out(d, d);
  for (int c = 0; c < d; ++c) out.col(c) = w.segment(c * d, d);
  return out;
}

bool QuantumChannel::is_trace_preserving(double tol) const {
  const int d = dim();
  // Tr Lambda(|i><j|) = delta_ij  <=>  sum_m S(m + d*m, i + d*j) = delta_ij.
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      complex_t acc = 0;
      for (int m = 0; m < d; ++m) acc += superop_(m + d * m, i + d * j);
      if (std::abs(acc - (i == j ? 1.0 : 0.0)) > tol) return false;
    }
  return true;
}

double QuantumChannel::choi_min_eigenvalue() const {
  Eigen::MatrixXcd c = choi();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      0.5 * (c + c.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool QuantumChannel::is_identity(double tol) const {
  const int d2 = dim() * dim();
  return max_abs_diff(superop_, Eigen::MatrixXcd::Identity(d2, d2)) < tol;
}

//=========================================================================
// Readout
//=========================================================================

ReadoutModel ReadoutModel::ideal(int n) {
  return {Eigen::MatrixXd::Identity(1 << n, 1 << n)};
}

ReadoutModel ReadoutModel::per_qubit_flips(
    const std::vector<std::pair<double, double>> &flips) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(1, 1);
  for (auto [p01, p10] : flips) {
    if (p01 < 0 || p01 > 1 || p10 < 0 || p10 > 1)
      throw std::invalid_argument("per_qubit_flips: probability out of range");
    Eigen::MatrixXd m(2, 2);
    m << 1 - p01, p10, p01, 1 - p10;
    Eigen::MatrixXd next(a.rows() * 2, a.cols() * 2);
    for (int i = 0; i < a.rows(); ++i)
      for (int j = 0; j < a.cols(); ++j)
        next.block(i * 2, j * 2, 2, 2) = a(i, j) * m;
    a = next;
  }
  return {a};
}

void ReadoutModel::validate(double tol) const {
  if (assignment.rows() != assignment.cols())
    throw std::invalid_argument("ReadoutModel: matrix not square");
  if (assignment.minCoeff() < -tol)
    throw std::invalid_argument("ReadoutModel: negative entry");
  for (int j = 0; j < assignment.cols(); ++j)
    if (std::abs(assignment.col(j).sum() - 1.0) > tol)
      throw std::invalid_argument("ReadoutModel: column " + std::to_string(j) +
                                  " does not sum to 1");
}

std::vector<double> ReadoutModel::distort(
    const std::vector<double> &probs) const {
  if (int(probs.size()) != assignment.cols())
    throw std::invalid_argument("distort: dimension mismatch");
  std::vector<double> out(probs.size(), 0.0);
  for (int i = 0; i < assignment.rows(); ++i)
    for (int j = 0; j < assignment.cols(); ++j)
      out[i] += assignment(i, j) * probs[j];
  return out;
}

std::vector<long long> measure_counts(const Eigen::MatrixXcd &rho,
                                      const ReadoutModel &readout, int shots,
                                      std::mt19937_64 &rng) {
  if (shots <= 0) throw std::invalid_argument("measure_counts: shots must be > 0");
  const int d = int(rho.rows());
  if (readout.outcomes() != d)
    throw std::invalid_argument("measure_counts: readout dimension mismatch");
  std::vector<double> probs(d);
  double total = 0;
  for (int i = 0; i < d; ++i) {
    double p = rho(i, i).real();
    if (p < 1e-12) p = 0.0;  // numerical floor
    probs[i] = p;
    total += p;
  }
  if (total <= 0) throw std::invalid_argument("measure_counts: state has no weight");
  for (double &p : probs) p /= total;
  probs = readout.distort(probs);

  std::vector<long long> counts(d, 0);
  for (int s = 0; s < shots; ++s) {
    // 53-bit uniform in [0,1); portable given the fixed engine.
    double u = double(rng() >> 11) * 0x1.0p-53;
    double acc = 0;
    int outcome = d - 1;
    for (int i = 0; i < d; ++i) {
      acc += probs[i];
      if (u < acc) {
        outcome = i;
        break;
      }
    }
    ++counts[outcome];
  }
  return counts;
}

//=========================================================================
// Metrics
//=========================================================================

double process_fidelity(const QuantumChannel &actual,
                        const Eigen::MatrixXcd &target_unitary) {
  const int d = actual.dim();
  if (target_unitary.rows() != d || target_unitary.cols() != d)
    throw std::invalid_argument("process_fidelity: dimension mismatch");
  if (!is_unitary(target_unitary, 1e-8))
    throw std::invalid_argument("process_fidelity: target is not unitary");
  // F_pro = <w| C |w> / d^2 with w[i*d + m] = V(m, i).
  Eigen::MatrixXcd c = actual.choi();
  Eigen::VectorXcd w(d * d);
  for (int i = 0; i < d; ++i)
    for (int m = 0; m < d; ++m) w(i * d + m) = target_unitary(m, i);
  complex_t f = w.adjoint() * c * w;
  return f.real() / double(d) / double(d);
}

double average_gate_error(const QuantumChannel &actual,
                          const Eigen::MatrixXcd &target_unitary) {
  const double d = actual.dim();
  double fpro = process_fidelity(actual, target_unitary);
  return 1.0 - (d * fpro + 1.0) / (d + 1.0);
}

double coherence_limit(const std::vector<double> &t1s,
                       const std::vector<double> &t2s, double gate_time) {
  if (t1s.empty() || t1s.size() != t2s.size())
    throw std::invalid_argument("coherence_limit: need matching T1/T2 lists");
  QuantumChannel total = QuantumChannel::damping(gate_time, t1s[0], t2s[0]);
  for (size_t q = 1; q < t1s.size(); ++q)
    total = total.tensor(QuantumChannel::damping(gate_time, t1s[q], t2s[q]));
  const int d = total.dim();
  return average_gate_error(total, Eigen::MatrixXcd::Identity(d, d));
}

}  // namespace csbench
