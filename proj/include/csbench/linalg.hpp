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

#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace csbench {

using complex_t = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

//=========================================================================
// Small dense-matrix helpers shared across modules
//=========================================================================

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd &a,
                             const Eigen::MatrixXcd &b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Eigen::MatrixXcd dagger(const Eigen::MatrixXcd &m) {
  return m.adjoint();
}

// Single-qubit Pauli matrix, k in {0: I, 1: X, 2: Y, 3: Z}.
inline Eigen::Matrix2cd pauli(int k) {
  Eigen::Matrix2cd m;
  const complex_t i(0, 1);
  switch (k) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -i, i, 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("pauli: index must be in [0,3]");
  }
  return m;
}

// n-qubit Pauli string from a base-4 index, qubit 0 = most significant digit.
inline Eigen::MatrixXcd pauli_string(int n, int index) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int q = 0; q < n; ++q) {
    int digit = (index >> (2 * (n - 1 - q))) & 3;
    out = kron(out, pauli(digit));
  }
  return out;
}

// exp(-i*t*H) for Hermitian H, evaluated by eigendecomposition.
inline Eigen::MatrixXcd expi_hermitian(const Eigen::MatrixXcd &h, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("expi_hermitian: eigendecomposition failed");
  Eigen::VectorXcd phases(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k)
    phases(k) = std::exp(complex_t(0, -t * es.eigenvalues()(k)));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

inline double max_abs_diff(const Eigen::MatrixXcd &a,
                           const Eigen::MatrixXcd &b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline bool is_unitary(const Eigen::MatrixXcd &u, double tol = 1e-10) {
  if (u.rows() != u.cols()) return false;
  Eigen::MatrixXcd g = u.adjoint() * u;
  return max_abs_diff(g, Eigen::MatrixXcd::Identity(u.rows(), u.cols())) < tol;
}

// Distance between a and b minimized over a global phase on b.  Aligns the
// phase on the largest-magnitude entry of b, so exact matches return ~0.
inline double phase_aligned_distance(const Eigen::MatrixXcd &a,
                                     const Eigen::MatrixXcd &b) {
  Eigen::Index r = 0, c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  if (std::abs(b(r, c)) < 1e-14 || std::abs(a(r, c)) < 1e-14)
    return max_abs_diff(a, b);
  complex_t phase = a(r, c) / b(r, c);
  phase /= std::abs(phase);
  return max_abs_diff(a, phase * b);
}

// Computational basis column vector |index> on n qubits (qubit 0 = MSB).
inline Eigen::VectorXcd basis_state(int n, int index) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(1 << n);
  v(index) = 1.0;
  return v;
}

}  // namespace csbench
