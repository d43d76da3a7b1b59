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

#include <random>
#include <vector>

#include <Eigen/Dense>

namespace csbench {

//=========================================================================
// Density matrices
//=========================================================================

struct DensityMatrix {
  Eigen::MatrixXcd mat;

  static DensityMatrix pure(const Eigen::VectorXcd &state) {
    return {state * state.adjoint()};
  }
  static DensityMatrix computational(int n, int index);

  // Hermiticity, unit trace and positivity within tol; throws on failure.
  void validate(double tol = 1e-8) const;
};

//=========================================================================
// Quantum channels as superoperators
//=========================================================================
//
// Repo-wide convention: column-stacking vectorization.  vec(rho) stacks
// columns, vec(rho)[r + d*c] = rho(r, c), and a channel acts as
// vec(Lambda(rho)) = S vec(rho) with S of size d^2 x d^2.  For a unitary
// U the superoperator is conj(U) (x) U.  The Choi matrix is indexed
// C[(i*d + m), (j*d + n)] = <m| Lambda(|i><j|) |n> (input index major)
// and carries trace d.

class QuantumChannel {
 public:
  QuantumChannel(int n, Eigen::MatrixXcd superop);

  static QuantumChannel identity(int n);
  static QuantumChannel from_unitary(const Eigen::MatrixXcd &u);
  static QuantumChannel from_kraus(int n,
                                   const std::vector<Eigen::MatrixXcd> &ks);
  static QuantumChannel from_choi(int n, const Eigen::MatrixXcd &choi);

  // rho -> alpha * rho + (1 - alpha) * I/d.  alpha in [-1/(d^2-1), 1].
  static QuantumChannel depolarizing(int n, double alpha);

  // Single-qubit amplitude damping over duration t (seconds) with extra
  // pure dephasing so total off-diagonal decay is exp(-t/t2).  Requires
  // t >= 0 and t2 <= 2*t1; +infinity disables either process.
  static QuantumChannel damping(double t, double t1, double t2);

  int qubits() const { return n_; }
  int dim() const { return 1 << n_; }
  const Eigen::MatrixXcd &superop() const { return superop_; }
  Eigen::MatrixXcd choi() const;

  // this o rhs (rhs acts first), and the qubit-ordered tensor product.
  QuantumChannel compose(const QuantumChannel &rhs) const;
  QuantumChannel tensor(const QuantumChannel &other) const;

  Eigen::MatrixXcd apply(const Eigen::MatrixXcd &rho) const;

  bool is_trace_preserving(double tol = 1e-8) const;
  double choi_min_eigenvalue() const;
  bool is_completely_positive(double tol = 1e-8) const {
    return choi_min_eigenvalue() > -tol;
  }
  bool is_identity(double tol = 1e-12) const;

 private:
  int n_;
  Eigen::MatrixXcd superop_;
};

//=========================================================================
// Readout
//=========================================================================

// Column-stochastic assignment matrix: assignment(i, j) is the
// probability of reporting outcome i when the true outcome is j.
struct ReadoutModel {
  Eigen::MatrixXd assignment;

  static ReadoutModel ideal(int n);
  // Independent per-qubit flips: p01 = P(report 1 | true 0), p10 vice versa.
  static ReadoutModel per_qubit_flips(
      const std::vector<std::pair<double, double>> &flips);

  int outcomes() const { return int(assignment.rows()); }
  void validate(double tol = 1e-9) const;
  std::vector<double> distort(const std::vector<double> &probs) const;
};

// Samples `shots` measurement outcomes of rho in the computational basis
// through the given readout model.  Probabilities below 1e-12 are floored
// to zero (numerical noise guard) before renormalization; sampling uses an
// explicit inverse-CDF walk so results are engine-exact and portable.
std::vector<long long> measure_counts(const Eigen::MatrixXcd &rho,
                                      const ReadoutModel &readout, int shots,
                                      std::mt19937_64 &rng);

//=========================================================================
// Channel metrics
//=========================================================================

// Entanglement (process) fidelity of `actual` against a target unitary.
double process_fidelity(const QuantumChannel &actual,
                        const Eigen::MatrixXcd &target_unitary);

// r = 1 - (d*F_pro + 1)/(d + 1), the standard average-gate-error.
double average_gate_error(const QuantumChannel &actual,
                          const Eigen::MatrixXcd &target_unitary);

// Error floor set by T1/T2 alone: the average gate error of the tensor
// product of per-qubit damping channels over gate_time versus identity.
double coherence_limit(const std::vector<double> &t1s,
                       const std::vector<double> &t2s, double gate_time);

}  // namespace csbench
