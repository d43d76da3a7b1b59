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

// Independent test oracles, written against first principles rather than
// the library code paths they validate:
//  - breadth-first closure of generator sets over exact unitaries (group
//    orders established independently of the canonical-form counting),
//  - Kraus-level density-matrix evolution and a Pauli-basis process
//    fidelity (channel metrics without the superoperator machinery).

#pragma once

#include <complex>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

#include "csbench/linalg.hpp"

namespace csbench::testsupport {

// Canonical key of a CNOT-dihedral unitary modulo global phase.  Every
// entry is zero or an eighth root of unity; the first nonzero entry in
// row-major order is rotated to 1 and each entry becomes one digit.
inline std::string dihedral_unitary_key(const Eigen::MatrixXcd &u) {
  std::complex<double> phase(0, 0);
  for (Eigen::Index r = 0; r < u.rows() && phase == std::complex<double>(0, 0);
       ++r)
    for (Eigen::Index c = 0; c < u.cols(); ++c)
      if (std::abs(u(r, c)) > 0.5) {
        phase = u(r, c) / std::abs(u(r, c));
        break;
      }
  if (phase == std::complex<double>(0, 0))
    throw std::invalid_argument("dihedral_unitary_key: zero matrix");
  std::string key;
  key.reserve(static_cast<size_t>(u.size()));
  for (Eigen::Index r = 0; r < u.rows(); ++r)
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
      std::complex<double> z = u(r, c) / phase;
      if (std::abs(z) < 0.5) {
        key.push_back('.');
      } else {
        double turns = std::arg(z) / (csbench::kPi / 4.0);
        int k = ((static_cast<int>(std::llround(turns)) % 8) + 8) % 8;
        key.push_back(static_cast<char>('0' + k));
      }
    }
  return key;
}

// Breadth-first closure of <generators> modulo global phase; returns all
// reachable unitary keys.  Independent oracle for the group order.
inline std::unordered_set<std::string> unitary_closure_keys(
    const std::vector<Eigen::MatrixXcd> &generators) {
  if (generators.empty())
    throw std::invalid_argument("unitary_closure_keys: no generators");
  const Eigen::Index dim = generators.front().rows();
  std::unordered_set<std::string> seen;
  std::deque<Eigen::MatrixXcd> frontier;
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
  seen.insert(dihedral_unitary_key(id));
  frontier.push_back(id);
  while (!frontier.empty()) {
    Eigen::MatrixXcd cur = frontier.front();
    frontier.pop_front();
    for (const auto &g : generators) {
      Eigen::MatrixXcd next = g * cur;
      std::string key = dihedral_unitary_key(next);
      if (seen.insert(key).second) frontier.push_back(next);
    }
  }
  return seen;
}

// rho -> sum_k K rho K^dagger, plain matrix products.
inline Eigen::MatrixXcd apply_kraus(const std::vector<Eigen::MatrixXcd> &ks,
                                    const Eigen::MatrixXcd &rho) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
  for (const auto &k : ks) out += k * rho * k.adjoint();
  return out;
}

// Kraus set of a single-qubit amplitude-damping + pure-dephasing channel
// over duration t (seconds); t1/t2 may be +infinity.
inline std::vector<Eigen::MatrixXcd> damping_kraus(double t, double t1,
                                                   double t2) {
  double gamma = std::isinf(t1) ? 0.0 : -std::expm1(-t / t1);
  double dephase_rate = (std::isinf(t2) ? 0.0 : 1.0 / t2) -
                        (std::isinf(t1) ? 0.0 : 0.5 / t1);
  double lambda = std::exp(-t * dephase_rate);
  double pz = 0.5 * (1.0 - lambda);
  Eigen::Matrix2cd k0, k1, d0, d1;
  k0 << 1, 0, 0, std::sqrt(1.0 - gamma);
  k1 << 0, std::sqrt(gamma), 0, 0;
  d0 = std::sqrt(1.0 - pz) * Eigen::Matrix2cd::Identity();
  d1 << std::sqrt(pz), 0, 0, -std::sqrt(pz);
  std::vector<Eigen::MatrixXcd> out;
  for (const Eigen::Matrix2cd &a : {d0, d1})
    for (const Eigen::Matrix2cd &b : {k0, k1}) out.push_back(a * b);
  return out;
}

// Process fidelity of a channel given as a Kraus-application callback,
// against target unitary v, evaluated by evolving the d^2 Pauli-string
// inputs:  F_pro = (1/d^3) * sum_P tr[(v P v^dagger) . Lambda(P)].
template <typename ApplyFn>
double pauli_basis_process_fidelity(int n, ApplyFn &&apply,
                                    const Eigen::MatrixXcd &v) {
  const int d = 1 << n;
  double acc = 0.0;
  for (int idx = 0; idx < d * d; ++idx) {
    Eigen::MatrixXcd p = csbench::pauli_string(n, idx);
    Eigen::MatrixXcd ideal = v * p * v.adjoint();
    Eigen::MatrixXcd actual = apply(p);
    acc += (ideal.adjoint() * actual).trace().real();
  }
  return acc / double(d) / double(d * d);
}

// Average gate error of a two-qubit tensor-product damping channel versus
// the identity, via direct Kraus evolution of Pauli inputs.
inline double coherence_limit_oracle(double t1a, double t2a, double t1b,
                                     double t2b, double gate_time) {
  auto ka = damping_kraus(gate_time, t1a, t2a);
  auto kb = damping_kraus(gate_time, t1b, t2b);
  std::vector<Eigen::MatrixXcd> ks;
  for (const auto &a : ka)
    for (const auto &b : kb) ks.push_back(csbench::kron(a, b));
  auto apply = [&](const Eigen::MatrixXcd &rho) {
    return apply_kraus(ks, rho);
  };
  double fpro = pauli_basis_process_fidelity(
      2, apply, Eigen::MatrixXcd::Identity(4, 4));
  const double d = 4.0;
  return 1.0 - (d * fpro + 1.0) / (d + 1.0);
}

}  // namespace csbench::testsupport
