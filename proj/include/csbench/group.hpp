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

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace csbench {

//=========================================================================
// CNOT-dihedral group elements in canonical phase-polynomial form
//=========================================================================
//
// An element acts on computational basis states as
//
//   |x>  ->  w^{p(x)} |L x (+) s>,   w = exp(i*pi/4),
//
// with L an invertible GF(2) matrix, s a GF(2) shift vector, and p a
// multilinear polynomial with coefficients mod 8 (degree-1 terms free,
// the degree-2 term restricted to even values).  p(0) = 0 fixes the
// global phase, making the representation canonical: two elements are
// equal iff all stored fields are equal.  Qubit 0 is the most
// significant bit of the basis index.

// One gate in a circuit description.  Only group members are accepted;
// notably H is not an element and from_gates rejects it by name.
struct GateOp {
  enum class Kind { X, Z, S, T, CNOT, CS, H };
  Kind kind;
  int q0 = 0;   // the qubit for 1q gates, the control for 2q gates
  int q1 = -1;  // the target for 2q gates

  static GateOp h(int q) { return {Kind::H, q, -1}; }
  static GateOp x(int q) { return {Kind::X, q, -1}; }
  static GateOp z(int q) { return {Kind::Z, q, -1}; }
  static GateOp s(int q) { return {Kind::S, q, -1}; }
  static GateOp t(int q) { return {Kind::T, q, -1}; }
  static GateOp cnot(int control, int target) {
    return {Kind::CNOT, control, target};
  }
  static GateOp cs(int control, int target) {
    return {Kind::CS, control, target};
  }
};

class DihedralElement {
 public:
  static DihedralElement identity(int n);

  // Builds the element of the circuit ops[0], ops[1], ... applied in that
  // order.  Throws std::invalid_argument for gates outside the group.
  static DihedralElement from_gates(int n, const std::vector<GateOp> &ops);

  // Uniform over the group: each canonical form is drawn with equal
  // probability (the canonical forms biject with group elements).
  static DihedralElement sample_uniform(int n, std::mt19937_64 &rng);

  // Rebuilds an element from its canonical fields (row-major GF(2) linear
  // part, shift bits, per-qubit phase coefficients mod 8, even quadratic
  // coefficient).  Throws std::invalid_argument on malformed fields, in
  // particular a singular linear part.
  static DihedralElement from_canonical(int n,
                                        const std::vector<uint8_t> &linear,
                                        const std::vector<uint8_t> &shift,
                                        const std::vector<uint8_t> &phase_linear,
                                        uint8_t phase_quadratic);

  // All group elements in a deterministic order (16 for n=1, 6144 for n=2).
  static std::vector<DihedralElement> enumerate(int n);

  int qubits() const { return n_; }

  // this o rhs: rhs acts first.  to_unitary(a.compose(b)) equals
  // a.to_unitary() * b.to_unitary() up to global phase.
  DihedralElement compose(const DihedralElement &rhs) const;
  DihedralElement inverse() const;

  Eigen::MatrixXcd to_unitary() const;

  // Phase-polynomial value p(x) mod 8 at basis index x.
  int phase_at(unsigned x) const;

  // Canonical fields (read-only views used for serialization and tests).
  uint8_t linear(int row, int col) const { return linear_[row * n_ + col]; }
  uint8_t shift(int i) const { return shift_[i]; }
  uint8_t phase_linear(int i) const { return phase_lin_[i]; }
  uint8_t phase_quadratic() const { return phase_quad_; }

  // Packed canonical key; equal keys iff equal elements.  Handy for
  // hashing and closure bookkeeping.
  uint64_t key() const;

  bool operator==(const DihedralElement &o) const;
  bool operator!=(const DihedralElement &o) const { return !(*this == o); }

  std::string str() const;

 private:
  explicit DihedralElement(int n);
  static void check_qubit_count(int n);
  unsigned apply_affine(unsigned x) const;  // L x (+) s on packed bits
  void compose_phase_tables(const DihedralElement &lhs,
                            const DihedralElement &rhs);

  int n_ = 1;
  std::array<uint8_t, 4> linear_{};     // row-major, n*n entries used
  std::array<uint8_t, 2> shift_{};      // n entries used
  std::array<uint8_t, 2> phase_lin_{};  // mod 8, n entries used
  uint8_t phase_quad_ = 0;              // mod 8, even; n=2 only
};

}  // namespace csbench
