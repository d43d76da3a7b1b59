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

#include "csbench/group.hpp"

#include <sstream>
#include <stdexcept>

#include "csbench/linalg.hpp"

namespace csbench {

namespace {

// The six invertible 2x2 matrices over GF(2), row-major.
constexpr std::array<std::array<uint8_t, 4>, 6> kGl2F2 = {{
    {1, 0, 0, 1},
    {0, 1, 1, 0},
    {1, 1, 0, 1},
    {1, 0, 1, 1},
    {0, 1, 1, 1},
    {1, 1, 1, 0},
}};

inline uint8_t mod8(int v) { return static_cast<uint8_t>(((v % 8) + 8) % 8); }

}  // namespace

void DihedralElement::check_qubit_count(int n) {
  if (n != 1 && n != 2)
    throw std::invalid_argument(
        "DihedralElement: qubit count must be 1 or 2, got " +
        std::to_string(n));
}

DihedralElement::DihedralElement(int n) : n_(n) {
  for (int i = 0; i < n_; ++i) linear_[i * n_ + i] = 1;
}

DihedralElement DihedralElement::identity(int n) {
  check_qubit_count(n);
  return DihedralElement(n);
}

DihedralElement DihedralElement::from_canonical(
    int n, const std::vector<uint8_t> &linear, const std::vector<uint8_t> &shift,
    const std::vector<uint8_t> &phase_linear, uint8_t phase_quadratic) {
  check_qubit_count(n);
  if (linear.size() != size_t(n * n))
    throw std::invalid_argument("from_canonical: linear part needs n*n bits");
  if (shift.size() != size_t(n))
    throw std::invalid_argument("from_canonical: shift needs n bits");
  if (phase_linear.size() != size_t(n))
    throw std::invalid_argument("from_canonical: phase needs n coefficients");
  for (uint8_t b : linear)
    if (b > 1) throw std::invalid_argument("from_canonical: non-binary linear");
  for (uint8_t b : shift)
    if (b > 1) throw std::invalid_argument("from_canonical: non-binary shift");
  for (uint8_t c : phase_linear)
    if (c > 7)
      throw std::invalid_argument("from_canonical: phase coefficient >= 8");
  if (phase_quadratic > 7 || (phase_quadratic % 2) != 0)
    throw std::invalid_argument(
        "from_canonical: quadratic coefficient must be even and < 8");
  if (n == 1 && phase_quadratic != 0)
    throw std::invalid_argument(
        "from_canonical: quadratic coefficient requires two qubits");

  const int det = n == 1 ? linear[0]
                         : (linear[0] & linear[3]) ^ (linear[1] & linear[2]);
  if (det != 1)
    throw std::invalid_argument("from_canonical: singular linear part");

  DihedralElement e(n);
  for (int i = 0; i < n * n; ++i) e.linear_[i] = linear[i];
  for (int i = 0; i < n; ++i) e.shift_[i] = shift[i];
  for (int i = 0; i < n; ++i) e.phase_lin_[i] = phase_linear[i];
  e.phase_quad_ = phase_quadratic;
  return e;
}

unsigned DihedralElement::apply_affine(unsigned x) const {
  unsigned y = 0;
  for (int i = 0; i < n_; ++i) {
    unsigned bit = shift_[i];
    for (int j = 0; j < n_; ++j)
      bit ^= linear_[i * n_ + j] & ((x >> (n_ - 1 - j)) & 1u);
    y |= (bit & 1u) << (n_ - 1 - i);
  }
  return y;
}

int DihedralElement::phase_at(unsigned x) const {
  int p = 0;
  for (int i = 0; i < n_; ++i)
    if ((x >> (n_ - 1 - i)) & 1u) p += phase_lin_[i];
  if (n_ == 2 && (x & 1u) && ((x >> 1) & 1u)) p += phase_quad_;
  return mod8(p);
}

void DihedralElement::compose_phase_tables(const DihedralElement &lhs,
                                           const DihedralElement &rhs) {
  // p(x) = p_rhs(x) + p_lhs(L_rhs x (+) s_rhs), renormalized to p(0) = 0.
  // For n <= 2 the value table determines the canonical coefficients via
  // a mod-8 Moebius transform.
  const unsigned dim = 1u << n_;
  std::array<int, 4> table{};
  unsigned shift_packed = rhs.apply_affine(0);
  int norm = lhs.phase_at(shift_packed);
  for (unsigned x = 0; x < dim; ++x)
    table[x] = mod8(rhs.phase_at(x) + lhs.phase_at(rhs.apply_affine(x)) - norm);

  if (n_ == 1) {
    phase_lin_[0] = static_cast<uint8_t>(table[1]);
    phase_quad_ = 0;
  } else {
    phase_lin_[0] = static_cast<uint8_t>(table[2]);  // x = 10
    phase_lin_[1] = static_cast<uint8_t>(table[1]);  // x = 01
    phase_quad_ = mod8(table[3] - table[2] - table[1]);
  }
}

DihedralElement DihedralElement::compose(const DihedralElement &rhs) const {
  if (n_ != rhs.n_)
    throw std::invalid_argument("compose: mismatched qubit counts");
  DihedralElement out(n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      uint8_t bit = 0;
      for (int k = 0; k < n_; ++k)
        bit ^= linear_[i * n_ + k] & rhs.linear_[k * n_ + j];
      out.linear_[i * n_ + j] = bit;
    }
    uint8_t sbit = shift_[i];
    for (int k = 0; k < n_; ++k) sbit ^= linear_[i * n_ + k] & rhs.shift_[k];
    out.shift_[i] = sbit;
  }
  out.compose_phase_tables(*this, rhs);
  return out;
}

DihedralElement DihedralElement::inverse() const {
  DihedralElement out(n_);
  // Invert the affine part over GF(2).
  if (n_ == 1) {
    out.linear_[0] = 1;
  } else {
    // Adjugate of an invertible 2x2 GF(2) matrix is its inverse.
    out.linear_[0] = linear_[3];
    out.linear_[1] = linear_[1];
    out.linear_[2] = linear_[2];
    out.linear_[3] = linear_[0];
  }
  for (int i = 0; i < n_; ++i) {
    uint8_t bit = 0;
    for (int k = 0; k < n_; ++k) bit ^= out.linear_[i * n_ + k] & shift_[k];
    out.shift_[i] = bit;
  }
  // q(y) = -p(L^-1 (y (+) s)) + p(L^-1 s), tabulated then canonicalized.
  const unsigned dim = 1u << n_;
  unsigned s_packed = 0;
  for (int i = 0; i < n_; ++i) s_packed |= unsigned(shift_[i]) << (n_ - 1 - i);
  auto inv_affine = [&](unsigned y) {
    unsigned t = y ^ s_packed, x = 0;
    for (int i = 0; i < n_; ++i) {
      unsigned bit = 0;
      for (int j = 0; j < n_; ++j)
        bit ^= out.linear_[i * n_ + j] & ((t >> (n_ - 1 - j)) & 1u);
      x |= (bit & 1u) << (n_ - 1 - i);
    }
    return x;
  };
  std::array<int, 4> table{};
  int norm = phase_at(inv_affine(0));
  for (unsigned y = 0; y < dim; ++y)
    table[y] = mod8(-phase_at(inv_affine(y)) + norm);
  if (n_ == 1) {
    out.phase_lin_[0] = static_cast<uint8_t>(table[1]);
  } else {
    out.phase_lin_[0] = static_cast<uint8_t>(table[2]);
    out.phase_lin_[1] = static_cast<uint8_t>(table[1]);
    out.phase_quad_ = mod8(table[3] - table[2] - table[1]);
  }
  return out;
}

DihedralElement DihedralElement::from_gates(int n,
                                            const std::vector<GateOp> &ops) {
  check_qubit_count(n);
  auto check_q = [&](int q) {
    if (q < 0 || q >= n)
      throw std::invalid_argument("from_gates: qubit index out of range");
  };
  DihedralElement acc = identity(n);
  for (const GateOp &op : ops) {
    DihedralElement g = identity(n);
    switch (op.kind) {
      case GateOp::Kind::X:
        check_q(op.q0);
        g.shift_[op.q0] = 1;
        break;
      case GateOp::Kind::Z:
        check_q(op.q0);
        g.phase_lin_[op.q0] = 4;
        break;
      case GateOp::Kind::S:
        check_q(op.q0);
        g.phase_lin_[op.q0] = 2;
        break;
      case GateOp::Kind::T:
        check_q(op.q0);
        g.phase_lin_[op.q0] = 1;
        break;
      case GateOp::Kind::CNOT:
        check_q(op.q0);
        check_q(op.q1);
        if (op.q0 == op.q1)
          throw std::invalid_argument("from_gates: CNOT needs distinct qubits");
        g.linear_[op.q1 * n + op.q0] = 1;  // target row picks up the control
        break;
      case GateOp::Kind::CS:
        check_q(op.q0);
        check_q(op.q1);
        if (op.q0 == op.q1)
          throw std::invalid_argument("from_gates: CS needs distinct qubits");
        g.phase_quad_ = 2;
        break;
      case GateOp::Kind::H:
        throw std::invalid_argument(
            "from_gates: H is not a CNOT-dihedral group member");
      default:
        throw std::invalid_argument(
            "from_gates: gate is not a CNOT-dihedral group member");
    }
    acc = g.compose(acc);
  }
  return acc;
}

Eigen::MatrixXcd DihedralElement::to_unitary() const {
  const unsigned dim = 1u << n_;
  const complex_t w = std::exp(complex_t(0, kPi / 4));
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dim);
  for (unsigned x = 0; x < dim; ++x)
    u(apply_affine(x), x) = std::pow(w, phase_at(x));
  return u;
}

DihedralElement DihedralElement::sample_uniform(int n, std::mt19937_64 &rng) {
  check_qubit_count(n);
  DihedralElement out(n);
  auto draw = [&](uint64_t m) { return static_cast<uint32_t>(rng() % m); };
  if (n == 2) out.linear_ = kGl2F2[draw(6)];
  for (int i = 0; i < n; ++i) {
    out.shift_[i] = static_cast<uint8_t>(draw(2));
    out.phase_lin_[i] = static_cast<uint8_t>(draw(8));
  }
  if (n == 2) out.phase_quad_ = static_cast<uint8_t>(2 * draw(4));
  return out;
}

std::vector<DihedralElement> DihedralElement::enumerate(int n) {
  check_qubit_count(n);
  std::vector<DihedralElement> out;
  if (n == 1) {
    out.reserve(16);
    for (int s = 0; s < 2; ++s)
      for (int c = 0; c < 8; ++c) {
        DihedralElement e(1);
        e.shift_[0] = static_cast<uint8_t>(s);
        e.phase_lin_[0] = static_cast<uint8_t>(c);
        out.push_back(e);
      }
    return out;
  }
  out.reserve(6144);
  for (const auto &lin : kGl2F2)
    for (int s = 0; s < 4; ++s)
      for (int c0 = 0; c0 < 8; ++c0)
        for (int c1 = 0; c1 < 8; ++c1)
          for (int q = 0; q < 8; q += 2) {
            DihedralElement e(2);
            e.linear_ = lin;
            e.shift_[0] = static_cast<uint8_t>((s >> 1) & 1);
            e.shift_[1] = static_cast<uint8_t>(s & 1);
            e.phase_lin_[0] = static_cast<uint8_t>(c0);
            e.phase_lin_[1] = static_cast<uint8_t>(c1);
            e.phase_quad_ = static_cast<uint8_t>(q);
            out.push_back(e);
          }
  return out;
}

uint64_t DihedralElement::key() const {
  uint64_t k = static_cast<uint64_t>(n_);
  for (int i = 0; i < n_ * n_; ++i) k = (k << 1) | linear_[i];
  for (int i = 0; i < n_; ++i) k = (k << 1) | shift_[i];
  for (int i = 0; i < n_; ++i) k = (k << 3) | phase_lin_[i];
  k = (k << 3) | phase_quad_;
  return k;
}

bool DihedralElement::operator==(const DihedralElement &o) const {
  return n_ == o.n_ && linear_ == o.linear_ && shift_ == o.shift_ &&
         phase_lin_ == o.phase_lin_ && phase_quad_ == o.phase_quad_;
}

std::string DihedralElement::str() const {
  std::ostringstream os;
  os << "Dihedral(n=" << n_ << ", L=[";
  for (int i = 0; i < n_ * n_; ++i) os << int(linear_[i]);
  os << "], s=[";
  for (int i = 0; i < n_; ++i) os << int(shift_[i]);
  os << "], p=[";
  for (int i = 0; i < n_; ++i) os << int(phase_lin_[i]) << (i + 1 < n_ ? "," : "");
  if (n_ == 2) os << ";" << int(phase_quad_);
  os << "])";
  return os.str();
}

}  // namespace csbench
