// Copyright 2026 The hlearn Authors
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

#include <bit>
#include <compare>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>

#include "hlearn/errors.hpp"

namespace hlearn {

/// Largest qubit count representable by the 64-bit symplectic masks.
inline constexpr unsigned kMaxLabelQubits = 64;

/// An n-qubit Pauli operator in symplectic form x = (a, b).
///
/// The operator is P_x = i^{a.b} X^a Z^b, where a.b counts the qubits on
/// which both bits are set. With this phase every P_x is Hermitian, so
/// Hermitian operators have real Pauli coefficients.
///
/// Qubit q (position q in the string form, leftmost = 0) is stored in bit
/// (n - 1 - q) of both masks, which is also its bit in a dense basis index.
/// Dense matrices are therefore Kronecker products in string order.
struct PauliLabel {
  unsigned n = 1;
  std::uint64_t x = 0;  // a
  std::uint64_t z = 0;  // b

  static PauliLabel identity(unsigned n) { return PauliLabel{n, 0, 0}; }

  /// Parses a string over {I, X, Y, Z}.
  static PauliLabel from_string(std::string_view text) {
    if (text.empty() || text.size() > kMaxLabelQubits) {
      throw ParseError("Pauli string must have 1.." +
                       std::to_string(kMaxLabelQubits) + " characters");
    }
    PauliLabel label{static_cast<unsigned>(text.size()), 0, 0};
    for (std::size_t q = 0; q < text.size(); ++q) {
      const std::uint64_t bit = std::uint64_t{1} << (text.size() - 1 - q);
      switch (text[q]) {
        case 'I': break;
        case 'X': label.x |= bit; break;
        case 'Y': label.x |= bit; label.z |= bit; break;
        case 'Z': label.z |= bit; break;
        default:
          throw ParseError("invalid Pauli character '" + std::string(1, text[q]) +
                           "'");
      }
    }
    return label;
  }

  std::string to_string() const {
    std::string out(n, 'I');
    for (unsigned q = 0; q < n; ++q) {
      const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
      const bool has_x = (x & bit) != 0;
      const bool has_z = (z & bit) != 0;
      out[q] = has_x ? (has_z ? 'Y' : 'X') : (has_z ? 'Z' : 'I');
    }
    return out;
  }

  bool is_identity() const { return x == 0 && z == 0; }

  unsigned weight() const { return static_cast<unsigned>(std::popcount(x | z)); }

  /// Index of |x> = |b>|a> in the Bell-decoded computational basis.
  std::uint64_t index() const { return (z << n) | x; }

  static PauliLabel from_index(unsigned n, std::uint64_t index) {
    const std::uint64_t mask = n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    return PauliLabel{n, index & mask, (index >> n) & mask};
  }

  friend auto operator<=>(const PauliLabel&, const PauliLabel&) = default;
};

/// Result of multiplying two labels: P_x P_y = i^phase P_label.
struct PauliProduct {
  int phase = 0;  // exponent of i, in [0, 4)
  PauliLabel label;

  std::complex<double> phase_factor() const {
    switch (phase) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
};

/// True when P_x and P_y commute (symplectic inner product is zero).
inline bool commutes(const PauliLabel& p, const PauliLabel& q) {
  return ((std::popcount(p.x & q.z) + std::popcount(p.z & q.x)) & 1) == 0;
}

/// Multiplies two labels under the P_x = i^{a.b} X^a Z^b convention.
inline PauliProduct pauli_mul(const PauliLabel& p, const PauliLabel& q) {
  if (p.n != q.n) {
    throw DimensionError("pauli_mul: qubit counts differ (" + std::to_string(p.n) +
                         " vs " + std::to_string(q.n) + ")");
  }
  const PauliLabel r{p.n, p.x ^ q.x, p.z ^ q.z};
  // i^{a1.b1} X^a1 Z^b1 i^{a2.b2} X^a2 Z^b2
  //   = i^{a1.b1 + a2.b2} (-1)^{b1.a2} X^a3 Z^b3 = i^{... - a3.b3} P_r
  const int exponent = std::popcount(p.x & p.z) + std::popcount(q.x & q.z) +
                       2 * std::popcount(p.z & q.x) - std::popcount(r.x & r.z);
  return PauliProduct{((exponent % 4) + 4) % 4, r};
}

}  // namespace hlearn
