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
#include <cstdint>
#include <string>
#include <vector>

#include "hlearn/errors.hpp"
#include "hlearn/pauli.hpp"

namespace hlearn {

/// Basis of the F2-linear span of a set of Pauli labels in F2^{2n}.
///
/// Kept in reduced echelon form: every basis vector has a distinct leading
/// bit that no other basis vector contains.
class SpanBasis {
 public:
  explicit SpanBasis(unsigned n) : n_(n) {}

  unsigned num_qubits() const { return n_; }
  unsigned rank() const { return static_cast<unsigned>(basis_.size()); }
  const std::vector<PauliLabel>& basis() const { return basis_; }

  /// 2^rank, saturating at 2^63.
  std::uint64_t size() const { return rank() >= 63 ? (std::uint64_t{1} << 63) : (std::uint64_t{1} << rank()); }

  /// Inserts a label; returns true when it raised the rank.
  bool insert(PauliLabel v) {
    check(v);
    v = reduce(v);
    if (v.is_identity()) return false;
    const int lead = leading_bit(v);
    for (auto& b : basis_) {
      if (has_bit(b, lead)) xor_into(b, v);
    }
    basis_.push_back(v);
    return true;
  }

  bool contains(const PauliLabel& v) const {
    check(v);
    return reduce(v).is_identity();
  }

  /// All 2^rank labels in the span (identity first).
  std::vector<PauliLabel> enumerate() const {
    if (rank() > 24) throw DomainError("span too large to enumerate (rank " + std::to_string(rank()) + ")");
    std::vector<PauliLabel> out;
    out.reserve(std::size_t{1} << rank());
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << rank()); ++mask) {
      PauliLabel v = PauliLabel::identity(n_);
      for (unsigned i = 0; i < rank(); ++i) {
        if ((mask >> i) & 1) xor_into(v, basis_[i]);
      }
      out.push_back(v);
    }
    return out;
  }

 private:
  static int leading_bit(const PauliLabel& v) {
    if (v.z != 0) return 64 + std::bit_width(v.z) - 1;
    return std::bit_width(v.x) - 1;
  }
  static bool has_bit(const PauliLabel& v, int bit) {
    return bit >= 64 ? ((v.z >> (bit - 64)) & 1) != 0 : ((v.x >> bit) & 1) != 0;
  }
  static void xor_into(PauliLabel& dst, const PauliLabel& src) {
    dst.x ^= src.x;
    dst.z ^= src.z;
  }

  PauliLabel reduce(PauliLabel v) const {
    for (const auto& b : basis_) {
      if (has_bit(v, leading_bit(b))) xor_into(v, b);
    }
    return v;
  }

  void check(const PauliLabel& v) const {
    if (v.n != n_) throw DimensionError("label qubit count does not match span");
  }

  unsigned n_;
  std::vector<PauliLabel> basis_;
};

template <class Labels>
SpanBasis f2_span(unsigned n, const Labels& labels) {
  SpanBasis span(n);
  for (const PauliLabel& label : labels) span.insert(label);
  return span;
}

}  // namespace hlearn
