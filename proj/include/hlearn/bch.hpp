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

#include <cmath>
#include <cstdint>
#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hlearn/errors.hpp"
#include "hlearn/pauli_polynomial.hpp"

namespace hlearn {

inline constexpr int kMaxBchDegree = 6;

namespace detail {

inline double factorial(int k) {
  double out = 1.0;
  for (int i = 2; i <= k; ++i) out *= i;
  return out;
}

/// Dynkin coefficient of one word over {X, Y} (bit set = Y): sum over the ways
/// of cutting it into blocks X^{r_i} Y^{s_i} of (-1)^{n-1} / (n r prod r_i! s_i!).
inline double dynkin_word_coefficient(std::uint32_t word, int r) {
  auto letter = [&](int pos) { return (word >> pos) & 1u; };
  // ways[p][b]: weighted count of splittings of the prefix [0, p) into b blocks.
  std::vector<std::vector<double>> ways(r + 1, std::vector<double>(r + 1, 0.0));
  ways[0][0] = 1.0;
  for (int p = 0; p < r; ++p) {
    for (int b = 0; b < r; ++b) {
      if (ways[p][b] == 0.0) continue;
      int xs = 0, ys = 0;
      for (int q = p; q < r; ++q) {
        if (letter(q) == 0) {
          if (ys > 0) break;  // X after Y ends the block shape
          ++xs;
        } else {
          ++ys;
        }
        ways[q + 1][b + 1] += ways[p][b] / (factorial(xs) * factorial(ys));
      }
    }
  }
  double out = 0.0;
  for (int b = 1; b <= r; ++b) {
    const double sign = (b % 2 == 1) ? 1.0 : -1.0;
    out += sign * ways[r][b] / (static_cast<double>(b) * r);
  }
  return out;
}

}  // namespace detail

/// Degree-r Baker-Campbell-Hausdorff term of log(e^X e^Y) in Dynkin form,
/// built from nested commutators [w1, [w2, ..., [w_{r-1}, w_r]]].
inline PauliExpansion bch_term(const PauliExpansion& x, const PauliExpansion& y, int r) {
  if (r < 1 || r > kMaxBchDegree) {
    throw DomainError("bch_term: degree must lie in 1.." + std::to_string(kMaxBchDegree));
  }
  x.check_same_n(y);
  if (r == 1) return x + y;
  // nested[suffix] where suffix is encoded by (length, bits).
  std::map<std::pair<int, std::uint32_t>, PauliExpansion> nested;
  auto letter_op = [&](std::uint32_t bit) -> const PauliExpansion& { return bit ? y : x; };
  std::function<const PauliExpansion&(int, std::uint32_t)> suffix = [&](int len,
                                                                       std::uint32_t bits) -> const PauliExpansion& {
    auto key = std::make_pair(len, bits);
    auto it = nested.find(key);
    if (it != nested.end()) return it->second;
    PauliExpansion value = len == 1 ? letter_op(bits & 1u)
                                    : commutator(letter_op(bits & 1u), suffix(len - 1, bits >> 1));
    return nested.emplace(key, std::move(value)).first->second;
  };
  PauliExpansion out(x.num_qubits());
  for (std::uint32_t word = 0; word < (1u << r); ++word) {
    // Last two letters equal give [w, w] = 0 at the innermost level.
    if (((word >> (r - 1)) & 1u) == ((word >> (r - 2)) & 1u)) continue;
    const double coef = detail::dynkin_word_coefficient(word, r);
    if (coef == 0.0) continue;
    out += suffix(r, word) * std::complex<double>(coef, 0.0);
  }
  return out;
}

/// The corollary constant 2^{2r-1} r^r / r!.
inline double bch_degree_constant(int r) {
  return std::pow(2.0, 2 * r - 1) * std::pow(static_cast<double>(r), r) / detail::factorial(r);
}

}  // namespace hlearn
