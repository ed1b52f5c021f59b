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

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <initializer_list>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <string_view>

#include "hlearn/dense.hpp"
#include "hlearn/errors.hpp"
#include "hlearn/pauli_polynomial.hpp"

namespace hlearn {

using Rng = std::mt19937_64;

/// splitmix64 finalizer, used to derive independent child seeds.
inline std::uint64_t mix_seed(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix_seed(base);
  for (std::uint64_t p : path) s = mix_seed(s ^ mix_seed(p + 0x632be59bd9b4e019ULL));
  return s;
}

/// FNV-1a hash of a name, for seed derivation that is stable across platforms.
inline std::uint64_t name_hash(std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : name) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Uniform double in [0, 1) from 53 random bits; identical across standard libraries.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) by rejection.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound == 0) throw DomainError("uniform_below: empty range");
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % bound;
}

/// Standard normal via Box-Muller on uniform01.
inline double standard_normal(Rng& rng) {
  double u1;
  do {
    u1 = uniform01(rng);
  } while (u1 <= 0.0);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Operator norm of a sparse Hamiltonian; the l1 norm short-circuits large n.
inline double hamiltonian_operator_norm(const SparseHamiltonian& h) {
  if (h.empty()) return 0.0;
  if (h.support_size() == 1) return h.max_abs();
  return hermitian_operator_norm(to_dense(h));
}

/// m distinct non-identity labels, coefficients uniform on [-1, 1] minus 0,
/// rescaled so the operator norm is at most norm_cap.
inline SparseHamiltonian random_sparse_hamiltonian(unsigned n, std::size_t m, std::uint64_t seed,
                                                   double norm_cap = 1.0) {
  if (n == 0 || n > kDenseDefaults.max_qubits) {
    throw DimensionError("random_sparse_hamiltonian: n must be in 1.." +
                         std::to_string(kDenseDefaults.max_qubits));
  }
  const std::uint64_t labels = (std::uint64_t{1} << (2 * n)) - 1;
  if (m < 1 || m > labels) {
    throw DomainError("random_sparse_hamiltonian: m must be in 1.." + std::to_string(labels));
  }
  if (!(norm_cap > 0.0)) throw DomainError("random_sparse_hamiltonian: norm_cap must be positive");
  Rng rng(derive_seed(seed, {0x4841u, n, m}));
  std::set<std::uint64_t> chosen;
  while (chosen.size() < m) chosen.insert(1 + uniform_below(rng, labels));
  SparseHamiltonian h(n);
  for (std::uint64_t idx : chosen) {
    double v = 0.0;
    while (std::abs(v) < 1e-3) v = 2.0 * uniform01(rng) - 1.0;
    h.set(PauliLabel::from_index(n, idx), v);
  }
  const double norm = hamiltonian_operator_norm(h);
  if (norm > norm_cap) h *= norm_cap / norm * (1.0 - 1e-12);
  return h;
}

}  // namespace hlearn
