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
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>

#include "hlearn/bch.hpp"
#include "hlearn/dense.hpp"
#include "hlearn/errors.hpp"
#include "hlearn/oracle.hpp"
#include "hlearn/pauli_polynomial.hpp"
#include "hlearn/random.hpp"
#include "hlearn/tomography.hpp"

namespace hlearn {

/// Integer-time access q -> e^{-iWq} (up to global phase).
struct IntegerEvolutionAccess {
  /// Prepares one copy of e^{-iWq}, charging its oracle cost once.
  std::function<DenseOperator(std::uint64_t q)> evolve;
  /// Charges `copies` further preparations of e^{-iWq}.
  std::function<void(std::uint64_t q, double copies)> repeat;
};

/// Access to e^{-iW_j q} through (C_j^dagger)^q, with W_j the generator of
/// C_j = e^{iHT} e^{-iH_jT}.
inline IntegerEvolutionAccess correction_access(EvolutionOracle& oracle, const SparseHamiltonian& known) {
  IntegerEvolutionAccess access;
  access.evolve = [&oracle, known](std::uint64_t q) { return oracle.correction_adjoint_power(known, q); };
  access.repeat = [&oracle](std::uint64_t q, double copies) {
    QueryRecipe recipe;
    recipe.add(oracle.min_time(), q);
    oracle.record_repeats(recipe, copies);
  };
  return access;
}

/// Access backed by a known generator; free of oracle cost. Used as a mock.
inline IntegerEvolutionAccess known_generator_access(const SparseHamiltonian& w, double global_phase = 0.0) {
  IntegerEvolutionAccess access;
  const DenseOperator wd = to_dense(w);
  access.evolve = [wd, global_phase](std::uint64_t q) {
    return DenseOperator(wd.n, std::polar(1.0, global_phase * static_cast<double>(q)) *
                                   expm_i(wd, static_cast<double>(q)).m);
  };
  access.repeat = [](std::uint64_t, std::uint64_t) {};
  return access;
}

/// Dense generator W_j with e^{iW_j} = C_j up to phase, from the traceless
/// logarithm of C_j^dagger = e^{iH_jT} e^{-iHT}.
inline TracelessLog dense_correction_generator(const SparseHamiltonian& h, const SparseHamiltonian& known, double T) {
  const DenseOperator c_adj = expm_i(known, -T) * expm_i(h, T);
  return traceless_log(c_adj);
}

struct BchTruncation {
  SparseHamiltonian generator;
  int degree = 1;
  double tail_bound = 0.0;
  double ratio = 0.0;  // 4 T e C
};

/// W^{(k)} = i sum_{r<=k} BCH_r(iH_jT, -iHT), the truncated series of the
/// generator of C_j, with the certified Frobenius tail
/// x^{k+1} / (1 - x) * ||H - H_j||_F where x = 4TeC and C = max(1, ||H||, ||H_j||).
inline BchTruncation bch_truncated_generator(const SparseHamiltonian& h, const SparseHamiltonian& known, double T,
                                             int k) {
  h.check_same_n(known);
  if (k < 1 || k > kMaxBchDegree) throw DomainError("bch_truncated_generator: degree out of range");
  if (!(T > 0.0)) throw DomainError("bch_truncated_generator: T must be positive");
  const double cap = std::max({1.0, hamiltonian_operator_norm(h), hamiltonian_operator_norm(known)});
  const double ratio = 4.0 * T * std::numbers::e * cap;
  if (!(ratio < 1.0)) {
    throw ConvergenceError("bch_truncated_generator: 4TeC = " + std::to_string(ratio) + " is not below 1");
  }
  const Complex i(0.0, 1.0);
  const PauliExpansion x = to_expansion(known) * (i * T);
  const PauliExpansion y = to_expansion(h) * (-i * T);
  PauliExpansion sum(h.num_qubits());
  for (int r = 1; r <= k; ++r) sum += bch_term(x, y, r);
  sum *= i;
  BchTruncation out{hermitian_part_coefficients(sum), k, 0.0, ratio};
  const double diff_f = coefficient_norms(h - known).l2;
  out.tail_bound = std::pow(ratio, k + 1) / (1.0 - ratio) * diff_f;
  return out;
}

struct IntegerEvolResult {
  SparseHamiltonian estimate;
  std::uint64_t t = 0;
  double delta_t = 0.0;
  double copies = 0.0;
};

/// Learns a generator W in normalized Frobenius norm from integer-time
/// evolutions e^{-iWt}, t = floor(c / (10 c_F c_inf eps)).
inline IntegerEvolResult integer_evol_learn(const IntegerEvolutionAccess& access, std::size_t s, double c_f,
                                            double c_inf, double c, double eps, double delta, std::uint64_t seed,
                                            ProbeSettings probe = {},
                                            const TomographyConfig& cfg = {}) {
  if (!(eps > 0.0) || !(c_f > 0.0) || !(c_inf > 0.0) || !(c > 0.0)) {
    throw DomainError("integer_evol_learn: parameters must be positive");
  }
  const double steps = std::floor(c / (10.0 * c_f * c_inf * eps));
  if (steps < 1.0) {
    throw RegimeError("integer_evol_learn: eps = " + std::to_string(eps) + " is above the switch threshold");
  }
  IntegerEvolResult out{SparseHamiltonian(1), static_cast<std::uint64_t>(steps), 0.0, 0};
  const double t = steps;
  out.delta_t = c_f * c_inf * t * t * eps * eps;
  const DenseOperator u = access.evolve(out.t);
  out.estimate = SparseHamiltonian(u.n);
  const StateAccess state = choi_amplitudes(u, probe, derive_seed(seed, {0x6965u}));
  const TomographyResult tomo = sparse_tomo_l2(state, s, out.delta_t, delta, derive_seed(seed, {0x6966u}), true, cfg);
  for (const auto& [label, beta] : tomo.coefficients.terms()) {
    if (!label.is_identity()) out.estimate.set(label, -beta.imag() / t);
  }
  out.copies = tomo.copies;
  access.repeat(out.t, out.copies - 1);
  return out;
}

/// (e^{-iH tau} C e^{iH_j tau})^N with tau = T + t/N and C the correction
/// unitary, which approximates e^{-i(H - H_j)t}. Charges N queries of
/// duration tau per copy.
inline DenseOperator residual_unitary(EvolutionOracle& oracle, const SparseHamiltonian& known,
                                      const DenseOperator& correction_unitary, double t, std::uint64_t steps,
                                      QueryRecipe* recipe = nullptr) {
  if (steps < 1) throw DomainError("residual_unitary: N must be at least 1");
  if (!(t > 0.0)) throw DomainError("residual_unitary: t must be positive");
  const double tau = oracle.min_time() + t / static_cast<double>(steps);
  const DenseOperator evolution = oracle.query_evolution(tau);
  if (steps > 1) {
    QueryRecipe rest;
    rest.add(tau, steps - 1);
    oracle.record_repeats(rest, 1);
  }
  if (recipe) recipe->add(tau, steps);
  const DenseOperator step = evolution * correction_unitary * expm_i(known, -tau);
  Matrix result = Matrix::Identity(step.dim(), step.dim());
  Matrix base = step.m;
  for (std::uint64_t e = steps; e != 0; e >>= 1) {
    if (e & 1) result = result * base;
    if (e > 1) base = base * base;
  }
  return DenseOperator(step.n, std::move(result));
}

/// Same, with the correction e^{iW} built from a learned generator W.
inline DenseOperator residual_unitary(EvolutionOracle& oracle, const SparseHamiltonian& known,
                                      const SparseHamiltonian& correction, double t, std::uint64_t steps,
                                      QueryRecipe* recipe = nullptr) {
  return residual_unitary(oracle, known, expm_i(correction, -1.0), t, steps, recipe);
}

}  // namespace hlearn
